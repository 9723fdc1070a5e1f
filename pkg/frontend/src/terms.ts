/** Small helpers for IRIs, terms, and HTML-safe text. */

import type { SchemaInfo, TermJson } from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;");
}

export function escapeAttr(text: string): string {
  return escapeHtml(text).replaceAll('"', "&quot;");
}

/** The part of an IRI after the last `#` or `/`. */
export function localName(iri: string): string {
  const hash = iri.lastIndexOf("#");
  const slash = iri.lastIndexOf("/");
  return iri.slice(Math.max(hash, slash) + 1);
}

/** Compress an IRI to a CURIE when a known prefix matches, else return it unchanged. */
export function shrinkIri(iri: string, prefixes: Record<string, string>): string {
  let best: string | null = null;
  let bestBase = "";
  for (const [prefix, base] of Object.entries(prefixes)) {
    if (iri.startsWith(base) && base.length > bestBase.length) {
      best = `${prefix}:${iri.slice(base.length)}`;
      bestBase = base;
    }
  }
  return best ?? iri;
}

/** Human-readable text for a query-result term. */
export function termText(term: TermJson, prefixes: Record<string, string>): string {
  if (term.type === "iri") {
    return shrinkIri(term.value, prefixes);
  }
  let suffix = "";
  if (term.lang) suffix = `@${term.lang}`;
  else if (term.datatype) suffix = `^^${shrinkIri(term.datatype, prefixes)}`;
  return `"${term.value}"${suffix}`;
}

/** Display label for an entity: prefer the given label, fall back to the local name. */
export function displayLabel(iri: string, label: string | null): string {
  return label ?? localName(iri);
}

/** Look up the human label a schema assigns to a class or property IRI. */
export function schemaLabel(iri: string, schema: SchemaInfo): string {
  for (const cls of schema.classes) {
    if (cls.iri === iri) return cls.label;
  }
  for (const prop of schema.properties) {
    if (prop.iri === iri) return prop.label;
  }
  return localName(iri);
}
