/**
 * Pure view rendering: every function maps state to an HTML string.
 *
 * Keeping these free of DOM and fetch calls means the whole visual
 * layer is testable as plain string assertions; main.ts wires the
 * strings into the page and handles events.
 */

import type {
  ApiError,
  BindingTableJson,
  SchemaInfo,
  SearchResponse,
  TermJson,
} from "./api.js";
import type { ChainSpec } from "./chain.js";
import type { EntityDetail } from "./entity.js";
import { edgeKey } from "./entity.js";
import { typesetFormula } from "./formula.js";
import { formatRoute } from "./routes.js";
import { displayLabel, escapeAttr, escapeHtml, localName, shrinkIri, termText } from "./terms.js";
import type { WizardState } from "./wizard.js";
import { isComplete, isDeadEnd } from "./wizard.js";

const RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label";
const RDFS_COMMENT = "http://www.w3.org/2000/01/rdf-schema#comment";

function entityLink(iri: string, label: string): string {
  const href = formatRoute({ view: "entity", iri });
  return `<a href="${escapeAttr(href)}">${escapeHtml(label)}</a>`;
}

// -- search -----------------------------------------------------------------

export function renderSearch(query: string, response: SearchResponse | null): string {
  const parts: string[] = [];
  parts.push(`<section class="view view-search">`);
  parts.push(`<h2>Search</h2>`);
  parts.push(
    `<form data-action="search-form" class="search-form">` +
      `<input type="search" name="q" placeholder="labels and descriptions" ` +
      `value="${escapeAttr(query)}" aria-label="Search terms">` +
      `<button type="submit">Search</button></form>`,
  );
  if (response !== null) {
    if (response.hits.length === 0) {
      parts.push(`<p class="empty">No matches for "${escapeHtml(response.query)}".</p>`);
    } else {
      parts.push(`<ul class="search-hits">`);
      for (const hit of response.hits) {
        parts.push(
          `<li>${entityLink(hit.iri, hit.label)} ` +
            `<span class="hit-meta">${escapeHtml(hit.matchField)}, ${escapeHtml(hit.rank)}</span></li>`,
        );
      }
      parts.push(`</ul>`);
    }
  }
  parts.push(`</section>`);
  return parts.join("");
}

// -- entity detail ----------------------------------------------------------

function statusBadge(detail: EntityDetail, direction: "outgoing" | "incoming", predicate: string, other: string): string {
  const status = detail.edgeStatuses.get(edgeKey(direction, predicate, other));
  if (status === undefined || status.status !== "inferred") {
    return "";
  }
  const title = status.rule !== undefined ? ` title="${escapeAttr(status.rule)}"` : "";
  return ` <span class="badge badge-inferred"${title}>inferred</span>`;
}

function renderEdgeGroups(
  detail: EntityDetail,
  direction: "outgoing" | "incoming",
  schema: SchemaInfo,
  labels: ReadonlyMap<string, string>,
): string {
  const edges =
    direction === "outgoing"
      ? detail.record.outgoing.map((e) => ({ predicate: e.predicate, other: e.target }))
      : detail.record.incoming.map((e) => ({ predicate: e.predicate, other: e.source }));
  if (edges.length === 0) return "";
  const groups = new Map<string, string[]>();
  for (const edge of edges) {
    const bucket = groups.get(edge.predicate) ?? [];
    bucket.push(edge.other);
    groups.set(edge.predicate, bucket);
  }
  const parts: string[] = [];
  const heading = direction === "outgoing" ? "Relations" : "Referenced by";
  parts.push(`<section class="edges edges-${direction}"><h3>${heading}</h3><dl>`);
  for (const [predicate, others] of groups) {
    parts.push(`<dt><code>${escapeHtml(shrinkIri(predicate, schema.prefixes))}</code></dt>`);
    for (const other of others) {
      const label = labels.get(other) ?? localName(other);
      parts.push(`<dd>${entityLink(other, label)}${statusBadge(detail, direction, predicate, other)}</dd>`);
    }
  }
  parts.push(`</dl></section>`);
  return parts.join("");
}

export function renderEntity(
  detail: EntityDetail,
  schema: SchemaInfo,
  labels: ReadonlyMap<string, string>,
  typeset: boolean,
): string {
  const record = detail.record;
  const parts: string[] = [];
  parts.push(`<article class="view view-entity">`);
  parts.push(`<h2>${escapeHtml(displayLabel(record.iri, record.label))}</h2>`);
  parts.push(`<p class="iri"><code>${escapeHtml(record.iri)}</code></p>`);
  if (record.types.length > 0) {
    const chips = record.types
      .map((t) => `<span class="chip">${escapeHtml(shrinkIri(t, schema.prefixes))}</span>`)
      .join(" ");
    parts.push(`<p class="types">${chips}</p>`);
  }
  if (record.description !== null) {
    parts.push(`<p class="description">${escapeHtml(record.description)}</p>`);
  }

  const externalIds: string[] = [];
  const formulas: string[] = [];
  const plainAttributes: { predicate: string; value: TermJson }[] = [];
  for (const attribute of record.literalAttributes) {
    if (attribute.predicate === RDFS_LABEL || attribute.predicate === RDFS_COMMENT) {
      continue;
    }
    if (localName(attribute.predicate) === "externalId") {
      externalIds.push(attribute.value.value);
    } else if (localName(attribute.predicate) === "formulaLatex") {
      formulas.push(attribute.value.value);
    } else {
      plainAttributes.push(attribute);
    }
  }

  if (externalIds.length > 0) {
    const items = externalIds.map((id) => `<li><code>${escapeHtml(id)}</code></li>`).join("");
    parts.push(`<section class="external-ids"><h3>External identifiers</h3><ul>${items}</ul></section>`);
  }
  if (formulas.length > 0) {
    parts.push(`<section class="formulas"><h3>Formulation</h3>`);
    for (const formula of formulas) {
      const shown = typeset ? typesetFormula(formula) : formula;
      parts.push(`<p><code class="formula">${escapeHtml(shown)}</code></p>`);
    }
    const toggleLabel = typeset ? "Show LaTeX source" : "Typeset";
    parts.push(`<button type="button" data-action="toggle-typeset">${toggleLabel}</button>`);
    parts.push(`</section>`);
  }
  if (plainAttributes.length > 0) {
    parts.push(`<section class="attributes"><h3>Attributes</h3><dl>`);
    for (const attribute of plainAttributes) {
      parts.push(`<dt><code>${escapeHtml(shrinkIri(attribute.predicate, schema.prefixes))}</code></dt>`);
      parts.push(`<dd>${escapeHtml(termText(attribute.value, schema.prefixes))}</dd>`);
    }
    parts.push(`</dl></section>`);
  }
  parts.push(renderEdgeGroups(detail, "outgoing", schema, labels));
  parts.push(renderEdgeGroups(detail, "incoming", schema, labels));
  parts.push(`</article>`);
  return parts.join("");
}

export function renderNotFound(iri: string): string {
  const searchHref = formatRoute({ view: "search" });
  return (
    `<section class="view view-not-found"><h2>Not found</h2>` +
    `<p>No entity <code>${escapeHtml(iri)}</code> is present in the graph.</p>` +
    `<p><a href="${escapeAttr(searchHref)}">Back to search</a></p></section>`
  );
}

// -- wizard -----------------------------------------------------------------

export interface WizardViewError {
  message: string;
  /** The choice that failed, so a retry can resubmit it; null for loads. */
  choiceIri: string | null;
}

export function renderWizard(
  state: WizardState | null,
  spec: ChainSpec,
  labels: ReadonlyMap<string, string>,
  error: WizardViewError | null,
): string {
  const parts: string[] = [];
  parts.push(`<section class="view view-wizard"><h2>Guided chain</h2>`);
  parts.push(`<ol class="wizard-progress">`);
  for (let index = 0; index < spec.stageLabels.length; index += 1) {
    const stageLabel = spec.stageLabels[index] as string;
    const selection = state?.steps[index];
    const currentIndex = state?.current?.stageIndex;
    const marker = selection !== undefined ? "done" : index === currentIndex ? "active" : "pending";
    const chosen =
      selection !== undefined
        ? `: ${entityLink(selection.iri, labels.get(selection.iri) ?? selection.label)}`
        : "";
    parts.push(`<li class="stage-${marker}">${escapeHtml(stageLabel)}${chosen}</li>`);
  }
  parts.push(`</ol>`);

  if (error !== null) {
    parts.push(`<div class="error-panel"><p>${escapeHtml(error.message)}</p>`);
    if (error.choiceIri !== null) {
      parts.push(
        `<button type="button" data-action="wizard-retry" data-iri="${escapeAttr(error.choiceIri)}">Retry</button>`,
      );
    } else {
      parts.push(`<button type="button" data-action="wizard-reload">Retry</button>`);
    }
    parts.push(`</div>`);
  }

  if (state === null) {
    parts.push(`<p class="loading">Loading…</p></section>`);
    return parts.join("");
  }

  if (isComplete(state)) {
    parts.push(`<p class="wizard-complete">Chain complete:</p><ol class="chain-result">`);
    for (const step of state.steps) {
      parts.push(`<li>${entityLink(step.iri, labels.get(step.iri) ?? step.label)}</li>`);
    }
    parts.push(`</ol>`);
  } else if (state.current !== null) {
    const stage = state.current;
    const stageLabel = spec.stageLabels[stage.stageIndex] ?? `stage ${stage.stageIndex}`;
    if (isDeadEnd(state)) {
      parts.push(
        `<p class="dead-end">Dead end: the graph records no ${escapeHtml(stageLabel.toLowerCase())} ` +
          `continuing this chain.</p>`,
      );
    } else {
      parts.push(`<h3>Choose a ${escapeHtml(stageLabel.toLowerCase())}</h3>`);
      parts.push(`<ul class="candidates">`);
      for (const candidate of stage.candidates) {
        const label = labels.get(candidate) ?? localName(candidate);
        parts.push(
          `<li><button type="button" data-action="wizard-choose" ` +
            `data-iri="${escapeAttr(candidate)}">${escapeHtml(label)}</button></li>`,
        );
      }
      parts.push(`</ul>`);
    }
  }

  if (state.history.length > 0) {
    parts.push(`<button type="button" data-action="wizard-back">Back</button>`);
  }
  parts.push(`<button type="button" data-action="wizard-restart">Start over</button>`);
  parts.push(`</section>`);
  return parts.join("");
}

// -- query console ----------------------------------------------------------

export interface QueryConsoleState {
  queryText: string;
  result: BindingTableJson | null;
  error: ApiError | null;
  sortColumn: number | null;
  sortAscending: boolean;
}

/** Stable sort of result rows by one column's display text. */
export function sortRows(
  rows: TermJson[][],
  column: number,
  ascending: boolean,
  prefixes: Record<string, string>,
): TermJson[][] {
  const keyed = rows.map((row, index) => {
    const term = row[column];
    return { row, index, key: term !== undefined ? termText(term, prefixes) : "" };
  });
  keyed.sort((a, b) => {
    const order = a.key < b.key ? -1 : a.key > b.key ? 1 : 0;
    const oriented = ascending ? order : -order;
    return oriented !== 0 ? oriented : a.index - b.index;
  });
  return keyed.map((entry) => entry.row);
}

export function renderQueryConsole(state: QueryConsoleState, prefixes: Record<string, string>): string {
  const parts: string[] = [];
  parts.push(`<section class="view view-query"><h2>Query console</h2>`);
  parts.push(
    `<form data-action="query-form" class="query-form">` +
      `<textarea name="query" rows="6" spellcheck="false" ` +
      `aria-label="Query text">${escapeHtml(state.queryText)}</textarea>` +
      `<button type="submit">Run</button></form>`,
  );
  if (state.error !== null) {
    const detail = state.error.detail;
    const where =
      detail !== undefined && detail.line !== undefined && detail.column !== undefined
        ? ` at line ${detail.line}, column ${detail.column}`
        : "";
    parts.push(
      `<div class="error-panel"><p>${escapeHtml(state.error.code)}${escapeHtml(where)}: ` +
        `${escapeHtml(state.error.message)}</p></div>`,
    );
  }
  if (state.result !== null) {
    const rows =
      state.sortColumn !== null
        ? sortRows(state.result.rows, state.sortColumn, state.sortAscending, prefixes)
        : state.result.rows;
    parts.push(`<p class="row-count">${rows.length} rows</p>`);
    parts.push(`<table class="results"><thead><tr>`);
    state.result.variables.forEach((variable, index) => {
      const arrow =
        state.sortColumn === index ? (state.sortAscending ? " ▲" : " ▼") : "";
      parts.push(
        `<th><button type="button" data-action="sort-column" data-column="${index}">` +
          `?${escapeHtml(variable)}${arrow}</button></th>`,
      );
    });
    parts.push(`</tr></thead><tbody>`);
    for (const row of rows) {
      parts.push(`<tr>`);
      for (const term of row) {
        const text = termText(term, prefixes);
        const cell =
          term.type === "iri" ? entityLink(term.value, text) : escapeHtml(text);
        parts.push(`<td>${cell}</td>`);
      }
      parts.push(`</tr>`);
    }
    parts.push(`</tbody></table>`);
  }
  parts.push(`</section>`);
  return parts.join("");
}

// -- schema reference -------------------------------------------------------

export function renderSchema(schema: SchemaInfo): string {
  const parts: string[] = [];
  parts.push(`<section class="view view-schema"><h2>Schema</h2>`);

  parts.push(`<h3>Prefixes</h3><dl class="prefixes">`);
  for (const [prefix, base] of Object.entries(schema.prefixes)) {
    parts.push(`<dt><code>${escapeHtml(prefix)}:</code></dt><dd><code>${escapeHtml(base)}</code></dd>`);
  }
  parts.push(`</dl>`);

  parts.push(`<h3>Classes</h3><table class="schema-classes"><thead><tr>` +
    `<th>Class</th><th>Label</th><th>Ontology</th></tr></thead><tbody>`);
  for (const cls of schema.classes) {
    parts.push(
      `<tr><td><code>${escapeHtml(shrinkIri(cls.iri, schema.prefixes))}</code></td>` +
        `<td>${escapeHtml(cls.label)}</td><td>${escapeHtml(cls.ontology)}</td></tr>`,
    );
  }
  parts.push(`</tbody></table>`);

  parts.push(`<h3>Properties</h3><table class="schema-properties"><thead><tr>` +
    `<th>Property</th><th>Domain</th><th>Range</th><th>Inverse</th><th>Transitive</th></tr></thead><tbody>`);
  for (const property of schema.properties) {
    const inverse =
      property.inverseOf !== null ? shrinkIri(property.inverseOf, schema.prefixes) : "";
    parts.push(
      `<tr><td><code>${escapeHtml(shrinkIri(property.iri, schema.prefixes))}</code></td>` +
        `<td><code>${escapeHtml(shrinkIri(property.domain, schema.prefixes))}</code></td>` +
        `<td><code>${escapeHtml(shrinkIri(property.range, schema.prefixes))}</code></td>` +
        `<td><code>${escapeHtml(inverse)}</code></td>` +
        `<td>${property.transitive ? "yes" : ""}</td></tr>`,
    );
  }
  parts.push(`</tbody></table>`);

  parts.push(`<h3>Annotation predicates</h3><ul class="annotations">`);
  for (const predicate of schema.annotationPredicates) {
    parts.push(`<li><code>${escapeHtml(shrinkIri(predicate, schema.prefixes))}</code></li>`);
  }
  parts.push(`</ul></section>`);
  return parts.join("");
}

// -- generic error ----------------------------------------------------------

export function renderLoadError(message: string): string {
  return (
    `<section class="view view-error"><h2>Request failed</h2>` +
    `<p>${escapeHtml(message)}</p>` +
    `<button type="button" data-action="reload-view">Retry</button></section>`
  );
}
