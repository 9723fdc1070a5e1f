/**
 * The canonical modelling chain the wizard walks:
 * application domain, application problem, mathematical model,
 * algorithmic problem, algorithm, software.
 *
 * Class and edge IRIs are resolved from the live /api/schema response
 * so the UI never hardcodes a namespace.
 */

import type { SchemaInfo } from "./api.js";
import { localName } from "./terms.js";

const CLASS_SEQUENCE = [
  "ApplicationDomain",
  "ApplicationProblem",
  "MathematicalModel",
  "AlgorithmicProblem",
  "Algorithm",
  "Software",
] as const;

const EDGE_SEQUENCE = [
  "containsProblem",
  "modeledBy",
  "usesAlgorithmicProblem",
  "solvedBy",
  "implementedBy",
] as const;

export interface ChainSpec {
  /** Class IRIs, one per stage, in walk order. */
  classIris: string[];
  /** Edge IRIs connecting stage i to stage i + 1. */
  edgeIris: string[];
  /** Human labels for each stage, from the schema. */
  stageLabels: string[];
}

export function resolveChainSpec(schema: SchemaInfo): ChainSpec {
  const classIris: string[] = [];
  const stageLabels: string[] = [];
  for (const name of CLASS_SEQUENCE) {
    const cls = schema.classes.find((c) => localName(c.iri) === name);
    if (!cls) throw new Error(`schema is missing chain class ${name}`);
    classIris.push(cls.iri);
    stageLabels.push(cls.label);
  }
  const edgeIris: string[] = [];
  for (const name of EDGE_SEQUENCE) {
    const prop = schema.properties.find((p) => localName(p.iri) === name);
    if (!prop) throw new Error(`schema is missing chain property ${name}`);
    edgeIris.push(prop.iri);
  }
  return { classIris, edgeIris, stageLabels };
}

export const STAGE_COUNT = CLASS_SEQUENCE.length;
