/**
 * Guided wizard over the canonical modelling chain.
 *
 * Each stage is backed by exactly one structured query, so the
 * candidate list shown to the user is a whole API response. The
 * response text is stored verbatim in the stage, which makes the
 * "candidates match the API byte for byte" invariant directly
 * checkable: no client-side filtering ever touches the list.
 *
 * State transitions are pure: stepping or going back returns a new
 * state and never mutates the old one, so a failed fetch leaves the
 * previous state intact and the step can simply be retried.
 */

import type { BindingTableJson, QueryPoster } from "./api.js";
import { errorFromResponse } from "./api.js";
import type { ChainSpec } from "./chain.js";
import { STAGE_COUNT } from "./chain.js";
import { localName } from "./terms.js";

export interface WizardStage {
  stageIndex: number;
  /** The query text sent to /api/query for this stage. */
  query: string;
  /** The exact response body the server returned, byte for byte. */
  rawResponse: string;
  /** Candidate IRIs parsed from rawResponse, in server order, unfiltered. */
  candidates: string[];
}

export interface WizardSelection {
  stageIndex: number;
  iri: string;
  classIri: string;
  label: string;
}

export interface WizardState {
  /** One selection per completed stage, in chain order. */
  steps: WizardSelection[];
  /** The stage awaiting a choice, or null once the chain is complete. */
  current: WizardStage | null;
  /** Stages behind us, kept verbatim so back-navigation restores them exactly. */
  history: WizardStage[];
}

/** The query that produces the candidate list for a stage. */
export function candidatesQuery(spec: ChainSpec, stageIndex: number, fromIri?: string): string {
  const classIri = spec.classIris[stageIndex];
  if (classIri === undefined) throw new Error(`no chain stage ${stageIndex}`);
  if (stageIndex === 0 || fromIri === undefined) {
    return `SELECT ?entity WHERE { ?entity a <${classIri}> }`;
  }
  const edgeIri = spec.edgeIris[stageIndex - 1];
  return `SELECT ?entity WHERE { <${fromIri}> <${edgeIri}> ?entity . ?entity a <${classIri}> }`;
}

export async function fetchStage(
  client: QueryPoster,
  spec: ChainSpec,
  stageIndex: number,
  fromIri?: string,
): Promise<WizardStage> {
  const query = candidatesQuery(spec, stageIndex, fromIri);
  const raw = await client.postRaw("/api/query", { query });
  if (raw.status !== 200) {
    throw errorFromResponse(raw);
  }
  const table = JSON.parse(raw.text) as BindingTableJson;
  const candidates = table.rows.map((row) => {
    const term = row[0];
    if (term === undefined || term.type !== "iri") {
      throw new Error("candidate query returned a non-IRI binding");
    }
    return term.value;
  });
  return { stageIndex, query, rawResponse: raw.text, candidates };
}

export async function startWizard(client: QueryPoster, spec: ChainSpec): Promise<WizardState> {
  const first = await fetchStage(client, spec, 0);
  return { steps: [], current: first, history: [] };
}

/**
 * Record a choice and advance one stage.
 *
 * The choice must be one of the current candidates. On the final stage
 * the chain completes and `current` becomes null; otherwise the next
 * stage's candidates are fetched before the new state is built, so a
 * fetch failure leaves the given state untouched.
 */
export async function stepWizard(
  client: QueryPoster,
  spec: ChainSpec,
  state: WizardState,
  choiceIri: string,
  label?: string,
): Promise<WizardState> {
  const stage = state.current;
  if (stage === null) {
    throw new Error("the chain is already complete");
  }
  if (!stage.candidates.includes(choiceIri)) {
    throw new Error(`${choiceIri} is not among the current candidates`);
  }
  const classIri = spec.classIris[stage.stageIndex];
  if (classIri === undefined) throw new Error(`no chain stage ${stage.stageIndex}`);
  const selection: WizardSelection = {
    stageIndex: stage.stageIndex,
    iri: choiceIri,
    classIri,
    label: label ?? localName(choiceIri),
  };
  const next =
    stage.stageIndex === STAGE_COUNT - 1
      ? null
      : await fetchStage(client, spec, stage.stageIndex + 1, choiceIri);
  return {
    steps: [...state.steps, selection],
    current: next,
    history: [...state.history, stage],
  };
}

/**
 * Drop the most recent selection and restore the previous stage.
 *
 * The restored stage is the very object recorded when it was first
 * fetched, so its candidates (and raw response) are exactly what the
 * API sent at the time; nothing is refetched.
 */
export function backWizard(state: WizardState): WizardState {
  const history = [...state.history];
  const previous = history.pop();
  if (previous === undefined) {
    throw new Error("already at the first stage");
  }
  return { steps: state.steps.slice(0, -1), current: previous, history };
}

export function isComplete(state: WizardState): boolean {
  return state.current === null;
}

/** True when the current stage offers no candidates to choose from. */
export function isDeadEnd(state: WizardState): boolean {
  return state.current !== null && state.current.candidates.length === 0;
}
