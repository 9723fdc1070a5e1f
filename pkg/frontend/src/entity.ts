/**
 * Entity detail loading: the record itself plus provenance for each
 * edge, so the page can badge inferred relationships.
 */

import type { EntityRecord, KgClient } from "./api.js";
import { ApiError } from "./api.js";

export interface EdgeStatus {
  status: "asserted" | "inferred";
  rule?: string;
}

export interface EntityDetail {
  record: EntityRecord;
  /** Keyed by edgeKey(); edges whose explain call failed are absent. */
  edgeStatuses: Map<string, EdgeStatus>;
}

export function edgeKey(direction: "outgoing" | "incoming", predicate: string, other: string): string {
  return `${direction}|${predicate}|${other}`;
}

/** Load an entity and the provenance of each of its edges; null when absent. */
export async function fetchEntityDetail(client: KgClient, iri: string): Promise<EntityDetail | null> {
  let record: EntityRecord;
  try {
    record = await client.entity(iri);
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      return null;
    }
    throw error;
  }
  const edgeStatuses = new Map<string, EdgeStatus>();
  const lookups: Promise<void>[] = [];
  for (const edge of record.outgoing) {
    lookups.push(
      client
        .explain(record.iri, edge.predicate, edge.target)
        .then((explained) => {
          const entry: EdgeStatus = { status: explained.status };
          if (explained.rule !== undefined) entry.rule = explained.rule;
          edgeStatuses.set(edgeKey("outgoing", edge.predicate, edge.target), entry);
        })
        .catch(() => undefined),
    );
  }
  for (const edge of record.incoming) {
    lookups.push(
      client
        .explain(edge.source, edge.predicate, record.iri)
        .then((explained) => {
          const entry: EdgeStatus = { status: explained.status };
          if (explained.rule !== undefined) entry.rule = explained.rule;
          edgeStatuses.set(edgeKey("incoming", edge.predicate, edge.source), entry);
        })
        .catch(() => undefined),
    );
  }
  await Promise.all(lookups);
  return { record, edgeStatuses };
}
