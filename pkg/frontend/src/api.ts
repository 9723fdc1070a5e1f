/**
 * Typed client for the kg-service JSON API.
 *
 * Every call goes through `getRaw`/`postRaw`, which keep the exact
 * response text; the wizard relies on that to store candidate lists
 * byte-for-byte as the server sent them.
 */

export interface TermJson {
  type: "iri" | "literal";
  value: string;
  lang?: string;
  datatype?: string;
}

export interface TripleJson {
  subject: string;
  predicate: string;
  object: TermJson;
}

export interface HealthInfo {
  status: string;
  tripleCounts: { asserted: number; inferred: number; total: number };
  datasetPaths: string[];
  startedAt: string;
}

export interface SchemaClassInfo {
  iri: string;
  label: string;
  ontology: string;
}

export interface SchemaPropertyInfo {
  iri: string;
  label: string;
  kind: string;
  domain: string;
  range: string;
  inverseOf: string | null;
  transitive: boolean;
}

export interface SchemaInfo {
  prefixes: Record<string, string>;
  classes: SchemaClassInfo[];
  properties: SchemaPropertyInfo[];
  annotationPredicates: string[];
}

export interface SearchHitInfo {
  iri: string;
  label: string;
  matchField: "label" | "description";
  rank: "exact" | "prefix" | "substring";
}

export interface SearchResponse {
  query: string;
  hits: SearchHitInfo[];
}

export interface EntitySummary {
  iri: string;
  label: string | null;
  types: string[];
}

export interface EntityListing {
  items: EntitySummary[];
  total: number;
  limit: number;
  offset: number;
}

export interface LiteralAttribute {
  predicate: string;
  value: TermJson;
}

export interface EntityRecord {
  iri: string;
  types: string[];
  label: string | null;
  description: string | null;
  literalAttributes: LiteralAttribute[];
  outgoing: { predicate: string; target: string }[];
  incoming: { predicate: string; source: string }[];
}

export interface ChainStepJson {
  iri: string;
  classIri: string;
}

export interface ChainJson {
  steps: ChainStepJson[];
  edges: string[];
  complete: boolean;
}

export interface ChainsResponse {
  start: string;
  chains: ChainJson[];
}

export interface NeighborsResponse {
  iri: string;
  direction: string;
  neighbors: Record<string, string[]>;
}

export interface CompetencyResponse {
  kind: string;
  target: string;
  results: string[];
}

export interface BindingTableJson {
  variables: string[];
  rows: TermJson[][];
}

export interface ExplainResponse {
  triple: TripleJson;
  status: "asserted" | "inferred";
  rule?: string;
  premises?: TripleJson[];
}

export interface ApiErrorDetail {
  kind?: string;
  line?: number;
  column?: number;
  [key: string]: unknown;
}

export interface ApiErrorBody {
  error: { code: string; message: string; detail?: ApiErrorDetail };
}

export interface RawResponse {
  status: number;
  text: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail?: ApiErrorDetail,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Turn a non-2xx response into an ApiError, tolerating malformed bodies. */
export function errorFromResponse(raw: RawResponse): ApiError {
  let body: ApiErrorBody | null = null;
  try {
    body = JSON.parse(raw.text) as ApiErrorBody;
  } catch {
    body = null;
  }
  if (body && body.error) {
    return new ApiError(raw.status, body.error.code, body.error.message, body.error.detail);
  }
  return new ApiError(raw.status, "INTERNAL", `unexpected response (${raw.status})`);
}

/** Narrow surface the wizard needs; lets tests substitute a stub. */
export interface QueryPoster {
  postRaw(path: string, payload: unknown): Promise<RawResponse>;
}

export class KgClient implements QueryPoster {
  constructor(readonly baseUrl: string) {}

  async getRaw(path: string): Promise<RawResponse> {
    const response = await fetch(this.baseUrl + path);
    return { status: response.status, text: await response.text() };
  }

  async postRaw(path: string, payload: unknown): Promise<RawResponse> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return { status: response.status, text: await response.text() };
  }

  private decode<T>(raw: RawResponse): T {
    if (raw.status >= 200 && raw.status < 300) {
      return JSON.parse(raw.text) as T;
    }
    throw errorFromResponse(raw);
  }

  private async get<T>(path: string): Promise<T> {
    return this.decode<T>(await this.getRaw(path));
  }

  health(): Promise<HealthInfo> {
    return this.get("/api/health");
  }

  schema(): Promise<SchemaInfo> {
    return this.get("/api/schema");
  }

  search(query: string, limit?: number): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query });
    if (limit !== undefined) params.set("limit", String(limit));
    return this.get(`/api/search?${params}`);
  }

  entities(options: { type?: string; limit?: number; offset?: number } = {}): Promise<EntityListing> {
    const params = new URLSearchParams();
    if (options.type !== undefined) params.set("type", options.type);
    if (options.limit !== undefined) params.set("limit", String(options.limit));
    if (options.offset !== undefined) params.set("offset", String(options.offset));
    const suffix = params.size > 0 ? `?${params}` : "";
    return this.get(`/api/entities${suffix}`);
  }

  entity(iri: string): Promise<EntityRecord> {
    return this.get(`/api/entities/${encodeURIComponent(iri)}`);
  }

  chains(iri: string): Promise<ChainsResponse> {
    return this.get(`/api/entities/${encodeURIComponent(iri)}/chains`);
  }

  neighbors(iri: string, direction?: string): Promise<NeighborsResponse> {
    const suffix = direction ? `?direction=${encodeURIComponent(direction)}` : "";
    return this.get(`/api/entities/${encodeURIComponent(iri)}/neighbors${suffix}`);
  }

  competency(kind: string, target: string): Promise<CompetencyResponse> {
    const params = new URLSearchParams({ kind, target });
    return this.get(`/api/competency?${params}`);
  }

  async query(text: string): Promise<BindingTableJson> {
    return this.decode<BindingTableJson>(await this.postRaw("/api/query", { query: text }));
  }

  explain(subject: string, predicate: string, object: string): Promise<ExplainResponse> {
    const params = new URLSearchParams({ s: subject, p: predicate, o: object });
    return this.get(`/api/explain?${params}`);
  }
}
