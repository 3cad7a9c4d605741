/** Payload shapes of the negdetect HTTP API, as consumed by the panels. */

export interface SpanJson {
  begin: number;
  end: number;
}

export interface TokenJson {
  span: SpanJson;
  text: string;
  is_stopword: boolean;
}

export interface SentenceJson {
  span: SpanJson;
  tokens: TokenJson[];
}

export interface ConceptJson {
  span: SpanJson;
  category: string;
  assertion: "Affirmed" | "Negated";
  source: string;
  trigger: { text: string; span: SpanJson } | null;
}

export interface AnnotateResponse {
  text: string;
  sentences: SentenceJson[];
  concepts: ConceptJson[];
}

export interface MatchRow {
  graph: number;
  root: number;
  bindings: Record<string, number>;
}

export interface MatchResponse {
  pattern: string;
  graphs: number;
  matches: MatchRow[];
}

export interface PatternInfo {
  text: string;
  kind: "NEG" | "POS" | null;
}

export interface PatternsResponse {
  patterns: PatternInfo[];
}

export interface TriggerSetInfo {
  name: string;
  default: boolean;
  counts: Record<string, number>;
  total: number;
  triggers: { pattern: string; type: string }[];
}

export interface TriggersResponse {
  trigger_sets: TriggerSetInfo[];
}

/** Error body emitted by the server, plus status 0 for network failures. */
export interface ApiFailure {
  status: number;
  error: string;
  detail: string;
  offset?: number;
  line?: number;
}

export type ApiResult<T> = { ok: true; value: T } | { ok: false; failure: ApiFailure };

export interface FixtureEntry {
  id: string;
  file: string;
  text: string;
  /** Optional id of a contrastive parse shown side by side (other language). */
  pairWith?: string;
}
