// Typed REST client for the annotation-assistant server. All numbers shown
// in the UI come from these responses verbatim; nothing is recomputed
// client-side.

export interface Stats {
  n_nodes: number;
  n_edges: number;
  embedding_nnz: number;
  embedding_stale: boolean;
  journal_entries: number;
  seed: number;
}

export interface NodeHit {
  id: number;
  iri: string;
}

export interface NodeSearch {
  total: number;
  offset: number;
  results: NodeHit[];
}

export interface Candidate {
  u: string;
  v: string;
  score: number;
  kind: "missing" | "redundant";
}

export interface CandidateList {
  kind: string;
  k: number;
  stale: boolean;
  candidates: Candidate[];
}

export interface Contribution {
  feature: string | number;
  value: number;
}

export interface LocalExplanation {
  u: number;
  v: number;
  total: number;
  contributions: Contribution[];
}

export interface GlobalFeature {
  feature: string | number;
  beta: number;
  se: number;
  t: number;
}

export interface FeedbackError {
  u: string;
  v: string;
  action: string;
  reason: string;
}

export interface FeedbackResult {
  applied: number;
  errors: FeedbackError[];
  stale: boolean;
}

export interface ApiError {
  code: string;
  message: string;
  detail?: unknown;
}

export class HttpError extends Error {
  constructor(
    public status: number,
    public body: ApiError,
  ) {
    super(body.message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(path, init);
  const body = await res.json();
  if (!res.ok) {
    throw new HttpError(res.status, body as ApiError);
  }
  return body as T;
}

export const api = {
  stats: () => request<Stats>("/stats"),

  searchNodes: (q: string, offset = 0, limit = 50) =>
    request<NodeSearch>(
      `/nodes?q=${encodeURIComponent(q)}&offset=${offset}&limit=${limit}`,
    ),

  candidates: (kind: "missing" | "redundant", k: number, nodes: string[] = []) => {
    let url = `/candidates?kind=${kind}&k=${k}`;
    if (nodes.length > 0) {
      url += `&nodes=${encodeURIComponent(nodes.join(","))}`;
    }
    return request<CandidateList>(url);
  },

  explainLocal: (u: string, v: string) =>
    request<LocalExplanation>(
      `/explain/local?u=${encodeURIComponent(u)}&v=${encodeURIComponent(v)}`,
    ),

  explainGlobal: (top = 10) =>
    request<{ top: GlobalFeature[] }>(`/explain/global?top=${top}`),

  feedback: (
    accept: { u: string; v: string }[],
    reject: { u: string; v: string }[],
  ) =>
    request<FeedbackResult>("/feedback", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ accept, reject }),
    }),

  reembed: () =>
    request<{ stale: boolean; nnz: number }>("/reembed", { method: "POST" }),
};
