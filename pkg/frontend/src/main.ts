// Wires the workbench state to the DOM and the REST API. Optimistic UI is
// deliberately off: every mutation round-trips and the view re-renders from
// the server's answer.

import { api, HttpError } from "./api";
import { formatScore, tailSegment } from "./format";
import {
  contributionBar,
  globalPanel,
  histogram,
  staleBanner,
} from "./render";
import {
  applyFeedbackResult,
  decide,
  hasDecisions,
  initialState,
  pendingBatch,
  setCandidates,
  toggleNode,
  type CandidateView,
} from "./state";

const state = initialState();

function $(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function showError(message: string): void {
  const box = $("error-box");
  box.hidden = false;
  box.textContent = `${message} `;
  const retry = document.createElement("button");
  retry.textContent = "Retry";
  retry.onclick = () => {
    box.hidden = true;
    void refreshAll();
  };
  box.appendChild(retry);
}

async function guarded<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    return await work();
  } catch (e) {
    if (e instanceof HttpError) {
      showError(`${e.body.code}: ${e.body.message}`);
    } else {
      showError("network failure; state preserved.");
    }
    return undefined;
  }
}

function renderStale(): void {
  const holder = $("stale-holder");
  holder.replaceChildren(staleBanner(state.stale));
  const btn = holder.querySelector<HTMLButtonElement>(".reembed-btn");
  if (btn) {
    btn.onclick = async () => {
      btn.disabled = true;
      btn.textContent = "Re-embedding…";
      const result = await guarded(() => api.reembed());
      if (result) {
        state.stale = result.stale;
        await refreshAll();
      } else {
        btn.disabled = false;
        btn.textContent = "Re-embed now";
      }
    };
  }
}

function renderSelected(): void {
  const box = $("selected-nodes");
  box.replaceChildren();
  for (const iri of state.selectedNodes) {
    const chip = document.createElement("span");
    chip.className = "chip";
    chip.title = iri;
    chip.textContent = `${tailSegment(iri)} ×`;
    chip.onclick = () => {
      toggleNode(state, iri);
      renderSelected();
      void refreshCandidates();
    };
    box.appendChild(chip);
  }
}

function candidateRow(view: CandidateView): HTMLElement {
  const row = document.createElement("div");
  row.className = `candidate decision-${view.decision}`;
  const { u, v, score, kind } = view.candidate;

  const label = document.createElement("span");
  label.className = "edge";
  label.title = `${u} , ${v}`;
  label.textContent = `${tailSegment(u)} → ${tailSegment(v)}`;
  row.appendChild(label);

  const scoreEl = document.createElement("span");
  scoreEl.className = "score";
  scoreEl.textContent = formatScore(score);
  row.appendChild(scoreEl);

  const acceptLabel = kind === "missing" ? "Accept (add)" : "Accept (remove)";
  for (const [decision, text] of [
    ["accepted", acceptLabel],
    ["rejected", "Reject"],
  ] as const) {
    const btn = document.createElement("button");
    btn.textContent = text;
    btn.className = view.decision === decision ? "active" : "";
    btn.onclick = () => {
      decide(view, decision);
      renderCandidates();
    };
    row.appendChild(btn);
  }

  const expand = document.createElement("button");
  expand.textContent = view.expanded ? "Hide why" : "Why?";
  expand.className = "expand";
  expand.onclick = async () => {
    view.expanded = !view.expanded;
    if (view.expanded && view.contributions === null) {
      const local = await guarded(() => api.explainLocal(u, v));
      if (local) view.contributions = local.contributions;
    }
    renderCandidates();
  };
  row.appendChild(expand);

  if (view.error) {
    const err = document.createElement("span");
    err.className = "row-error";
    err.textContent = view.error;
    row.appendChild(err);
  }

  if (view.expanded && view.contributions) {
    row.appendChild(contributionBar(view.contributions, score));
    row.appendChild(histogram(view.contributions.map((c) => c.value)));
  }
  return row;
}

function renderCandidates(): void {
  const list = $("candidate-list");
  list.replaceChildren(...state.candidates.map(candidateRow));
  const submit = $("submit-btn") as HTMLButtonElement;
  submit.disabled = !hasDecisions(state);
  const history = $("history-list");
  history.replaceChildren(
    ...state.history.map((h) => {
      const item = document.createElement("div");
      item.className = `history-item ${h.decision}`;
      item.textContent = `${h.decision}: ${tailSegment(h.candidate.u)} → ${tailSegment(h.candidate.v)} (${formatScore(h.candidate.score)})`;
      return item;
    }),
  );
  renderStale();
}

async function refreshCandidates(): Promise<void> {
  const fetched = await guarded(() =>
    api.candidates(state.kind, state.k, state.selectedNodes),
  );
  if (fetched) {
    setCandidates(state, fetched.candidates, fetched.stale);
    renderCandidates();
  }
}

async function refreshGlobal(): Promise<void> {
  const result = await guarded(() => api.explainGlobal(10));
  const panel = $("global-panel-holder");
  if (result) {
    panel.replaceChildren(globalPanel(result.top));
  } else {
    const notice = document.createElement("p");
    notice.className = "notice";
    notice.textContent = "global explanation unavailable";
    panel.replaceChildren(notice);
  }
}

async function refreshStats(): Promise<void> {
  const stats = await guarded(() => api.stats());
  if (stats) {
    state.stale = stats.embedding_stale;
    $("stats-line").textContent =
      `${stats.n_nodes} nodes, ${stats.n_edges} edges, ` +
      `${stats.journal_entries} journal entries, seed ${stats.seed}`;
    renderStale();
  }
}

async function refreshAll(): Promise<void> {
  await refreshStats();
  await refreshCandidates();
  await refreshGlobal();
}

function debounce(fn: () => void, ms: number): () => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return () => {
    clearTimeout(timer);
    timer = setTimeout(fn, ms);
  };
}

export function boot(): void {
  const search = $("search-input") as HTMLInputElement;
  const results = $("search-results");

  const runSearch = debounce(async () => {
    const q = search.value.trim();
    if (!q) {
      results.replaceChildren();
      return;
    }
    const found = await guarded(() => api.searchNodes(q));
    if (!found) return;
    results.replaceChildren();
    if (found.results.length === 0) {
      const notice = document.createElement("p");
      notice.className = "notice";
      notice.textContent = "no matches";
      results.appendChild(notice);
      return;
    }
    for (const hit of found.results) {
      const item = document.createElement("button");
      item.className = "search-hit";
      item.title = hit.iri;
      item.textContent = tailSegment(hit.iri);
      item.onclick = () => {
        toggleNode(state, hit.iri);
        renderSelected();
        void refreshCandidates();
      };
      results.appendChild(item);
    }
  }, 200);
  search.addEventListener("input", runSearch);

  ($("kind-select") as HTMLSelectElement).onchange = (e) => {
    state.kind = (e.target as HTMLSelectElement).value as "missing" | "redundant";
    void refreshCandidates();
  };
  ($("k-input") as HTMLInputElement).onchange = (e) => {
    state.k = Math.max(1, Number((e.target as HTMLInputElement).value) || 10);
    void refreshCandidates();
  };

  ($("submit-btn") as HTMLButtonElement).onclick = async () => {
    if (!hasDecisions(state)) return;
    const batch = pendingBatch(state);
    if (batch.accept.length === 0 && batch.reject.length === 0) {
      // Only local rejections: nothing to post, move them to history.
      applyFeedbackResult(state, [], state.stale);
      renderCandidates();
      await refreshCandidates();
      return;
    }
    try {
      const result = await api.feedback(batch.accept, batch.reject);
      applyFeedbackResult(state, result.errors, result.stale);
      renderCandidates();
      await refreshStats();
      await refreshCandidates();
    } catch (e) {
      if (e instanceof HttpError && e.status === 409) {
        showError(`feedback rejected: ${e.body.message}`);
      } else if (e instanceof HttpError) {
        showError(`${e.body.code}: ${e.body.message}`);
      } else {
        showError("network failure; state preserved.");
      }
    }
  };

  void refreshAll();
}

if (typeof document !== "undefined" && document.getElementById("search-input")) {
  boot();
}
