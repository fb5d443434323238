// DOM rendering helpers. Pure element builders so the test suite can assert
// on structure in a DOM shim without a browser.

import type { Contribution, GlobalFeature } from "./api";
import { formatScore, tailSegment } from "./format";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

// Stacked bar for one candidate: the top 4 contributions as segments plus a
// residual segment so segment widths always sum to 100% of the track, i.e.
// the bar as a whole depicts exactly the displayed score.
export function contributionBar(
  contributions: Contribution[],
  total: number,
  topN = 4,
): HTMLElement {
  const wrap = el("div", "contrib-bar");
  wrap.title = `score ${formatScore(total)}`;
  const shown = [...contributions]
    .sort((a, b) => Math.abs(b.value) - Math.abs(a.value))
    .slice(0, topN);
  const shownSum = shown.reduce((s, c) => s + c.value, 0);
  const residual = total - shownSum;
  const scale = total !== 0 ? 100 / Math.abs(total) : 0;
  for (const [i, c] of shown.entries()) {
    const seg = el("div", `seg seg-${i}`);
    seg.style.width = `${Math.abs(c.value) * scale}%`;
    seg.title = `${tailSegment(String(c.feature))}: ${formatScore(c.value)}`;
    seg.dataset.value = String(c.value);
    wrap.appendChild(seg);
  }
  if (Math.abs(residual) > 1e-12) {
    const seg = el("div", "seg seg-rest");
    seg.style.width = `${Math.abs(residual) * scale}%`;
    seg.title = `${contributions.length - shown.length} more: ${formatScore(residual)}`;
    seg.dataset.value = String(residual);
    wrap.appendChild(seg);
  }
  return wrap;
}

// Horizontal bars for the global panel, widths relative to the largest |t|.
export function globalPanel(features: GlobalFeature[]): HTMLElement {
  const wrap = el("div", "global-panel");
  const maxT = Math.max(...features.map((f) => Math.abs(f.t)), 0);
  for (const f of features) {
    const row = el("div", "global-row");
    const label = el("span", "global-label", tailSegment(String(f.feature)));
    label.title = String(f.feature);
    const track = el("div", "global-track");
    const bar = el("div", "global-bar");
    bar.style.width = maxT > 0 ? `${(Math.abs(f.t) / maxT) * 100}%` : "0%";
    bar.dataset.t = String(f.t);
    track.appendChild(bar);
    row.appendChild(label);
    row.appendChild(track);
    row.appendChild(el("span", "global-t", formatScore(Math.abs(f.t))));
    wrap.appendChild(row);
  }
  return wrap;
}

export interface HistogramBin {
  lo: number;
  hi: number;
  count: number;
}

// Bins span [0, max value]; counts are rendered on a log scale because the
// small contributions dominate by orders of magnitude.
export function histogramBins(values: number[], nBins = 20): HistogramBin[] {
  const max = Math.max(...values.map(Math.abs), 0);
  const width = max > 0 ? max / nBins : 1;
  const counts = new Array<number>(nBins).fill(0);
  for (const v of values) {
    const i = Math.min(Math.floor(Math.abs(v) / width), nBins - 1);
    counts[i] += 1;
  }
  return counts.map((count, i) => ({ lo: i * width, hi: (i + 1) * width, count }));
}

export function histogram(values: number[], nBins = 20): HTMLElement {
  const wrap = el("div", "histogram");
  if (values.length === 0) {
    wrap.appendChild(el("p", "notice", "no contributions"));
    return wrap;
  }
  const bins = histogramBins(values, nBins);
  const maxLog = Math.max(...bins.map((b) => Math.log10(1 + b.count)));
  for (const b of bins) {
    const bar = el("div", "hist-bar");
    const h = maxLog > 0 ? (Math.log10(1 + b.count) / maxLog) * 100 : 0;
    bar.style.height = `${h}%`;
    bar.title = `[${formatScore(b.lo)}, ${formatScore(b.hi)}): ${b.count}`;
    bar.dataset.count = String(b.count);
    wrap.appendChild(bar);
  }
  return wrap;
}

export function staleBanner(stale: boolean): HTMLElement {
  const banner = el("div", "stale-banner");
  banner.hidden = !stale;
  banner.textContent =
    "Embedding is stale: the graph changed since the last fit. Scores may be outdated.";
  const btn = el("button", "reembed-btn", "Re-embed now");
  banner.appendChild(btn);
  return banner;
}
