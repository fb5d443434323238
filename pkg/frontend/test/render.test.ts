import { describe, expect, it } from "vitest";

import {
  contributionBar,
  globalPanel,
  histogram,
  histogramBins,
  staleBanner,
} from "../src/render";

describe("contributionBar", () => {
  it("segment values sum to the displayed score", () => {
    const contributions = [
      { feature: "f1", value: 0.4 },
      { feature: "f2", value: 0.3 },
      { feature: "f3", value: 0.1 },
      { feature: "f4", value: 0.05 },
      { feature: "f5", value: 0.03 },
      { feature: "f6", value: 0.02 },
    ];
    const total = contributions.reduce((s, c) => s + c.value, 0);
    const bar = contributionBar(contributions, total);
    const segs = [...bar.querySelectorAll<HTMLElement>(".seg")];
    expect(segs).toHaveLength(5);
    const sum = segs.reduce((s, seg) => s + Number(seg.dataset.value), 0);
    expect(sum).toBeCloseTo(total, 12);
    const widthSum = segs.reduce((s, seg) => s + parseFloat(seg.style.width), 0);
    expect(widthSum).toBeCloseTo(100, 6);
  });

  it("renders one full-width segment for a single contribution", () => {
    const bar = contributionBar([{ feature: "f1", value: 0.7 }], 0.7);
    const segs = [...bar.querySelectorAll<HTMLElement>(".seg")];
    expect(segs).toHaveLength(1);
    expect(parseFloat(segs[0].style.width)).toBeCloseTo(100, 6);
  });

  it("shows at most four named segments plus a residual", () => {
    const contributions = Array.from({ length: 10 }, (_, i) => ({
      feature: `f${i}`,
      value: 0.1,
    }));
    const bar = contributionBar(contributions, 1.0);
    expect(bar.querySelectorAll(".seg:not(.seg-rest)")).toHaveLength(4);
    expect(bar.querySelectorAll(".seg-rest")).toHaveLength(1);
  });
});

describe("globalPanel", () => {
  it("shows exactly the given bars sorted by the server, widest at max |t|", () => {
    const features = Array.from({ length: 10 }, (_, i) => ({
      feature: `f${i}`,
      beta: 0.1,
      se: 0.01,
      t: 10 - i,
    }));
    const panel = globalPanel(features);
    const bars = [...panel.querySelectorAll<HTMLElement>(".global-bar")];
    expect(bars).toHaveLength(10);
    expect(parseFloat(bars[0].style.width)).toBeCloseTo(100, 6);
    const widths = bars.map((b) => parseFloat(b.style.width));
    expect([...widths].sort((a, b) => b - a)).toEqual(widths);
  });
});

describe("histogram", () => {
  it("bins span [0, max contribution]", () => {
    const values = [0.1, 0.2, 0.7, 0.05];
    const bins = histogramBins(values, 10);
    expect(bins[0].lo).toBe(0);
    expect(bins[bins.length - 1].hi).toBeCloseTo(0.7, 12);
    expect(bins.reduce((s, b) => s + b.count, 0)).toBe(values.length);
  });

  it("scales bar heights logarithmically in the count", () => {
    const values = [...Array.from({ length: 99 }, () => 0.05), 0.95];
    const el = histogram(values, 2);
    const bars = [...el.querySelectorAll<HTMLElement>(".hist-bar")];
    expect(bars).toHaveLength(2);
    const h0 = parseFloat(bars[0].style.height);
    const h1 = parseFloat(bars[1].style.height);
    expect(h0).toBeCloseTo(100, 6);
    expect(h1).toBeCloseTo((Math.log10(2) / Math.log10(100)) * 100, 6);
  });

  it("shows a notice when there is nothing to bin", () => {
    const el = histogram([]);
    expect(el.querySelector(".notice")?.textContent).toBe("no contributions");
  });
});

describe("staleBanner", () => {
  it("is hidden iff the server reports the embedding fresh", () => {
    expect(staleBanner(false).hidden).toBe(true);
    expect(staleBanner(true).hidden).toBe(false);
  });
});
