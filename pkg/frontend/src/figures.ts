/**
 * The four figure kinds, each a pure CSV-text -> SVG-text function.
 */

import { parseCount, parseDiag, parseSweep } from "./csv.js";
import { PALETTE, renderChart, Series } from "./svg.js";

export const FIGURE_KINDS = [
  "bound-vs-delta",
  "bound-vs-k",
  "diagonal-growth",
  "counting-slack",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

/** Measured kernel (tail included) vs certified bound across pair distance,
 *  one color per weight; values span many decades, so the axis is log. */
export function boundVsDelta(csvText: string): string {
  const rows = parseSweep(csvText);
  const model = rows[0].model;
  const series: Series[] = [];
  uniqueSorted(rows.map((r) => r.k)).forEach((k, i) => {
    const sub = rows.filter((r) => r.k === k);
    const color = PALETTE[i % PALETTE.length];
    series.push({
      label: `measured k=${k}`,
      points: sub.map((r) => [r.delta, r.measured]),
      color,
      marker: "circle",
      line: false,
    });
    series.push({
      label: `bound k=${k}`,
      points: sub.map((r) => [r.delta, r.bound]),
      color,
      marker: "none",
      dashed: true,
    });
  });
  return renderChart({
    title: `Measured kernel vs bound (${model})`,
    xLabel: "pair distance",
    yLabel: "kernel norm + tail / bound",
    series,
    yScale: "log",
  });
}

/** Worst measured value and tightest bound per weight. */
export function boundVsK(csvText: string): string {
  const rows = parseSweep(csvText);
  const model = rows[0].model;
  const ks = uniqueSorted(rows.map((r) => r.k));
  const worst: Array<[number, number]> = [];
  const tightest: Array<[number, number]> = [];
  for (const k of ks) {
    const sub = rows.filter((r) => r.k === k);
    worst.push([k, Math.max(...sub.map((r) => r.measured))]);
    tightest.push([k, Math.min(...sub.map((r) => r.bound))]);
  }
  return renderChart({
    title: `Bound vs weight (${model})`,
    xLabel: "weight k",
    yLabel: "kernel norm + tail / bound",
    series: [
      { label: "max measured", points: worst, color: PALETTE[0], marker: "circle" },
      { label: "min bound", points: tightest, color: PALETTE[1], marker: "square", dashed: true },
    ],
    yScale: "log",
  });
}

/** Diagonal growth ratio (measured over its envelope) across the weight. */
export function diagonalGrowth(csvText: string): string {
  const rows = parseDiag(csvText);
  const model = rows[0].model;
  const kind = rows[0].kind;
  const envelopeName = kind === "strip" ? "k^(3/2)" : "k";
  return renderChart({
    title: `Diagonal growth (${model}, ${kind})`,
    xLabel: "weight k",
    yLabel: `sup / ${envelopeName}`,
    series: [
      {
        label: `ratio sup/${envelopeName}`,
        points: rows.map((r) => [r.k, r.ratio]),
        color: PALETTE[2],
        marker: "circle",
      },
    ],
    yScale: "linear",
    zeroLine: true,
  });
}

/** Counting-inequality slack per row, with the zero line; positive slack
 *  means the inequality holds with room. */
export function countingSlack(csvText: string): string {
  const rows = parseCount(csvText);
  const model = rows[0].model;
  const integral = rows.filter((r) => r.kind === "jlineq1");
  const cardinality = rows.filter((r) => r.kind === "jlineq2");
  const series: Series[] = [];
  if (integral.length > 0) {
    series.push({
      label: "weighted integral slack",
      points: integral.map((r, i) => [i + 1, r.slack]),
      color: PALETTE[0],
      marker: "circle",
      line: false,
    });
    series.push({
      label: "-(tail allowance)",
      points: integral.map((r, i) => [i + 1, -r.allowance]),
      color: PALETTE[3],
      marker: "none",
      dashed: true,
    });
  }
  if (cardinality.length > 0) {
    series.push({
      label: "cardinality slack",
      points: cardinality.map((r, i) => [i + 1, r.slack]),
      color: PALETTE[1],
      marker: "square",
      line: false,
    });
  }
  return renderChart({
    title: `Counting-inequality slack (${model})`,
    xLabel: "case",
    yLabel: "right side minus left side",
    series,
    yScale: "linear",
    zeroLine: true,
  });
}

export function renderFigure(kind: FigureKind, csvText: string): string {
  switch (kind) {
    case "bound-vs-delta":
      return boundVsDelta(csvText);
    case "bound-vs-k":
      return boundVsK(csvText);
    case "diagonal-growth":
      return diagonalGrowth(csvText);
    case "counting-slack":
      return countingSlack(csvText);
  }
}
