/**
 * Minimal deterministic SVG chart builder: one x/y panel with linear or
 * log-10 vertical scale, point and line series, a legend, and tick labels.
 * No DOM, no randomness, no timestamps, so renders are byte-reproducible.
 */

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
  marker?: "circle" | "square" | "none";
  line?: boolean;
  dashed?: boolean;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  yScale: "linear" | "log";
  zeroLine?: boolean;
}

const WIDTH = 880;
const HEIGHT = 560;
const MARGIN = { top: 52, right: 200, bottom: 58, left: 84 };

export const PALETTE = [
  "#1f6fb2",
  "#d95f02",
  "#1b9e77",
  "#7570b3",
  "#e7298a",
  "#66a61e",
  "#b8860b",
  "#4d4d4d",
  "#a6611a",
  "#018571",
];

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 0.01 && abs < 10000) {
    return Number(value.toPrecision(4)).toString();
  }
  return value.toExponential(1).replace("e", "e");
}

function linearTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12 * span; v += chosen) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); Math.pow(10, e) <= hi * 1.0001; e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0) ticks.push(lo, hi);
  if (ticks.length === 1) ticks.push(hi);
  return ticks;
}

export function renderChart(spec: ChartSpec): string {
  const xs = spec.series.flatMap((s) => s.points.map((p) => p[0]));
  const ysAll = spec.series.flatMap((s) => s.points.map((p) => p[1]));
  const ys = spec.yScale === "log" ? ysAll.filter((v) => v > 0) : ysAll;
  if (xs.length === 0 || ys.length === 0) {
    throw new Error("chart has no drawable points");
  }
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  if (xLo === xHi) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (spec.yScale === "linear" && (spec.zeroLine ?? false)) {
    yLo = Math.min(yLo, 0);
    yHi = Math.max(yHi, 0);
  }
  if (yLo === yHi) {
    yLo = spec.yScale === "log" ? yLo / 2 : yLo - 0.5;
    yHi = spec.yScale === "log" ? yHi * 2 : yHi + 0.5;
  }
  if (spec.yScale === "linear") {
    const pad = 0.06 * (yHi - yLo);
    yLo -= pad;
    yHi += pad;
  } else {
    yLo /= 1.6;
    yHi *= 1.6;
  }

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) => {
    const t =
      spec.yScale === "log"
        ? (Math.log10(y) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo))
        : (y - yLo) / (yHi - yLo);
    return MARGIN.top + (1 - t) * plotH;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="28" text-anchor="middle" font-size="18">${esc(spec.title)}</text>`,
  );

  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333" stroke-width="1"/>`,
  );

  // y ticks + grid
  const yTicks = spec.yScale === "log" ? logTicks(yLo, yHi) : linearTicks(yLo, yHi);
  for (const t of yTicks) {
    if (t < yLo || t > yHi) continue;
    const y = sy(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y.toFixed(2)}" x2="${MARGIN.left + plotW}" ` +
        `y2="${y.toFixed(2)}" stroke="#ddd" stroke-width="0.7"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${(y + 4).toFixed(2)}" text-anchor="end" ` +
        `font-size="12">${fmt(t)}</text>`,
    );
  }

  // x ticks
  for (const t of linearTicks(xLo, xHi)) {
    if (t < xLo || t > xHi) continue;
    const x = sx(t);
    parts.push(
      `<line x1="${x.toFixed(2)}" y1="${MARGIN.top + plotH}" x2="${x.toFixed(2)}" ` +
        `y2="${MARGIN.top + plotH + 5}" stroke="#333" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${x.toFixed(2)}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" ` +
        `font-size="12">${fmt(t)}</text>`,
    );
  }

  // axis labels
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" ` +
      `font-size="14">${esc(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="22" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="14" ` +
      `transform="rotate(-90 22 ${MARGIN.top + plotH / 2})">${esc(spec.yLabel)}</text>`,
  );

  if ((spec.zeroLine ?? false) && spec.yScale === "linear" && yLo < 0 && yHi > 0) {
    const y = sy(0);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y.toFixed(2)}" x2="${MARGIN.left + plotW}" ` +
        `y2="${y.toFixed(2)}" stroke="#888" stroke-width="1" stroke-dasharray="5,4"/>`,
    );
  }

  // series
  for (const s of spec.series) {
    const pts = s.points
      .filter(([, y]) => spec.yScale !== "log" || y > 0)
      .slice()
      .sort((a, b) => a[0] - b[0]);
    if (pts.length === 0) continue;
    const coords = pts.map(([x, y]) => [sx(x), sy(y)] as const);
    if (s.line ?? true) {
      const path = coords.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
      parts.push(
        `<polyline points="${path}" fill="none" stroke="${s.color}" stroke-width="1.8"` +
          (s.dashed ? ` stroke-dasharray="6,4"` : "") +
          `/>`,
      );
    }
    if ((s.marker ?? "circle") !== "none") {
      for (const [x, y] of coords) {
        if (s.marker === "square") {
          parts.push(
            `<rect x="${(x - 3).toFixed(2)}" y="${(y - 3).toFixed(2)}" width="6" height="6" ` +
              `fill="${s.color}"/>`,
          );
        } else {
          parts.push(
            `<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="3.2" fill="${s.color}"/>`,
          );
        }
      }
    }
  }

  // legend
  let ly = MARGIN.top + 8;
  const lx = WIDTH - MARGIN.right + 14;
  for (const s of spec.series) {
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" stroke="${s.color}" ` +
        `stroke-width="2"` +
        (s.dashed ? ` stroke-dasharray="6,4"` : "") +
        `/>`,
    );
    parts.push(
      `<text x="${lx + 33}" y="${ly + 4}" font-size="12">${esc(s.label)}</text>`,
    );
    ly += 20;
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
