import { scaleLinear, scaleLog } from "d3-scale";
import type { CurveGroup } from "./csv.js";
import { groupLabels } from "./csv.js";

export type PlotKind = "fer" | "search";

export interface SeriesDump {
  code: string;
  decoder: string;
  delta: number;
  l_max: number;
  label: string;
  /** [ebn0_db, y] pairs actually drawn, in plotted order */
  points: [number, number][];
}

export interface FigureData {
  tool: string;
  kind: PlotKind;
  xLabel: string;
  yLabel: string;
  series: SeriesDump[];
}

export interface Figure {
  svg: string;
  data: FigureData;
}

const WIDTH = 840;
const HEIGHT = 560;
const MARGIN = { top: 20, right: 24, bottom: 58, left: 76 };

// Okabe-Ito palette; distinguishable in print and for most color vision
const COLORS = ["#0072b2", "#d55e00", "#009e73", "#cc79a7", "#e69f00", "#56b4e9", "#aaaa00", "#888888"];

const Y_LABEL: Record<PlotKind, string> = {
  fer: "FER",
  search: "average searches per frame",
};

function fmt(v: number): string {
  return v.toFixed(2);
}

function marker(kind: number, x: number, y: number, color: string): string {
  const r = 3.5;
  switch (kind % 4) {
    case 0:
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`;
    case 1:
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${2 * r}" height="${2 * r}" fill="${color}"/>`;
    case 2:
      return `<path d="M ${fmt(x)} ${fmt(y - r - 1)} L ${fmt(x + r + 1)} ${fmt(y)} L ${fmt(x)} ${fmt(y + r + 1)} L ${fmt(x - r - 1)} ${fmt(y)} Z" fill="${color}"/>`;
    default:
      return `<path d="M ${fmt(x)} ${fmt(y - r - 1)} L ${fmt(x + r + 1)} ${fmt(y + r)} L ${fmt(x - r - 1)} ${fmt(y + r)} Z" fill="${color}"/>`;
  }
}

function decadeLabel(t: number): string {
  return `1e${Math.round(Math.log10(t))}`;
}

/** Render one figure. `warn` receives one line per dropped point/series. */
export function renderFigure(kind: PlotKind, groups: CurveGroup[], warn: (msg: string) => void): Figure {
  const labels = groupLabels(groups);
  const yOf = (p: { fer: number; lAvg: number }) => (kind === "fer" ? p.fer : p.lAvg);

  // log-domain cleanup: y <= 0 cannot be drawn
  const series: SeriesDump[] = [];
  groups.forEach((g, i) => {
    const kept: [number, number][] = [];
    for (const p of g.points) {
      const y = yOf(p);
      if (y <= 0) {
        warn(`dropping ${labels[i]} point at ${p.ebn0Db} dB: ${kind === "fer" ? "fer" : "l_avg"}=${y} has no place on a log axis`);
      } else {
        kept.push([p.ebn0Db, y]);
      }
    }
    if (kept.length === 0) {
      warn(`dropping series ${labels[i]}: every point was filtered`);
      return;
    }
    series.push({ code: g.code, decoder: g.decoder, delta: g.delta, l_max: g.lMax, label: labels[i], points: kept });
  });
  if (series.length === 0) {
    throw new Error("nothing to plot: every row was filtered out");
  }

  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  let [xLo, xHi] = [Math.min(...xs), Math.max(...xs)];
  let [yLo, yHi] = [Math.min(...ys), Math.max(...ys)];
  if (xLo === xHi) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  if (yLo === yHi) {
    yLo /= 2;
    yHi *= 2;
  }
  const x = scaleLinear().domain([xLo, xHi]).range([MARGIN.left, WIDTH - MARGIN.right]).nice();
  const y = scaleLog().domain([yLo, yHi]).range([HEIGHT - MARGIN.bottom, MARGIN.top]).nice();

  const data: FigureData = {
    tool: "plot-tool",
    kind,
    xLabel: "Eb/N0 (dB)",
    yLabel: Y_LABEL[kind],
    series,
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="DejaVu Sans, sans-serif">`,
  );
  parts.push(`<metadata id="plot-data"><![CDATA[${JSON.stringify(data)}]]></metadata>`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  const plotTop = MARGIN.top;
  const plotBottom = HEIGHT - MARGIN.bottom;
  const plotLeft = MARGIN.left;
  const plotRight = WIDTH - MARGIN.right;

  // grid + ticks
  for (const t of x.ticks(7)) {
    const px = x(t);
    parts.push(`<line x1="${fmt(px)}" y1="${plotTop}" x2="${fmt(px)}" y2="${plotBottom}" stroke="#dddddd" stroke-width="1"/>`);
    parts.push(`<text x="${fmt(px)}" y="${plotBottom + 20}" text-anchor="middle" font-size="13">${t}</text>`);
  }
  for (const t of y.ticks()) {
    const py = y(t);
    const decade = Math.abs(Math.log10(t) - Math.round(Math.log10(t))) < 1e-9;
    parts.push(
      `<line x1="${plotLeft}" y1="${fmt(py)}" x2="${plotRight}" y2="${fmt(py)}" stroke="${decade ? "#cccccc" : "#eeeeee"}" stroke-width="1"/>`,
    );
    if (decade) {
      parts.push(`<text x="${plotLeft - 8}" y="${fmt(py + 4)}" text-anchor="end" font-size="13">${decadeLabel(t)}</text>`);
    }
  }
  parts.push(`<rect x="${plotLeft}" y="${plotTop}" width="${plotRight - plotLeft}" height="${plotBottom - plotTop}" fill="none" stroke="#333333"/>`);

  // axis labels
  parts.push(`<text x="${fmt((plotLeft + plotRight) / 2)}" y="${HEIGHT - 14}" text-anchor="middle" font-size="15">${data.xLabel}</text>`);
  parts.push(
    `<text x="20" y="${fmt((plotTop + plotBottom) / 2)}" text-anchor="middle" font-size="15" transform="rotate(-90 20 ${fmt((plotTop + plotBottom) / 2)})">${data.yLabel}</text>`,
  );

  // series
  series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    const pts = s.points.map(([px, py]) => `${fmt(x(px))},${fmt(y(py))}`).join(" ");
    parts.push(`<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="2"/>`);
    for (const [px, py] of s.points) {
      parts.push(marker(i, x(px), y(py), color));
    }
  });

  // legend, top right
  const entryH = 20;
  const legendW = 10 + 30 + 8 + Math.max(...series.map((s) => s.label.length)) * 7.3 + 10;
  const legendX = plotRight - legendW - 10;
  const legendY = plotTop + 10;
  parts.push(
    `<rect x="${fmt(legendX)}" y="${legendY}" width="${fmt(legendW)}" height="${series.length * entryH + 10}" fill="white" stroke="#999999"/>`,
  );
  series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    const cy = legendY + 5 + i * entryH + entryH / 2;
    parts.push(`<line x1="${fmt(legendX + 10)}" y1="${fmt(cy)}" x2="${fmt(legendX + 40)}" y2="${fmt(cy)}" stroke="${color}" stroke-width="2"/>`);
    parts.push(marker(i, legendX + 25, cy, color));
    parts.push(`<text x="${fmt(legendX + 48)}" y="${fmt(cy + 4)}" font-size="13">${s.label}</text>`);
  });

  parts.push("</svg>");
  return { svg: parts.join("\n") + "\n", data };
}

/** Pull the embedded series JSON back out of a rendered SVG. */
export function extractFigureData(svgText: string): FigureData {
  const m = svgText.match(/<metadata id="plot-data"><!\[CDATA\[([\s\S]*?)\]\]><\/metadata>/);
  if (!m) {
    throw new Error("no plot-data metadata block found; was this SVG written by plot-tool?");
  }
  return JSON.parse(m[1]) as FigureData;
}
