/** The four figure kinds rendered from harness outputs.
 *
 * trajectory2d     worldline or hit tables -> 2d projection
 * density_overlay  binned series -> histogram bars, error bars, candidate curve
 * entropy_series   checkpoint series -> divergence curves with error bars
 * report_grid      report JSONs -> one bar row per check, value against tolerance
 *
 * Everything is schema driven: the renderers look only at column names and
 * report fields, never at experiment names, so new experiments render
 * without code changes here.
 */

import { readFile, writeFile } from "node:fs/promises";
import { basename } from "node:path";

import { column, parseCsv, requireColumns, Table } from "./csv.js";
import { SchemaError, UsageError } from "./errors.js";
import { loadReport, Report } from "./report.js";
import { circle, frame, line, noDataFigure, openSvg, PALETTE, polyline, rect, text } from "./svg.js";

export const KINDS = ["trajectory2d", "density_overlay", "entropy_series", "report_grid"] as const;
export type Kind = (typeof KINDS)[number];

export interface FigureRequest {
  kind: Kind;
  inputs: string[];
  output: string;
}

export async function render(req: FigureRequest): Promise<string> {
  let svg: string;
  if (req.kind === "report_grid") {
    if (req.inputs.length < 1) {
      throw new UsageError("report_grid needs at least one report JSON");
    }
    const reports: Report[] = [];
    for (const p of req.inputs) {
      reports.push(loadReport(await readText(p), basename(p)));
    }
    svg = reportGrid(reports);
  } else {
    if (req.inputs.length !== 1) {
      throw new UsageError(`${req.kind} expects exactly one input file, got ${req.inputs.length}`);
    }
    const file = basename(req.inputs[0]);
    const table = parseCsv(await readText(req.inputs[0]), file);
    if (req.kind === "trajectory2d") svg = trajectory2d(table, file);
    else if (req.kind === "density_overlay") svg = densityOverlay(table, file);
    else svg = entropySeries(table, file);
  }
  await writeFile(req.output, svg, "utf8");
  return req.output;
}

async function readText(p: string): Promise<string> {
  try {
    return await readFile(p, "utf8");
  } catch (e) {
    const code = (e as NodeJS.ErrnoException).code;
    throw new SchemaError("(file)", `cannot read ${p}${code ? ` (${code})` : ""}`);
  }
}

function pad(lo: number, hi: number): [number, number] {
  if (lo === hi) return [lo - 1, hi + 1];
  const m = 0.04 * (hi - lo);
  return [lo - m, hi + m];
}

// ---------------------------------------------------------------------------
// trajectory2d

const MAX_PATHS = 40;
const MAX_POINTS = 20000;

/** Worldline or hit table projected to two coordinates.
 *
 * Hit tables (recognized by their lam column) become a scatter of the
 * spatial crossing points; trajectory tables become one polyline per
 * path in the (x^1, x^0) plane.
 */
export function trajectory2d(t: Table, file: string): string {
  if (t.names.includes("lam")) return hitScatter(t, file);
  requireColumns(t, ["path_id", "step", "m0", "m1"], file);
  if (t.rows.length === 0) {
    return noDataFigure("worldline projection", "x^1", "x^0");
  }
  const ids = column(t, "path_id");
  const xs = column(t, "m1");
  const ys = column(t, "m0");
  const byPath = new Map<number, Array<[number, number]>>();
  for (let i = 0; i < ids.length; i++) {
    let pts = byPath.get(ids[i]);
    if (!pts) {
      if (byPath.size >= MAX_PATHS) continue;
      pts = [];
      byPath.set(ids[i], pts);
    }
    pts.push([xs[i], ys[i]]);
  }
  let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
  for (const pts of byPath.values()) {
    for (const [x, y] of pts) {
      x0 = Math.min(x0, x); x1 = Math.max(x1, x);
      y0 = Math.min(y0, y); y1 = Math.max(y1, y);
    }
  }
  const nTotal = new Set(ids).size;
  const shown = byPath.size;
  const sub = `${file} - ${shown < nTotal ? `showing ${shown} of ${nTotal}` : `${shown}`} paths`;
  [x0, x1] = pad(x0, x1);
  [y0, y1] = pad(y0, y1);
  const f = frame({ title: "worldline projection", subtitle: sub, xLabel: "x^1", yLabel: "x^0", x0, x1, y0, y1 });
  let k = 0;
  for (const pts of byPath.values()) {
    const scaled = pts.map(([x, y]) => [f.xOf(x), f.yOf(y)] as [number, number]);
    f.parts.push(polyline(scaled, PALETTE[k % PALETTE.length], 1, undefined));
    k += 1;
  }
  return f.close();
}

function hitScatter(t: Table, file: string): string {
  requireColumns(t, ["path_id", "m1", "m2"], file);
  if (t.rows.length === 0) {
    return noDataFigure("plane crossings", "x^1", "x^2");
  }
  const xs = column(t, "m1");
  const ys = column(t, "m2");
  const n = Math.min(xs.length, MAX_POINTS);
  let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
  for (let i = 0; i < n; i++) {
    x0 = Math.min(x0, xs[i]); x1 = Math.max(x1, xs[i]);
    y0 = Math.min(y0, ys[i]); y1 = Math.max(y1, ys[i]);
  }
  const sub = `${file} - ${n < xs.length ? `showing ${n} of ${xs.length}` : `${n}`} crossings`;
  [x0, x1] = pad(x0, x1);
  [y0, y1] = pad(y0, y1);
  const f = frame({ title: "plane crossings", subtitle: sub, xLabel: "x^1", yLabel: "x^2", x0, x1, y0, y1 });
  for (let i = 0; i < n; i++) {
    f.parts.push(circle(f.xOf(xs[i]), f.yOf(ys[i]), 1.6, PALETTE[0], 0.45));
  }
  return f.close();
}

// ---------------------------------------------------------------------------
// density_overlay

/** Binned sample masses next to the candidate law from the same table.
 *
 * Expects r_lo, r_hi, mass, mass_se, law_mass columns; masses are
 * converted to densities with the bin widths, so the candidate curve is
 * exactly the producer's quadrature normalization and sums to its total
 * mass over the plotted range.
 */
export function densityOverlay(t: Table, file: string): string {
  requireColumns(t, ["r_lo", "r_hi", "mass", "mass_se", "law_mass"], file);
  if (t.rows.length === 0) {
    return noDataFigure("empirical density vs candidate law", "r", "density");
  }
  const lo = column(t, "r_lo");
  const hi = column(t, "r_hi");
  const mass = column(t, "mass");
  const se = column(t, "mass_se");
  const law = column(t, "law_mass");
  const n = lo.length;
  const width = new Array<number>(n);
  for (let i = 0; i < n; i++) {
    width[i] = hi[i] - lo[i];
    if (!(width[i] > 0)) {
      throw new SchemaError("r_hi", `${file} line ${i + 2}: column "r_hi" must exceed "r_lo"`);
    }
  }
  const dens = mass.map((m, i) => m / width[i]);
  const densSe = se.map((s, i) => s / width[i]);
  const lawDens = law.map((m, i) => m / width[i]);
  let yMax = 0;
  for (let i = 0; i < n; i++) {
    yMax = Math.max(yMax, dens[i] + densSe[i], lawDens[i]);
  }
  const massTot = mass.reduce((a, b) => a + b, 0);
  const lawTot = law.reduce((a, b) => a + b, 0);
  const f = frame({
    title: "empirical density vs candidate law",
    subtitle: `${file} - sample mass ${massTot.toFixed(4)}, candidate mass ${lawTot.toFixed(4)}`,
    xLabel: "r",
    yLabel: "density",
    x0: lo[0],
    x1: hi[n - 1],
    y0: 0,
    y1: yMax * 1.08 || 1,
  });
  for (let i = 0; i < n; i++) {
    const xl = f.xOf(lo[i]);
    const xr = f.xOf(hi[i]);
    f.parts.push(rect(xl, f.yOf(dens[i]), xr - xl, f.yOf(0) - f.yOf(dens[i]), PALETTE[0], 0.55));
  }
  for (let i = 0; i < n; i++) {
    if (densSe[i] <= 0) continue;
    const cx = f.xOf((lo[i] + hi[i]) / 2);
    const yLo = f.yOf(Math.max(0, dens[i] - densSe[i]));
    const yHi = f.yOf(dens[i] + densSe[i]);
    f.parts.push(line(cx, yLo, cx, yHi, "#333"));
    f.parts.push(line(cx - 2.5, yLo, cx + 2.5, yLo, "#333"));
    f.parts.push(line(cx - 2.5, yHi, cx + 2.5, yHi, "#333"));
  }
  const curve = lawDens.map((d, i) => [f.xOf((lo[i] + hi[i]) / 2), f.yOf(d)] as [number, number]);
  f.parts.push(polyline(curve, PALETTE[1], 2));
  const lx = f.right - 170;
  f.parts.push(rect(lx, f.top + 8, 12, 12, PALETTE[0], 0.55));
  f.parts.push(text(lx + 18, f.top + 18, "samples (± se)"));
  f.parts.push(line(lx, f.top + 32, lx + 12, f.top + 32, PALETTE[1], 2));
  f.parts.push(text(lx + 18, f.top + 36, "candidate law"));
  return f.close();
}

// ---------------------------------------------------------------------------
// entropy_series

/** Checkpoint series with error bars.
 *
 * First column is the abscissa; every further column X is a curve, with
 * an optional X_se column supplying its error bars.
 */
export function entropySeries(t: Table, file: string): string {
  if (t.names.length < 2) {
    throw new SchemaError("header", `${file}: needs an abscissa column and at least one value column (has: ${t.names.join(", ")})`);
  }
  const xName = t.names[0];
  const curves = t.names.slice(1).filter((n) => !n.endsWith("_se"));
  if (curves.length === 0) {
    throw new SchemaError("header", `${file}: only _se columns after "${xName}", nothing to plot`);
  }
  if (t.rows.length === 0) {
    return noDataFigure("divergence series", xName, "estimate");
  }
  const xs = column(t, xName);
  let y0 = 0, y1 = -Infinity;
  const data = curves.map((name) => {
    const v = column(t, name);
    const se = t.names.includes(name + "_se") ? column(t, name + "_se") : v.map(() => 0);
    for (let i = 0; i < v.length; i++) {
      y0 = Math.min(y0, v[i] - se[i]);
      y1 = Math.max(y1, v[i] + se[i]);
    }
    return { name, v, se };
  });
  const f = frame({
    title: "divergence series",
    subtitle: `${file} - ${t.rows.length} checkpoints`,
    xLabel: xName,
    yLabel: "estimate",
    x0: Math.min(...xs),
    x1: Math.max(...xs),
    y0,
    y1: y1 * 1.1 || 1,
  });
  data.forEach((d, k) => {
    const color = PALETTE[k % PALETTE.length];
    for (let i = 0; i < xs.length; i++) {
      if (d.se[i] <= 0) continue;
      const cx = f.xOf(xs[i]);
      const ya = f.yOf(d.v[i] - d.se[i]);
      const yb = f.yOf(d.v[i] + d.se[i]);
      f.parts.push(line(cx, ya, cx, yb, color));
      f.parts.push(line(cx - 2.5, ya, cx + 2.5, ya, color));
      f.parts.push(line(cx - 2.5, yb, cx + 2.5, yb, color));
    }
    f.parts.push(polyline(xs.map((x, i) => [f.xOf(x), f.yOf(d.v[i])] as [number, number]), color, 1.5));
    for (let i = 0; i < xs.length; i++) {
      f.parts.push(circle(f.xOf(xs[i]), f.yOf(d.v[i]), 2.5, color));
    }
    f.parts.push(line(f.right - 150, f.top + 12 + 16 * k, f.right - 138, f.top + 12 + 16 * k, color, 2));
    f.parts.push(text(f.right - 132, f.top + 16 + 16 * k, d.name));
  });
  return f.close();
}

// ---------------------------------------------------------------------------
// report_grid

function fmt3(v: number): string {
  return String(Number(v.toPrecision(3)));
}

const TRUNC = 52;

/** One bar row per check: value scaled against its tolerance.
 *
 * The bar length is value/tolerance for upper bounds and
 * tolerance/value for lower bounds, so in both cases the bar staying
 * left of the marked line means the check passed.
 */
export function reportGrid(reports: Report[]): string {
  const W = 700;
  const headH = 28;
  const rowH = 22;
  const gap = 16;
  let H = 42;
  for (const r of reports) {
    H += headH + rowH * r.checks.length + gap;
  }
  const parts: string[] = [];
  parts.push(openSvg(W, H));
  parts.push(rect(0, 0, W, H, "#ffffff"));
  parts.push(text(16, 22, "experiment checks", { size: 15, fill: "#222", bold: true }));

  const barX = 316;
  const barW = 252;
  const capRatio = 1.4;
  const tolX = barX + barW / capRatio;

  let y = 42;
  for (const r of reports) {
    const chip = r.pass ? "#228833" : "#cc3311";
    parts.push(text(16, y + 14, `${r.experiment}`, { size: 13, fill: "#222", bold: true }));
    parts.push(text(200, y + 14, `seed ${r.seed}, v${r.code_version}`, { size: 11, fill: "#777" }));
    parts.push(rect(barX + barW + 12, y + 2, 48, 16, chip));
    parts.push(text(barX + barW + 36, y + 14, r.pass ? "PASS" : "FAIL", { size: 11, fill: "#fff", anchor: "middle", bold: true }));
    y += headH;
    for (const c of r.checks) {
      const mid = y + rowH / 2;
      let name = c.statistic;
      if (name.length > TRUNC) name = name.slice(0, TRUNC - 1) + "…";
      parts.push(text(24, mid + 4, name, { size: 11, fill: "#333" }));
      let ratio: number;
      if (c.op === "le") {
        ratio = c.tolerance > 0 ? c.value / c.tolerance : c.value <= 0 ? 0 : capRatio;
      } else {
        ratio = c.value > 0 ? c.tolerance / c.value : capRatio;
      }
      ratio = Math.max(0, Math.min(capRatio, ratio));
      const color = c.pass ? "#228833" : "#cc3311";
      parts.push(rect(barX, mid - 5, (barW * ratio) / capRatio, 10, color, 0.8));
      if (c.op === "le" && c.stderr !== undefined && c.tolerance > 0) {
        const a = barX + (barW * Math.max(0, Math.min(capRatio, (c.value - c.stderr) / c.tolerance))) / capRatio;
        const b = barX + (barW * Math.max(0, Math.min(capRatio, (c.value + c.stderr) / c.tolerance))) / capRatio;
        parts.push(line(a, mid, b, mid, "#222", 1));
        parts.push(line(b, mid - 4, b, mid + 4, "#222", 1));
      }
      parts.push(line(tolX, mid - 7, tolX, mid + 7, "#222", 1));
      parts.push(text(barX + barW + 12, mid + 4, `${fmt3(c.value)} ${c.op === "le" ? "<=" : ">="} ${fmt3(c.tolerance)}`, { size: 10, fill: "#555" }));
      y += rowH;
    }
    y += gap;
  }
  return parts.join("\n") + "\n</svg>\n";
}
