/** Small hand-rolled SVG chart toolkit.
 *
 * Figures are plain strings built from a few primitives: a framed plot
 * area with grid, ticks and axis labels, plus line/rect/circle/text
 * helpers. No DOM, no timestamps, no randomness, so the same inputs
 * always produce the same bytes.
 */

export const PALETTE = ["#4477aa", "#ee7733", "#228833", "#cc3311", "#66ccee", "#aa3377"];

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Coordinate formatting: two decimals, trimmed, stable. */
export function r2(v: number): string {
  return String(Math.round(v * 100) / 100);
}

/** Axis tick label: short decimal, exponential outside a comfortable range. */
export function tickLabel(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a < 1e-3 || a >= 1e5)) {
    return v.toExponential(2).replace(/\.?0+e/, "e");
  }
  return String(Number(v.toPrecision(6)));
}

/** Round ticks covering [lo, hi] with steps of 1, 2 or 5 times a power of ten. */
export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) return [];
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const span = hi - lo;
  const raw = span / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = mag * (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10);
  const ticks: number[] = [];
  let t = Math.ceil(lo / step) * step;
  while (t <= hi + step * 1e-9) {
    // snap tiny float crumbs like 0.30000000000000004
    ticks.push(Number(t.toPrecision(12)));
    t += step;
  }
  return ticks;
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, w = 1, dash?: string): string {
  const d = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<line x1="${r2(x1)}" y1="${r2(y1)}" x2="${r2(x2)}" y2="${r2(y2)}" stroke="${stroke}" stroke-width="${w}"${d}/>`;
}

export function rect(x: number, y: number, w: number, h: number, fill: string, opacity?: number, stroke?: string): string {
  const o = opacity !== undefined ? ` fill-opacity="${opacity}"` : "";
  const s = stroke ? ` stroke="${stroke}"` : "";
  return `<rect x="${r2(x)}" y="${r2(y)}" width="${r2(w)}" height="${r2(h)}" fill="${fill}"${o}${s}/>`;
}

export function circle(cx: number, cy: number, r: number, fill: string, opacity?: number): string {
  const o = opacity !== undefined ? ` fill-opacity="${opacity}"` : "";
  return `<circle cx="${r2(cx)}" cy="${r2(cy)}" r="${r}" fill="${fill}"${o}/>`;
}

export function polyline(pts: Array<[number, number]>, stroke: string, w = 1.5, dash?: string): string {
  const d = dash ? ` stroke-dasharray="${dash}"` : "";
  const coords = pts.map(([x, y]) => `${r2(x)},${r2(y)}`).join(" ");
  return `<polyline points="${coords}" fill="none" stroke="${stroke}" stroke-width="${w}"${d}/>`;
}

export interface TextOpts {
  size?: number;
  fill?: string;
  anchor?: "start" | "middle" | "end";
  bold?: boolean;
  rotate?: number; // degrees around (x, y)
}

export function text(x: number, y: number, s: string, opts: TextOpts = {}): string {
  const size = opts.size ?? 11;
  const fill = opts.fill ?? "#444";
  const anchor = opts.anchor ?? "start";
  const weight = opts.bold ? ` font-weight="bold"` : "";
  const rot = opts.rotate !== undefined ? ` transform="rotate(${opts.rotate} ${r2(x)} ${r2(y)})"` : "";
  return `<text x="${r2(x)}" y="${r2(y)}" font-size="${size}" fill="${fill}" text-anchor="${anchor}"${weight}${rot}>${esc(s)}</text>`;
}

export interface FrameSpec {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  x0: number;
  x1: number;
  y0: number;
  y1: number;
  width?: number;
  height?: number;
}

export interface Frame {
  parts: string[];
  xOf(v: number): number;
  yOf(v: number): number;
  left: number;
  right: number;
  top: number;
  bottom: number;
  close(): string;
}

export function openSvg(width: number, height: number): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`
  );
}

/** Open an SVG with a titled, gridded plot area and return scale closures. */
export function frame(spec: FrameSpec): Frame {
  const W = spec.width ?? 700;
  const H = spec.height ?? 360;
  const ml = 64;
  const mr = 20;
  const mt = spec.subtitle ? 52 : 44;
  const mb = 48;
  const left = ml;
  const right = W - mr;
  const top = mt;
  const bottom = H - mb;

  let { x0, x1, y0, y1 } = spec;
  if (x0 === x1) {
    x0 -= 1;
    x1 += 1;
  }
  if (y0 === y1) {
    y0 -= 1;
    y1 += 1;
  }
  const xOf = (v: number) => left + ((v - x0) / (x1 - x0)) * (right - left);
  const yOf = (v: number) => bottom - ((v - y0) / (y1 - y0)) * (bottom - top);

  const parts: string[] = [];
  parts.push(openSvg(W, H));
  parts.push(rect(0, 0, W, H, "#ffffff"));
  parts.push(text(ml, 20, spec.title, { size: 15, fill: "#222", bold: true }));
  if (spec.subtitle) {
    parts.push(text(ml, 36, spec.subtitle, { size: 11, fill: "#777" }));
  }
  for (const tx of niceTicks(x0, x1)) {
    parts.push(line(xOf(tx), top, xOf(tx), bottom, "#e5e5e5"));
    parts.push(text(xOf(tx), bottom + 16, tickLabel(tx), { anchor: "middle" }));
  }
  for (const ty of niceTicks(y0, y1)) {
    parts.push(line(left, yOf(ty), right, yOf(ty), "#e5e5e5"));
    parts.push(text(left - 8, yOf(ty) + 4, tickLabel(ty), { anchor: "end" }));
  }
  parts.push(rect(left, top, right - left, bottom - top, "none", undefined, "#999"));
  parts.push(text((left + right) / 2, H - 10, spec.xLabel, { size: 12, anchor: "middle", fill: "#222" }));
  parts.push(text(16, (top + bottom) / 2, spec.yLabel, { size: 12, anchor: "middle", fill: "#222", rotate: -90 }));

  return {
    parts,
    xOf,
    yOf,
    left,
    right,
    top,
    bottom,
    close: () => parts.join("\n") + "\n</svg>\n",
  };
}

/** Empty-axes figure with a "no data" annotation, for header-only tables. */
export function noDataFigure(title: string, xLabel: string, yLabel: string): string {
  const f = frame({ title, xLabel, yLabel, x0: 0, x1: 1, y0: 0, y1: 1 });
  f.parts.push(
    text((f.left + f.right) / 2, (f.top + f.bottom) / 2, "no data", {
      size: 16,
      fill: "#999",
      anchor: "middle",
    }),
  );
  return f.close();
}
