/** Minimal deterministic SVG chart renderer (no DOM, no randomness). */

export type Scale = "linear" | "log";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  kind: "line" | "points" | "dashed";
  color: string;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  series: Series[];
  annotations: string[];
  width?: number;
  height?: number;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export function color(i: number): string {
  return PALETTE[i % PALETTE.length];
}

function fmt(v: number): string {
  // deterministic short form for coordinates
  return Number(v.toFixed(2)).toString();
}

export function tickFormat(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0).replace("+", "");
  return Number(v.toPrecision(4)).toString();
}

function transformer(scale: Scale, lo: number, hi: number, out0: number, out1: number) {
  if (scale === "log") {
    const llo = Math.log10(lo);
    const lhi = Math.log10(hi);
    return (v: number) => out0 + ((Math.log10(v) - llo) / (lhi - llo || 1)) * (out1 - out0);
  }
  return (v: number) => out0 + ((v - lo) / (hi - lo || 1)) * (out1 - out0);
}

function bounds(values: number[], scale: Scale): [number, number] {
  const pos = scale === "log" ? values.filter((v) => v > 0) : values;
  if (pos.length === 0) throw new Error("no plottable values (log scale requires positives)");
  let lo = Math.min(...pos);
  let hi = Math.max(...pos);
  if (scale === "log") {
    lo = Math.pow(10, Math.floor(Math.log10(lo)));
    hi = Math.pow(10, Math.ceil(Math.log10(hi) + 1e-12));
    if (lo === hi) hi = lo * 10;
  } else {
    const pad = (hi - lo || Math.abs(hi) || 1) * 0.08;
    lo -= pad;
    hi += pad;
  }
  return [lo, hi];
}

function ticks(lo: number, hi: number, scale: Scale): number[] {
  if (scale === "log") {
    const out: number[] = [];
    const decades = Math.log10(hi / lo);
    const step = Math.max(1, Math.round(decades / 8));
    for (let e = Math.ceil(Math.log10(lo)); Math.pow(10, e) <= hi * (1 + 1e-9); e += step) {
      out.push(Math.pow(10, e));
    }
    return out;
  }
  const span = hi - lo;
  const raw = span / 6;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= 7) ?? 10 * mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 760;
  const height = spec.height ?? 520;
  const m = { left: 78, right: 24, top: 48, bottom: 96 + 16 * spec.annotations.length };
  const xs = spec.series.flatMap((s) => s.x);
  const ys = spec.series.flatMap((s) => s.y);
  const [x0, x1] = bounds(xs, spec.xScale);
  const [y0, y1] = bounds(ys, spec.yScale);
  const px = transformer(spec.xScale, x0, x1, m.left, width - m.right);
  const py = transformer(spec.yScale, y0, y1, height - m.bottom, m.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="16">${esc(spec.title)}</text>`,
  );

  // axes and ticks
  const axisY = height - m.bottom;
  parts.push(`<g stroke="#444" stroke-width="1">`);
  parts.push(`<line x1="${m.left}" y1="${axisY}" x2="${width - m.right}" y2="${axisY}"/>`);
  parts.push(`<line x1="${m.left}" y1="${m.top}" x2="${m.left}" y2="${axisY}"/>`);
  parts.push(`</g>`);
  for (const t of ticks(x0, x1, spec.xScale)) {
    const x = px(t);
    parts.push(`<line x1="${fmt(x)}" y1="${axisY}" x2="${fmt(x)}" y2="${axisY + 5}" stroke="#444"/>`);
    parts.push(
      `<text x="${fmt(x)}" y="${axisY + 20}" text-anchor="middle" font-size="11">${tickFormat(t)}</text>`,
    );
    parts.push(
      `<line x1="${fmt(x)}" y1="${m.top}" x2="${fmt(x)}" y2="${axisY}" stroke="#eee"/>`,
    );
  }
  for (const t of ticks(y0, y1, spec.yScale)) {
    const y = py(t);
    parts.push(`<line x1="${m.left - 5}" y1="${fmt(y)}" x2="${m.left}" y2="${fmt(y)}" stroke="#444"/>`);
    parts.push(
      `<text x="${m.left - 9}" y="${fmt(y + 4)}" text-anchor="end" font-size="11">${tickFormat(t)}</text>`,
    );
    parts.push(
      `<line x1="${m.left}" y1="${fmt(y)}" x2="${width - m.right}" y2="${fmt(y)}" stroke="#eee"/>`,
    );
  }
  parts.push(
    `<text x="${(m.left + width - m.right) / 2}" y="${axisY + 42}" text-anchor="middle" font-size="13">${esc(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${(m.top + axisY) / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 20 ${(m.top + axisY) / 2})">${esc(spec.yLabel)}</text>`,
  );

  // series
  spec.series.forEach((s) => {
    const pts = s.x
      .map((vx, i) => [vx, s.y[i]] as const)
      .filter(([vx, vy]) =>
        (spec.xScale !== "log" || vx > 0) && (spec.yScale !== "log" || vy > 0),
      )
      .map(([vx, vy]) => `${fmt(px(vx))},${fmt(py(vy))}`);
    if (pts.length === 0) return;
    if (s.kind === "points") {
      for (const p of pts) {
        const [cx, cy] = p.split(",");
        parts.push(`<circle cx="${cx}" cy="${cy}" r="4" fill="${s.color}"/>`);
      }
    } else {
      const dash = s.kind === "dashed" ? ` stroke-dasharray="7 5"` : "";
      parts.push(
        `<polyline points="${pts.join(" ")}" fill="none" stroke="${s.color}" stroke-width="1.8"${dash}/>`,
      );
    }
  });

  // legend
  let ly = m.top + 6;
  for (const s of spec.series) {
    parts.push(
      `<rect x="${width - m.right - 180}" y="${ly - 9}" width="12" height="12" fill="${s.color}"/>`,
    );
    parts.push(
      `<text x="${width - m.right - 162}" y="${ly + 2}" font-size="12">${esc(s.label)}</text>`,
    );
    ly += 18;
  }

  // annotations
  spec.annotations.forEach((a, i) => {
    parts.push(
      `<text x="${m.left}" y="${axisY + 62 + 16 * i}" font-size="12" fill="#222">${esc(a)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
