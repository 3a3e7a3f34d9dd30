import { ColumnError, Table, distinct, numbers, requireColumns } from "./csv.js";
import { leastSquares, median, powerLawFit } from "./fit.js";
import { ChartSpec, Series, color } from "./svg.js";

export type FigureKind =
  | "growth_loglog"
  | "smoothing_exponent_gap"
  | "conservation_drift"
  | "bilinear_ratio_vs_k";

export const FIGURE_KINDS: FigureKind[] = [
  "growth_loglog",
  "smoothing_exponent_gap",
  "conservation_drift",
  "bilinear_ratio_vs_k",
];

export interface FigureResult {
  chart: ChartSpec;
  notes: string[];
}

export type Aggregate = "median" | "separate" | undefined;

function bracket(t: number): number {
  return Math.sqrt(1 + t * t);
}

function seedsOf(table: Table): string[] {
  return table.header.includes("seed") ? distinct(table, "seed") : ["0"];
}

function pickRows(table: Table, seed: string): Record<string, string>[] {
  if (!table.header.includes("seed")) return table.rows;
  return table.rows.filter((r) => r.seed === seed);
}

/** Refuse silently-mixed ensembles: multi-seed tables need an explicit choice. */
function resolveSeeds(table: Table, aggregate: Aggregate, context: string): string[] {
  const seeds = seedsOf(table);
  if (seeds.length > 1 && aggregate === undefined) {
    throw new ColumnError(
      `${context}: ${table.path} holds ${seeds.length} seeds; ` +
        `pass an aggregation choice (median or separate)`,
    );
  }
  return seeds;
}

// ---------------------------------------------------------------------------

export function growthFigure(
  table: Table,
  config: { s: number; eps: number },
  aggregate: Aggregate,
): FigureResult {
  requireColumns(table, ["t", "hs_norm"], "growth_loglog");
  const seeds = resolveSeeds(table, aggregate, "growth_loglog");
  const series: Series[] = [];
  const notes: string[] = [];

  const collect = (rows: Record<string, string>[], label: string, i: number) => {
    const t = rows.map((r) => Number(r.t)).filter((v) => Number.isFinite(v));
    const y = rows.map((r) => Number(r.hs_norm));
    series.push({ label, x: t.map(bracket), y, kind: "line", color: color(i) });
    return { t, y };
  };

  let fitData: { t: number[]; y: number[] };
  if (seeds.length > 1 && aggregate === "median") {
    const t = [...new Set(table.rows.map((r) => r.t))].map(Number).sort((a, b) => a - b);
    const y = t.map((tv) =>
      median(table.rows.filter((r) => Number(r.t) === tv).map((r) => Number(r.hs_norm))),
    );
    series.push({ label: "median over seeds", x: t.map(bracket), y, kind: "line", color: color(0) });
    fitData = { t, y };
  } else {
    seeds.forEach((s, i) => collect(pickRows(table, s), seeds.length > 1 ? `seed ${s}` : "H^s norm", i));
    fitData = {
      t: pickRows(table, seeds[0]).map((r) => Number(r.t)),
      y: pickRows(table, seeds[0]).map((r) => Number(r.hs_norm)),
    };
  }

  // fit over the final decade, matching the experiment pipeline
  const tMax = Math.max(...fitData.t);
  const keep = fitData.t.map((v, i) => [v, fitData.y[i]] as const).filter(([v]) => v >= tMax / 10);
  const fit = powerLawFit(keep.map(([v]) => v), keep.map(([, y]) => y));
  const slopeText = fit.slope.toFixed(3);
  const boundSlope = 3 * (config.s - 0.5) + config.eps;

  const xFit = keep.map(([v]) => bracket(v));
  const yFit = xFit.map((v) => Math.exp(fit.intercept) * Math.pow(v, fit.slope));
  series.push({ label: `fit slope = ${slopeText}`, x: xFit, y: yFit, kind: "dashed", color: "#000000" });

  const anchorX = xFit[0];
  const anchorY = yFit[0];
  const xBound = [anchorX, Math.max(...xFit)];
  const yBound = xBound.map((v) => anchorY * Math.pow(v / anchorX, boundSlope));
  series.push({
    label: `bound slope = ${boundSlope.toFixed(3)}`,
    x: xBound,
    y: yBound,
    kind: "dashed",
    color: "#d62728",
  });

  notes.push(`fit slope = ${slopeText} (r^2 = ${fit.r2.toFixed(4)}) over the final decade`);
  notes.push(`reference: 3(s-1/2)+eps = ${boundSlope.toFixed(3)} at s = ${config.s}, eps = ${config.eps}`);
  return {
    chart: {
      title: "Sobolev norm growth (log-log)",
      xLabel: "<t>",
      yLabel: "||u(t)||_{H^s}",
      xScale: "log",
      yScale: "log",
      series,
      annotations: notes,
    },
    notes,
  };
}

// ---------------------------------------------------------------------------

export function smoothingFigure(table: Table): FigureResult {
  requireColumns(table, ["n_modes", "seed", "a", "sup_residual", "w0_norm"], "smoothing_exponent_gap");
  const gains = distinct(table, "a").map(Number).sort((x, y) => x - y);
  const ns = distinct(table, "n_modes").map(Number).sort((x, y) => x - y);
  if (ns.length < 2) {
    throw new ColumnError(`smoothing_exponent_gap: ${table.path} needs >= 2 resolutions`);
  }
  const beta: number[] = [];
  const w0exp: number[] = [];
  for (const a of gains) {
    const medRes: number[] = [];
    const medW0: number[] = [];
    for (const n of ns) {
      const rows = table.rows.filter((r) => Number(r.a) === a && Number(r.n_modes) === n);
      medRes.push(median(rows.map((r) => Number(r.sup_residual))));
      medW0.push(median(rows.map((r) => Number(r.w0_norm))));
    }
    const logn = ns.map((n) => Math.log(n));
    beta.push(leastSquares(logn, medRes.map(Math.log)).slope);
    w0exp.push(leastSquares(logn, medW0.map(Math.log)).slope);
  }
  const top = Math.max(...gains) * 1.15;
  const notes = gains.map(
    (a, i) => `a = ${a}: beta = ${beta[i].toFixed(3)}, w0 exponent = ${w0exp[i].toFixed(3)}`,
  );
  return {
    chart: {
      title: "Nonlinear smoothing: residual exponent gap",
      xLabel: "gain a",
      yLabel: "fitted exponent vs N",
      xScale: "linear",
      yScale: "linear",
      series: [
        { label: "beta(a): residual", x: gains, y: beta, kind: "points", color: color(0) },
        { label: "w0 exponent", x: gains, y: w0exp, kind: "points", color: color(2) },
        { label: "y = a reference", x: [0, top], y: [0, top], kind: "dashed", color: "#888888" },
      ],
      annotations: notes,
    },
    notes,
  };
}

// ---------------------------------------------------------------------------

export function conservationFigure(table: Table, aggregate: Aggregate): FigureResult {
  const names = ["i2", "e3", "energy_half"];
  requireColumns(table, ["t", ...names], "conservation_drift");
  const seeds = resolveSeeds(table, aggregate, "conservation_drift");
  const rows = pickRows(table, seeds[0]);
  const t = rows.map((r) => Number(r.t));
  const series: Series[] = names.map((name, i) => {
    const v = rows.map((r) => Number(r[name]));
    const drift = v.map((x) => Math.max(Math.abs(x - v[0]) / Math.max(Math.abs(v[0]), 1e-12), 1e-17));
    return { label: `drift of ${name}`, x: t, y: drift, kind: "line" as const, color: color(i) };
  });
  const worst = Math.max(...series.flatMap((s) => s.y));
  const notes = [
    `max relative drift over the run: ${worst.toExponential(2)}`,
    seeds.length > 1 ? `seed ${seeds[0]} shown (separate aggregation)` : `single run`,
  ];
  return {
    chart: {
      title: "Conserved-quantity drift",
      xLabel: "t",
      yLabel: "relative drift (floored at 1e-17)",
      xScale: "linear",
      yScale: "log",
      series,
      annotations: notes,
    },
    notes,
  };
}

// ---------------------------------------------------------------------------

export function bilinearFigure(table: Table): FigureResult {
  requireColumns(table, ["k", "m", "j", "seed", "ratio"], "bilinear_ratio_vs_k");
  const pairs = [...new Set(table.rows.map((r) => `${r.m},${r.j}`))].sort();
  const series: Series[] = [];
  const notes: string[] = [];
  pairs.forEach((pair, i) => {
    const [m, j] = pair.split(",");
    const rows = table.rows.filter((r) => r.m === m && r.j === j);
    const ks = [...new Set(rows.map((r) => Number(r.k)))].sort((a, b) => a - b);
    const maxima = ks.map((k) =>
      Math.max(...rows.filter((r) => Number(r.k) === k).map((r) => Number(r.ratio))),
    );
    const live = ks.map((k, idx) => [k, maxima[idx]] as const).filter(([, v]) => v > 0);
    series.push({
      label: `(m,j) = (${m},${j})`,
      x: live.map(([k]) => k),
      y: live.map(([, v]) => v),
      kind: "line",
      color: color(i),
    });
    if (live.length >= 2) {
      const slope = leastSquares(live.map(([k]) => k), live.map(([, v]) => Math.log(v))).slope;
      notes.push(`(m,j) = (${m},${j}): log-ratio slope in k = ${slope.toFixed(3)} over ${live.length} live cells`);
    } else {
      notes.push(`(m,j) = (${m},${j}): ${live.length} live cell(s); no slope fitted`);
    }
  });
  return {
    chart: {
      title: "Bilinear estimate: max ratio vs k",
      xLabel: "dyadic index k",
      yLabel: "max LHS/RHS ratio",
      xScale: "linear",
      yScale: "log",
      series,
      annotations: notes,
    },
    notes,
  };
}
