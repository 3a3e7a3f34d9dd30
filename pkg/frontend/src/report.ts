import { existsSync, mkdirSync, readFileSync, writeFileSync } from "fs";
import { dirname, join, resolve } from "path";

import { ColumnError, Table, loadCsv } from "./csv.js";
import {
  Aggregate,
  FIGURE_KINDS,
  FigureKind,
  FigureResult,
  bilinearFigure,
  conservationFigure,
  growthFigure,
  smoothingFigure,
} from "./figures.js";
import { renderChart } from "./svg.js";

export interface ReportSpec {
  manifests: string[];
  figures: FigureKind[];
  format: "svg" | "png";
  outDir: string;
  aggregate?: Aggregate;
}

interface Manifest {
  command: string;
  config: Record<string, Record<string, unknown>>;
  outputs: string[];
  path: string;
}

interface Sources {
  growth?: { table: Table; manifest: Manifest };
  smoothing?: { table: Table; manifest: Manifest };
  conservation?: { table: Table; manifest: Manifest };
  bilinear?: { table: Table; manifest: Manifest };
}

const CSV_BY_COMMAND: Record<string, { key: keyof Sources; file: string }> = {
  growth: { key: "growth", file: "growth.csv" },
  smoothing: { key: "smoothing", file: "smoothing.csv" },
  solve: { key: "conservation", file: "conservation.csv" },
  bilinear: { key: "bilinear", file: "bilinear_ratios.csv" },
};

function loadManifest(path: string): Manifest {
  if (!existsSync(path)) {
    throw new ColumnError(`manifest not found: ${path}`);
  }
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  if (typeof raw.command !== "string" || !Array.isArray(raw.outputs)) {
    throw new ColumnError(`${path}: not a bolab run manifest (need command + outputs)`);
  }
  return { command: raw.command, config: raw.config ?? {}, outputs: raw.outputs, path };
}

function collectSources(manifests: Manifest[]): Sources {
  const sources: Sources = {};
  for (const m of manifests) {
    const entry = CSV_BY_COMMAND[m.command];
    if (!entry) continue; // e.g. gauge-check and norms feed no figure type
    if (sources[entry.key]) continue; // first manifest of a kind wins
    const csvPath = join(dirname(m.path), entry.file);
    if (!existsSync(csvPath)) {
      throw new ColumnError(`${m.path}: expected ${entry.file} next to the manifest`);
    }
    sources[entry.key] = { table: loadCsv(csvPath), manifest: m };
  }
  return sources;
}

function growthConfig(m: Manifest): { s: number; eps: number } {
  const exp = (m.config.experiment ?? {}) as Record<string, unknown>;
  const s = typeof exp.s === "number" ? exp.s : NaN;
  if (!Number.isFinite(s)) {
    throw new ColumnError(`${m.path}: experiment.s missing; cannot place the bound line`);
  }
  const eps = typeof exp.eps === "number" ? exp.eps : 0.01;
  return { s, eps };
}

function buildFigure(kind: FigureKind, sources: Sources, aggregate: Aggregate): FigureResult {
  switch (kind) {
    case "growth_loglog": {
      const src = sources.growth;
      if (!src) throw new ColumnError("growth_loglog: no growth manifest supplied");
      return growthFigure(src.table, growthConfig(src.manifest), aggregate);
    }
    case "smoothing_exponent_gap": {
      const src = sources.smoothing;
      if (!src) throw new ColumnError("smoothing_exponent_gap: no smoothing manifest supplied");
      return smoothingFigure(src.table);
    }
    case "conservation_drift": {
      // a dedicated solve run is preferred; a growth history carries the
      // same invariant columns and is accepted as a fallback
      const src = sources.conservation ?? sources.growth;
      if (!src) throw new ColumnError("conservation_drift: no solve or growth manifest supplied");
      return conservationFigure(src.table, aggregate);
    }
    case "bilinear_ratio_vs_k": {
      const src = sources.bilinear;
      if (!src) throw new ColumnError("bilinear_ratio_vs_k: no bilinear manifest supplied");
      return bilinearFigure(src.table);
    }
  }
}

async function toPng(svg: string): Promise<Buffer> {
  let resvg: typeof import("@resvg/resvg-js");
  try {
    resvg = await import("@resvg/resvg-js");
  } catch {
    throw new Error(
      "png output needs the optional @resvg/resvg-js dependency; " +
        "install it or use --format svg",
    );
  }
  return new resvg.Resvg(svg).render().asPng();
}

function availableKinds(sources: Sources): FigureKind[] {
  const out: FigureKind[] = [];
  if (sources.growth) out.push("growth_loglog");
  if (sources.smoothing) out.push("smoothing_exponent_gap");
  if (sources.conservation || sources.growth) out.push("conservation_drift");
  if (sources.bilinear) out.push("bilinear_ratio_vs_k");
  return out;
}

export async function render(spec: ReportSpec): Promise<{ written: string[]; summary: string }> {
  if (spec.manifests.length === 0) {
    throw new ColumnError("no manifests supplied");
  }
  for (const kind of spec.figures) {
    if (!FIGURE_KINDS.includes(kind)) {
      throw new ColumnError(`unknown figure kind ${kind}; known: ${FIGURE_KINDS.join(", ")}`);
    }
  }
  const sources = collectSources(spec.manifests.map(loadManifest));
  const figures = spec.figures.length > 0 ? spec.figures : availableKinds(sources);
  if (figures.length === 0) {
    throw new ColumnError("no figure kinds requested and no figure data supplied");
  }
  mkdirSync(spec.outDir, { recursive: true });

  const written: string[] = [];
  const sections: string[] = ["# bolab report", ""];
  for (const kind of figures) {
    const fig = buildFigure(kind, sources, spec.aggregate);
    const svg = renderChart(fig.chart);
    const file = join(spec.outDir, `${kind}.${spec.format}`);
    if (spec.format === "png") {
      writeFileSync(file, await toPng(svg));
    } else {
      writeFileSync(file, svg);
    }
    written.push(resolve(file));
    sections.push(`## ${kind}`, "", `![${kind}](${kind}.${spec.format})`, "");
    for (const note of fig.notes) sections.push(`- ${note}`);
    sections.push("");
  }

  const summaryPath = join(spec.outDir, "summary.md");
  const summary = sections.join("\n");
  writeFileSync(summaryPath, summary);
  written.push(resolve(summaryPath));
  return { written, summary };
}
