#!/usr/bin/env node
import { FIGURE_KINDS, FigureKind } from "./figures.js";
import { ReportSpec, render } from "./report.js";

const USAGE = `usage: report --manifest <manifest.json> [--manifest ...] --out <dir>
       [--format svg|png] [--figures a,b,c] [--aggregate median|separate]

figure kinds: ${FIGURE_KINDS.join(", ")} (default: all kinds with data supplied)`;

export function parseArgs(argv: string[]): ReportSpec {
  // an empty figure list means: every kind whose data source was supplied
  const spec: ReportSpec = { manifests: [], figures: [], format: "svg", outDir: "" };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new Error(`${arg} needs a value`);
      return argv[++i];
    };
    switch (arg) {
      case "--manifest":
        spec.manifests.push(next());
        break;
      case "--out":
        spec.outDir = next();
        break;
      case "--format": {
        const v = next();
        if (v !== "svg" && v !== "png") throw new Error(`--format must be svg or png, got ${v}`);
        spec.format = v;
        break;
      }
      case "--figures":
        spec.figures = next().split(",").map((s) => s.trim()) as FigureKind[];
        break;
      case "--aggregate": {
        const v = next();
        if (v !== "median" && v !== "separate") {
          throw new Error(`--aggregate must be median or separate, got ${v}`);
        }
        spec.aggregate = v;
        break;
      }
      case "--help":
      case "-h":
        console.log(USAGE);
        process.exit(0);
        break;
      default:
        throw new Error(`unknown argument ${arg}\n${USAGE}`);
    }
  }
  if (spec.manifests.length === 0 || spec.outDir === "") {
    throw new Error(`--manifest and --out are required\n${USAGE}`);
  }
  return spec;
}

async function main(): Promise<number> {
  let spec: ReportSpec;
  try {
    spec = parseArgs(process.argv.slice(2));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  try {
    const { written } = await render(spec);
    for (const f of written) console.log(f);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

const isDirect =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (isDirect) {
  main().then((code) => process.exit(code));
}
