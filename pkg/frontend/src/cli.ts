#!/usr/bin/env node
/**
 * make_figures <bundle_dir>... --kind <kind> --out <dir> [--times t1,t2,...]
 *
 * Kinds:
 *   joint-heatmap     one figure per bundle: a heatmap per snapshot time
 *   marginals-panel   one figure per bundle: contact + opinion marginals
 *   means-comparison  one figure comparing all bundles' mean trajectories
 *
 * Exit codes: 0 success, 1 plotting error (missing snapshot, bad bundle),
 * 2 usage error.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { Bundle, readBundle } from "./bundle.js";
import { jointHeatmapFigure, marginalsPanelFigure, meansComparisonFigure } from "./figures.js";

const KINDS = ["joint-heatmap", "marginals-panel", "means-comparison"] as const;
type Kind = (typeof KINDS)[number];

export interface CliOptions {
  bundleDirs: string[];
  kind: Kind;
  out: string;
  times?: number[];
}

export function parseArgs(argv: string[]): CliOptions {
  const bundleDirs: string[] = [];
  let kind: string | undefined;
  let out: string | undefined;
  let times: number[] | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--kind" || arg === "--out" || arg === "--times") {
      const value = argv[++i];
      if (value === undefined) {
        throw new UsageError(`${arg} requires a value`);
      }
      if (arg === "--kind") kind = value;
      else if (arg === "--out") out = value;
      else {
        times = value.split(",").map(Number);
        if (times.some((t) => !Number.isFinite(t))) {
          throw new UsageError(`--times expects comma-separated numbers, got "${value}"`);
        }
      }
    } else if (arg.startsWith("--")) {
      throw new UsageError(`unknown option ${arg}`);
    } else {
      bundleDirs.push(arg);
    }
  }
  if (bundleDirs.length === 0) {
    throw new UsageError("at least one bundle directory is required");
  }
  if (!kind || !(KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`--kind must be one of: ${KINDS.join(", ")}`);
  }
  if (!out) {
    throw new UsageError("--out is required");
  }
  return { bundleDirs, kind: kind as Kind, out, times };
}

export class UsageError extends Error {}

export function makeFigures(opts: CliOptions): string[] {
  const bundles: Bundle[] = opts.bundleDirs.map(readBundle);
  fs.mkdirSync(opts.out, { recursive: true });
  const written: string[] = [];
  const write = (name: string, svg: string) => {
    const file = path.join(opts.out, name);
    fs.writeFileSync(file, svg);
    written.push(file);
  };
  if (opts.kind === "means-comparison") {
    write("means_comparison.svg", meansComparisonFigure(bundles));
  } else {
    for (const bundle of bundles) {
      const svg =
        opts.kind === "joint-heatmap"
          ? jointHeatmapFigure(bundle, opts.times)
          : marginalsPanelFigure(bundle, opts.times);
      write(`${opts.kind.replace("-", "_")}_${bundle.name}.svg`, svg);
    }
  }
  return written;
}

export function main(argv: string[]): number {
  let opts: CliOptions;
  try {
    opts = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      console.error("usage: make_figures <bundle_dir>... --kind <kind> --out <dir> [--times t1,t2,...]");
      return 2;
    }
    throw err;
  }
  try {
    for (const file of makeFigures(opts)) {
      console.log(`wrote ${file}`);
    }
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && /cli\.(js|ts)$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
