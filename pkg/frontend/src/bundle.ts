/**
 * Readers for simulation output bundles.
 *
 * A bundle directory contains:
 *   manifest.json          scenario TOML + seed + version + wall time
 *   timeseries.csv         global and per-group means, one row per snapshot
 *   bins.json              shared histogram bin edges
 *   marginals_t<t>.csv     per scheduled snapshot: v-bins, c-bins, masses
 *   joint_t<t>.ndjson      per scheduled snapshot: one record per nonzero bin
 *   diagnostics.json       boundary clamp / noise resample counters
 */

import * as fs from "node:fs";
import * as path from "node:path";

export interface Manifest {
  scenario_toml: string;
  seed: number;
  version: string;
  wall_time_s: number;
  threads: number;
}

export interface Bins {
  /** 65 edges for the 64 uniform opinion bins on [-1, 1]. */
  v_edges: number[];
  /** 65 edges for the 64 geometric contact bins; under/overflow are extra. */
  c_edges: number[];
}

export interface Timeseries {
  t: number[];
  /** Column name (from the CSV header, minus "t") -> values per row. */
  columns: Map<string, number[]>;
  /** Group names recovered from the m_c_<group> header columns. */
  groupNames: string[];
}

export interface MarginalBin {
  index: number;
  lo: number;
  hi: number; // Infinity for the contact overflow bin
  mass: number;
}

export interface Marginals {
  v: MarginalBin[];
  c: MarginalBin[];
}

export interface JointRecord {
  iv: number;
  ic: number;
  mass: number;
}

export interface Snapshot {
  t: number;
  marginals: Marginals;
  joint: JointRecord[];
}

export interface Bundle {
  dir: string;
  name: string;
  manifest: Manifest;
  bins: Bins;
  timeseries: Timeseries;
  /** Scheduled snapshots with histogram files, sorted by time. */
  snapshots: Snapshot[];
}

function parseCsv(text: string): { header: string[]; rows: string[][] } {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  const [head, ...rest] = lines;
  return { header: head.split(","), rows: rest.map((line) => line.split(",")) };
}

export function parseTimeseries(text: string): Timeseries {
  const { header, rows } = parseCsv(text);
  if (header[0] !== "t") {
    throw new Error(`timeseries CSV must start with a "t" column, got "${header[0]}"`);
  }
  const columns = new Map<string, number[]>();
  for (const name of header.slice(1)) {
    columns.set(name, []);
  }
  const t: number[] = [];
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new Error(`timeseries row has ${row.length} fields, expected ${header.length}`);
    }
    t.push(Number(row[0]));
    header.slice(1).forEach((name, j) => columns.get(name)!.push(Number(row[j + 1])));
  }
  const groupNames = header
    .filter((name) => name.startsWith("m_c_") && name !== "m_c_global")
    .map((name) => name.slice("m_c_".length));
  return { t, columns, groupNames };
}

export function parseMarginals(text: string): Marginals {
  const { header, rows } = parseCsv(text);
  const expected = ["var", "bin", "lo", "hi", "mass"];
  if (header.join(",") !== expected.join(",")) {
    throw new Error(`unexpected marginals header: ${header.join(",")}`);
  }
  const out: Marginals = { v: [], c: [] };
  for (const [variable, index, lo, hi, mass] of rows) {
    const bin: MarginalBin = {
      index: Number(index),
      lo: Number(lo),
      hi: hi === "inf" ? Infinity : Number(hi),
      mass: Number(mass),
    };
    if (variable === "v") {
      out.v.push(bin);
    } else if (variable === "c") {
      out.c.push(bin);
    } else {
      throw new Error(`unknown marginal variable "${variable}"`);
    }
  }
  return out;
}

export function parseJoint(text: string): JointRecord[] {
  return text
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => {
      const rec = JSON.parse(line) as JointRecord;
      if (!Number.isInteger(rec.iv) || !Number.isInteger(rec.ic) || !(rec.mass > 0)) {
        throw new Error(`malformed joint record: ${line}`);
      }
      return rec;
    });
}

const MARGINALS_RE = /^marginals_t(.+)\.csv$/;

export function readBundle(dir: string): Bundle {
  const read = (name: string) => fs.readFileSync(path.join(dir, name), "utf8");
  const manifest = JSON.parse(read("manifest.json")) as Manifest;
  const bins = JSON.parse(read("bins.json")) as Bins;
  const timeseries = parseTimeseries(read("timeseries.csv"));

  const snapshots: Snapshot[] = [];
  for (const name of fs.readdirSync(dir)) {
    const m = MARGINALS_RE.exec(name);
    if (!m) continue;
    const label = m[1];
    snapshots.push({
      t: Number(label),
      marginals: parseMarginals(read(name)),
      joint: parseJoint(read(`joint_t${label}.ndjson`)),
    });
  }
  snapshots.sort((a, b) => a.t - b.t);
  return { dir, name: path.basename(path.resolve(dir)), manifest, bins, timeseries, snapshots };
}

/** Snapshot whose time is nearest to `t`; exact match unless `nearest`. */
export function snapshotAt(bundle: Bundle, t: number, nearest = false): Snapshot {
  if (bundle.snapshots.length === 0) {
    throw new Error(`bundle ${bundle.name} has no snapshot files`);
  }
  let best = bundle.snapshots[0];
  for (const snap of bundle.snapshots) {
    if (Math.abs(snap.t - t) < Math.abs(best.t - t)) best = snap;
  }
  if (!nearest && best.t !== t) {
    throw new Error(
      `bundle ${bundle.name} has no snapshot at t=${t} ` +
        `(available: ${bundle.snapshots.map((s) => s.t).join(", ")})`,
    );
  }
  return best;
}
