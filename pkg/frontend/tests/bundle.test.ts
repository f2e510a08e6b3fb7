import * as path from "node:path";
import { describe, expect, it } from "vitest";

import { parseJoint, parseMarginals, parseTimeseries, readBundle, snapshotAt } from "../src/bundle.js";

const FIXTURES = path.join(__dirname, "fixtures");
const bundleA = () => readBundle(path.join(FIXTURES, "test1_a"));

describe("readBundle", () => {
  it("loads manifest, bins, timeseries, and snapshots", () => {
    const b = bundleA();
    expect(b.name).toBe("test1_a");
    expect(b.manifest.seed).toBeTypeOf("number");
    expect(b.manifest.scenario_toml).toContain("[sim]");
    expect(b.bins.v_edges).toHaveLength(65);
    expect(b.bins.c_edges).toHaveLength(65);
    expect(b.snapshots.map((s) => s.t)).toEqual([1, 5, 50]);
  });

  it("timeseries starts at t=0 and has leader/mass group columns", () => {
    const b = bundleA();
    expect(b.timeseries.t[0]).toBe(0);
    expect(b.timeseries.groupNames).toEqual(["leaders", "mass"]);
    for (const g of b.timeseries.groupNames) {
      expect(b.timeseries.columns.has(`m_c_${g}`)).toBe(true);
      expect(b.timeseries.columns.has(`m_v_${g}`)).toBe(true);
    }
  });

  it("marginal masses sum to one", () => {
    const b = bundleA();
    for (const snap of b.snapshots) {
      const vSum = snap.marginals.v.reduce((a, bin) => a + bin.mass, 0);
      const cSum = snap.marginals.c.reduce((a, bin) => a + bin.mass, 0);
      expect(vSum).toBeCloseTo(1, 9);
      expect(cSum).toBeCloseTo(1, 9);
    }
  });

  it("marginal bin layout matches the documented format", () => {
    const b = bundleA();
    const m = b.snapshots[0].marginals;
    expect(m.v).toHaveLength(64);
    expect(m.c).toHaveLength(66); // 64 interior + underflow + overflow
    expect(m.c[0].lo).toBe(0);
    expect(m.c[65].hi).toBe(Infinity);
    expect(m.v[0].lo).toBe(-1);
    expect(m.v[63].hi).toBe(1);
  });

  it("joint records reference valid bins and sum to one", () => {
    const b = bundleA();
    for (const snap of b.snapshots) {
      let total = 0;
      for (const rec of snap.joint) {
        expect(rec.iv).toBeGreaterThanOrEqual(0);
        expect(rec.iv).toBeLessThan(64);
        expect(rec.ic).toBeGreaterThanOrEqual(0);
        expect(rec.ic).toBeLessThan(66);
        expect(rec.mass).toBeGreaterThan(0);
        total += rec.mass;
      }
      expect(total).toBeCloseTo(1, 9);
    }
  });
});

describe("snapshotAt", () => {
  it("finds exact times and rejects missing ones", () => {
    const b = bundleA();
    expect(snapshotAt(b, 5).t).toBe(5);
    expect(() => snapshotAt(b, 2)).toThrow(/no snapshot at t=2/);
  });

  it("resolves the nearest snapshot when asked", () => {
    const b = bundleA();
    expect(snapshotAt(b, 4.2, true).t).toBe(5);
    expect(snapshotAt(b, 100, true).t).toBe(50);
  });
});

describe("parsers", () => {
  it("parseTimeseries rejects a malformed header", () => {
    expect(() => parseTimeseries("x,y\n1,2\n")).toThrow(/"t" column/);
  });

  it("parseTimeseries rejects ragged rows", () => {
    expect(() => parseTimeseries("t,m_c_global\n1\n")).toThrow(/expected 2/);
  });

  it("parseMarginals handles the inf overflow bound", () => {
    const text = "var,bin,lo,hi,mass\nv,0,-1,1,1\nc,0,0,1,0.5\nc,1,1,inf,0.5\n";
    const m = parseMarginals(text);
    expect(m.c[1].hi).toBe(Infinity);
    expect(m.v[0].mass).toBe(1);
  });

  it("parseJoint rejects malformed records", () => {
    expect(parseJoint("")).toEqual([]);
    expect(() => parseJoint('{"iv":0.5,"ic":1,"mass":0.1}')).toThrow(/malformed/);
    expect(() => parseJoint('{"iv":0,"ic":1,"mass":0}')).toThrow(/malformed/);
  });
});
