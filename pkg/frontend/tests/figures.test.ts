import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import { readBundle } from "../src/bundle.js";
import { jointHeatmapFigure, marginalsPanelFigure, meansComparisonFigure } from "../src/figures.js";
import { main, parseArgs } from "../src/cli.js";

const FIXTURES = path.join(__dirname, "fixtures");
const SCENARIOS = ["test1_a", "test1_b", "test1_c", "test1_d"];
const load = (name: string) => readBundle(path.join(FIXTURES, name));

const count = (svg: string, re: RegExp) => (svg.match(new RegExp(re, "g")) ?? []).length;

describe("jointHeatmapFigure", () => {
  it("renders one panel per snapshot with a shared color scale", () => {
    const svg = jointHeatmapFigure(load("test1_a"));
    expect(count(svg, /class="heatmap-panel"/)).toBe(3);
    expect(count(svg, /class="color-bar"/)).toBe(1);
    expect(svg).toContain('data-t="1"');
    expect(svg).toContain('data-t="5"');
    expect(svg).toContain('data-t="50"');
    // the brightest color appears exactly where the global maximum lives
    expect(count(svg, /fill="rgb\(253,231,37\)"/)).toBeGreaterThanOrEqual(1);
  });

  it("uses a log-scale contact axis (decade ticks only)", () => {
    const svg = jointHeatmapFigure(load("test1_a"), [1]);
    const labels = [...svg.matchAll(/"end"[^>]*>([-\d.e]+)<\/text>/g)].map((m) => Number(m[1]));
    expect(labels.length).toBeGreaterThanOrEqual(3);
    for (const v of labels) {
      const log = Math.log10(v);
      expect(Math.abs(log - Math.round(log))).toBeLessThan(1e-9);
    }
  });

  it("respects an explicit time selection and rejects missing times", () => {
    const b = load("test1_b");
    const svg = jointHeatmapFigure(b, [5, 50]);
    expect(count(svg, /class="heatmap-panel"/)).toBe(2);
    expect(() => jointHeatmapFigure(b, [3])).toThrow(/no snapshot at t=3/);
  });

  it("is deterministic for identical inputs", () => {
    expect(jointHeatmapFigure(load("test1_c"))).toBe(jointHeatmapFigure(load("test1_c")));
  });
});

describe("marginalsPanelFigure", () => {
  it("renders two panels with one curve per time in each", () => {
    const svg = marginalsPanelFigure(load("test1_a"));
    expect(count(svg, /class="panel-frame"/)).toBe(2);
    expect(count(svg, /class="curve"/)).toBe(6); // 3 times x 2 panels
    expect(count(svg, /class="legend"/)).toBe(1);
    expect(svg).toContain("t = 50");
  });
});

describe("meansComparisonFigure", () => {
  it("draws one curve per scenario in both panels with a legend", () => {
    const svg = meansComparisonFigure(SCENARIOS.map(load));
    expect(count(svg, /class="panel-frame"/)).toBe(2);
    expect(count(svg, /class="curve"/)).toBe(8); // 4 scenarios x 2 panels
    for (const name of SCENARIOS) {
      expect(count(svg, `data-scenario="${name}"`)).toBe(2);
      expect(svg).toContain(`>${name}</text>`);
    }
    // distinct scenarios get distinct stroke colors
    const strokes = new Set([...svg.matchAll(/stroke="(#[0-9a-f]{6})"/g)].map((m) => m[1]));
    expect(strokes.size).toBeGreaterThanOrEqual(4);
  });

  it("labels the panels with contacts on the left and opinion on the right", () => {
    const svg = meansComparisonFigure([load("test1_a")]);
    expect(svg).toContain("mean contacts");
    expect(svg).toContain("mean opinion");
    const xContacts = svg.indexOf("m_c(t)");
    const xOpinion = svg.indexOf("m_v(t)");
    expect(xContacts).toBeGreaterThan(-1);
    expect(xOpinion).toBeGreaterThan(xContacts);
  });

  it("handles a single bundle", () => {
    const svg = meansComparisonFigure([load("test1_d")]);
    expect(count(svg, /class="curve"/)).toBe(2);
  });
});

describe("cli", () => {
  const tmpOut = () => fs.mkdtempSync(path.join(os.tmpdir(), "figs-"));

  it("parses positional bundles and options", () => {
    const opts = parseArgs(["a", "b", "--kind", "means-comparison", "--out", "x", "--times", "1,5"]);
    expect(opts.bundleDirs).toEqual(["a", "b"]);
    expect(opts.times).toEqual([1, 5]);
  });

  it("rejects bad usage with exit code 2", () => {
    expect(main(["--kind", "means-comparison", "--out", "x"])).toBe(2);
    expect(main([FIXTURES + "/test1_a", "--kind", "nope", "--out", "x"])).toBe(2);
    expect(main([FIXTURES + "/test1_a", "--kind", "joint-heatmap"])).toBe(2);
  });

  it("returns 1 on a missing bundle or snapshot", () => {
    const out = tmpOut();
    expect(main(["/no/such/bundle", "--kind", "joint-heatmap", "--out", out])).toBe(1);
    expect(
      main([path.join(FIXTURES, "test1_a"), "--kind", "joint-heatmap", "--out", out, "--times", "7"]),
    ).toBe(1);
  });

  it("writes one heatmap figure per bundle", () => {
    const out = tmpOut();
    const dirs = SCENARIOS.map((s) => path.join(FIXTURES, s));
    expect(main([...dirs, "--kind", "joint-heatmap", "--out", out])).toBe(0);
    const files = fs.readdirSync(out).sort();
    expect(files).toEqual(SCENARIOS.map((s) => `joint_heatmap_${s}.svg`));
  });

  it("writes a single means-comparison figure for many bundles", () => {
    const out = tmpOut();
    const dirs = SCENARIOS.map((s) => path.join(FIXTURES, s));
    expect(main([...dirs, "--kind", "means-comparison", "--out", out])).toBe(0);
    expect(fs.readdirSync(out)).toEqual(["means_comparison.svg"]);
  });
});
