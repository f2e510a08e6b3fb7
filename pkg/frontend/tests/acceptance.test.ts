/**
 * Figure-regeneration acceptance check: from the four Test 1 scenario
 * bundles, produce (i) a two-panel mean-trajectory comparison with four
 * labeled curves per panel and (ii) per-scenario joint-density figures with
 * three time panels sharing one color scale and a log-scale contact axis.
 */

import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const FIXTURES = path.join(__dirname, "fixtures");
const SCENARIOS = ["test1_a", "test1_b", "test1_c", "test1_d"];

let passed = true;
const check = (cond: boolean) => {
  passed = passed && cond;
  expect(cond).toBe(true);
};

describe("criterion 9: figure regeneration from Test 1 bundles", () => {
  const out = fs.mkdtempSync(path.join(os.tmpdir(), "accept9-"));
  const dirs = SCENARIOS.map((s) => path.join(FIXTURES, s));

  it("means comparison: two panels, four curves each, legend by scenario", () => {
    check(main([...dirs, "--kind", "means-comparison", "--out", out]) === 0);
    const svg = fs.readFileSync(path.join(out, "means_comparison.svg"), "utf8");
    check((svg.match(/class="panel-frame"/g) ?? []).length === 2);
    check((svg.match(/class="curve"/g) ?? []).length === 8);
    check((svg.match(/class="legend-label"/g) ?? []).length === 4);
    for (const s of SCENARIOS) check(svg.includes(`>${s}</text>`));
  });

  it("joint heatmaps: three snapshot panels, shared color scale, log c axis", () => {
    check(main([...dirs, "--kind", "joint-heatmap", "--out", out]) === 0);
    for (const s of SCENARIOS) {
      const svg = fs.readFileSync(path.join(out, `joint_heatmap_${s}.svg`), "utf8");
      check((svg.match(/class="heatmap-panel"/g) ?? []).length === 3);
      check((svg.match(/class="color-bar"/g) ?? []).length === 1);
      const yTickLabels = [...svg.matchAll(/"end"[^>]*>([-\d.e]+)<\/text>/g)].map((m) => Number(m[1]));
      check(yTickLabels.length >= 3);
      check(yTickLabels.every((v) => Math.abs(Math.log10(v) - Math.round(Math.log10(v))) < 1e-9));
    }
  });

  afterAll(() => {
    console.log(`[${passed ? "PASS" : "FAIL"}] criterion 9: figure regeneration from Test 1 bundles`);
  });
});
