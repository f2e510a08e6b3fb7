/**
 * Figure builders over output bundles.
 *
 * Three kinds:
 *   joint-heatmap     one (v, c)-plane density heatmap per snapshot time,
 *                     shared color scale within the figure, log-scale c axis
 *   marginals-panel   contact and opinion marginal histograms, one curve
 *                     per snapshot time
 *   means-comparison  two panels (mean contacts left, mean opinion right),
 *                     one curve per scenario bundle with a legend
 */

import { Bundle, Snapshot, snapshotAt } from "./bundle.js";
import {
  CURVE_COLORS,
  PanelFrame,
  Scale,
  esc,
  fmtNum,
  linearScale,
  logScale,
  renderAxes,
  sequentialColor,
  svgDocument,
  tag,
} from "./svg.js";

const PANEL_W = 260;
const PANEL_H = 220;
const MARGIN = { left: 64, right: 28, top: 40, bottom: 52 };
const GAP = 40;

function frames(count: number): { frames: PanelFrame[]; width: number; height: number } {
  const out: PanelFrame[] = [];
  for (let i = 0; i < count; i++) {
    out.push({
      x: MARGIN.left + i * (PANEL_W + GAP),
      y: MARGIN.top,
      width: PANEL_W,
      height: PANEL_H,
    });
  }
  const width = MARGIN.left + count * PANEL_W + (count - 1) * GAP + MARGIN.right;
  return { frames: out, width, height: MARGIN.top + PANEL_H + MARGIN.bottom };
}

function selectSnapshots(bundle: Bundle, times: number[] | undefined): Snapshot[] {
  if (times === undefined || times.length === 0) {
    return bundle.snapshots;
  }
  return times.map((t) => snapshotAt(bundle, t));
}

/** Interior contact-bin index range: drop the under/overflow bins, which have
 *  no finite extent on a log axis.  Their mass is reported in the caption
 *  line when nonzero so it cannot be silently lost. */
function interiorJoint(snap: Snapshot, nCInterior: number) {
  const inside = snap.joint.filter((r) => r.ic >= 1 && r.ic <= nCInterior);
  const outMass = snap.joint
    .filter((r) => r.ic < 1 || r.ic > nCInterior)
    .reduce((acc, r) => acc + r.mass, 0);
  return { inside, outMass };
}

export function jointHeatmapFigure(bundle: Bundle, times?: number[]): string {
  const snaps = selectSnapshots(bundle, times);
  if (snaps.length === 0) {
    throw new Error(`bundle ${bundle.name} has no snapshots to plot`);
  }
  const { v_edges, c_edges } = bundle.bins;
  const nC = c_edges.length - 1;
  const layout = frames(snaps.length);

  // One color scale for the whole figure.
  let maxMass = 0;
  for (const snap of snaps) {
    for (const rec of interiorJoint(snap, nC).inside) {
      maxMass = Math.max(maxMass, rec.mass);
    }
  }

  const parts: string[] = [];
  snaps.forEach((snap, i) => {
    const frame = layout.frames[i];
    const xScale = linearScale([v_edges[0], v_edges[v_edges.length - 1]], [frame.x, frame.x + frame.width]);
    const yScale = logScale([c_edges[0], c_edges[nC]], [frame.y + frame.height, frame.y]);
    const { inside, outMass } = interiorJoint(snap, nC);
    const cells: string[] = [];
    for (const rec of inside) {
      const x0 = xScale(v_edges[rec.iv]);
      const x1 = xScale(v_edges[rec.iv + 1]);
      const yTop = yScale(c_edges[rec.ic]); // ic is 1-based over interior bins
      const yBot = yScale(c_edges[rec.ic - 1]);
      cells.push(
        tag("rect", {
          class: "cell",
          x: x0,
          y: yTop,
          width: x1 - x0,
          height: yBot - yTop,
          fill: sequentialColor(maxMass > 0 ? rec.mass / maxMass : 0),
        }),
      );
    }
    parts.push(tag("g", { class: "heatmap-panel", "data-t": snap.t }, cells.join("\n")));
    parts.push(renderAxes(frame, xScale, yScale, "opinion v", i === 0 ? "contacts c" : "", `t = ${fmtNum(snap.t)}`));
    if (outMass > 0) {
      parts.push(
        tag(
          "text",
          { x: frame.x, y: frame.y + frame.height + 44, "font-size": 9, fill: "#666" },
          esc(`mass outside c range: ${outMass.toPrecision(3)}`),
        ),
      );
    }
  });
  parts.push(colorBar(layout.width - MARGIN.right + 6, MARGIN.top, maxMass));
  return svgDocument(layout.width + 40, layout.height, parts.join("\n"));
}

function colorBar(x: number, y: number, maxMass: number): string {
  const steps = 24;
  const h = PANEL_H / steps;
  const cells: string[] = [];
  for (let i = 0; i < steps; i++) {
    cells.push(
      tag("rect", {
        x,
        y: y + (steps - 1 - i) * h,
        width: 10,
        height: h + 0.5,
        fill: sequentialColor(i / (steps - 1)),
      }),
    );
  }
  cells.push(tag("text", { x: x + 14, y: y + 8, "font-size": 9 }, esc(maxMass.toPrecision(2))));
  cells.push(tag("text", { x: x + 14, y: y + PANEL_H, "font-size": 9 }, "0"));
  return tag("g", { class: "color-bar" }, cells.join("\n"));
}

export function marginalsPanelFigure(bundle: Bundle, times?: number[]): string {
  const snaps = selectSnapshots(bundle, times);
  if (snaps.length === 0) {
    throw new Error(`bundle ${bundle.name} has no snapshots to plot`);
  }
  const layout = frames(2);
  const nC = bundle.bins.c_edges.length - 1;

  const cMax = Math.max(...snaps.flatMap((s) => s.marginals.c.slice(1, 1 + nC).map((b) => b.mass)));
  const vMax = Math.max(...snaps.flatMap((s) => s.marginals.v.map((b) => b.mass)));

  const [cFrame, vFrame] = layout.frames;
  const cX = logScale([bundle.bins.c_edges[0], bundle.bins.c_edges[nC]], [cFrame.x, cFrame.x + cFrame.width]);
  const cY = linearScale([0, cMax * 1.05 || 1], [cFrame.y + cFrame.height, cFrame.y]);
  const vX = linearScale([-1, 1], [vFrame.x, vFrame.x + vFrame.width]);
  const vY = linearScale([0, vMax * 1.05 || 1], [vFrame.y + vFrame.height, vFrame.y]);

  const parts: string[] = [];
  snaps.forEach((snap, k) => {
    const color = CURVE_COLORS[k % CURVE_COLORS.length];
    const cPts = snap.marginals.c
      .slice(1, 1 + nC)
      .map((b) => `${cX(Math.sqrt(b.lo * b.hi)).toFixed(2)},${cY(b.mass).toFixed(2)}`)
      .join(" ");
    const vPts = snap.marginals.v
      .map((b) => `${vX((b.lo + b.hi) / 2).toFixed(2)},${vY(b.mass).toFixed(2)}`)
      .join(" ");
    parts.push(
      tag("polyline", { class: "curve", "data-t": snap.t, points: cPts, fill: "none", stroke: color, "stroke-width": 1.5 }),
    );
    parts.push(
      tag("polyline", { class: "curve", "data-t": snap.t, points: vPts, fill: "none", stroke: color, "stroke-width": 1.5 }),
    );
  });
  parts.push(renderAxes(cFrame, cX, cY, "contacts c", "mass", "contact marginal"));
  parts.push(renderAxes(vFrame, vX, vY, "opinion v", "", "opinion marginal"));
  parts.push(
    legend(
      layout.width - MARGIN.right - 120,
      MARGIN.top + 6,
      snaps.map((s, k) => ({ label: `t = ${fmtNum(s.t)}`, color: CURVE_COLORS[k % CURVE_COLORS.length] })),
    ),
  );
  return svgDocument(layout.width, layout.height, parts.join("\n"));
}

export function meansComparisonFigure(bundles: Bundle[]): string {
  if (bundles.length === 0) {
    throw new Error("means comparison needs at least one bundle");
  }
  const layout = frames(2);
  const [cFrame, vFrame] = layout.frames;

  const series = bundles.map((b) => ({
    name: b.name,
    t: b.timeseries.t,
    mc: b.timeseries.columns.get("m_c_global")!,
    mv: b.timeseries.columns.get("m_v_global")!,
  }));
  const tMax = Math.max(...series.map((s) => s.t[s.t.length - 1]), 1e-12);
  const mcAll = series.flatMap((s) => s.mc);
  const mcMax = Math.max(...mcAll) * 1.05 || 1;

  const tScaleC = linearScale([0, tMax], [cFrame.x, cFrame.x + cFrame.width]);
  const mcScale = linearScale([0, mcMax], [cFrame.y + cFrame.height, cFrame.y]);
  const tScaleV = linearScale([0, tMax], [vFrame.x, vFrame.x + vFrame.width]);
  const mvScale = linearScale([-1, 1], [vFrame.y + vFrame.height, vFrame.y]);

  const parts: string[] = [];
  series.forEach((s, k) => {
    const color = CURVE_COLORS[k % CURVE_COLORS.length];
    const single = s.t.length === 1;
    const draw = (xs: Scale, ys: Scale, values: number[]) => {
      const pts = s.t.map((t, i) => `${xs(t).toFixed(2)},${ys(values[i]).toFixed(2)}`);
      if (single) {
        const [cx, cy] = pts[0].split(",");
        return tag("circle", { class: "curve", "data-scenario": s.name, cx: Number(cx), cy: Number(cy), r: 3, fill: color });
      }
      return tag("polyline", {
        class: "curve",
        "data-scenario": s.name,
        points: pts.join(" "),
        fill: "none",
        stroke: color,
        "stroke-width": 1.5,
      });
    };
    parts.push(draw(tScaleC, mcScale, s.mc));
    parts.push(draw(tScaleV, mvScale, s.mv));
  });
  parts.push(renderAxes(cFrame, tScaleC, mcScale, "t", "mean contacts", "m_c(t)"));
  parts.push(renderAxes(vFrame, tScaleV, mvScale, "t", "mean opinion", "m_v(t)"));
  parts.push(
    legend(
      vFrame.x + vFrame.width - 110,
      MARGIN.top + 6,
      series.map((s, k) => ({ label: s.name, color: CURVE_COLORS[k % CURVE_COLORS.length] })),
    ),
  );
  return svgDocument(layout.width, layout.height, parts.join("\n"));
}

function legend(x: number, y: number, entries: { label: string; color: string }[]): string {
  const rows = entries.map((e, i) => {
    const yy = y + i * 14;
    return (
      tag("line", { x1: x, y1: yy, x2: x + 18, y2: yy, stroke: e.color, "stroke-width": 2 }) +
      tag("text", { class: "legend-label", x: x + 23, y: yy + 3, "font-size": 10 }, esc(e.label))
    );
  });
  return tag("g", { class: "legend" }, rows.join("\n"));
}
