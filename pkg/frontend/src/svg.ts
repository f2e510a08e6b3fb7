/** Minimal SVG figure primitives: scales, axes, color map, element builders. */

export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
  ticks(count?: number): number[];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const f = ((x: number) => r0 + ((x - d0) / (d1 - d0)) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  f.ticks = (count = 5) => {
    const span = niceStep((d1 - d0) / count);
    const out: number[] = [];
    for (let v = Math.ceil(d0 / span) * span; v <= d1 + 1e-12 * Math.abs(span); v += span) {
      out.push(Math.abs(v) < 1e-12 * Math.abs(span) ? 0 : v);
    }
    return out;
  };
  return f;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale domain must be positive, got [${d0}, ${d1}]`);
  }
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const f = ((x: number) => r0 + ((Math.log10(x) - l0) / (l1 - l0)) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  f.ticks = () => {
    const out: number[] = [];
    for (let e = Math.ceil(l0 - 1e-9); e <= l1 + 1e-9; e += 1) {
      out.push(10 ** e);
    }
    return out;
  };
  return f;
}

function niceStep(raw: number): number {
  const mag = 10 ** Math.floor(Math.log10(Math.abs(raw)));
  const norm = raw / mag;
  if (norm <= 1) return mag;
  if (norm <= 2) return 2 * mag;
  if (norm <= 5) return 5 * mag;
  return 10 * mag;
}

/** Viridis-like sequential color map; u in [0, 1]. */
export function sequentialColor(u: number): string {
  const anchors: [number, number, number][] = [
    [68, 1, 84],
    [59, 82, 139],
    [33, 145, 140],
    [94, 201, 98],
    [253, 231, 37],
  ];
  const x = Math.min(1, Math.max(0, u)) * (anchors.length - 1);
  const i = Math.min(anchors.length - 2, Math.floor(x));
  const w = x - i;
  const mix = anchors[i].map((a, k) => Math.round(a + w * (anchors[i + 1][k] - a)));
  return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
}

/** Categorical palette for per-scenario curves. */
export const CURVE_COLORS = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function fmtNum(x: number): string {
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax >= 1e4 || ax < 1e-3) return x.toExponential(0).replace("e+", "e");
  return String(Number(x.toPrecision(6)));
}

export function tag(name: string, attrs: Record<string, string | number>, body = ""): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmtCoord(v) : v}"`)
    .join("");
  return body === "" && name !== "text" ? `<${name}${a}/>` : `<${name}${a}>${body}</${name}>`;
}

function fmtCoord(x: number): string {
  return String(Math.round(x * 100) / 100);
}

export interface PanelFrame {
  x: number;
  y: number;
  width: number;
  height: number;
}

/** Axis lines, ticks, and labels for one panel; returns SVG fragment. */
export function renderAxes(
  frame: PanelFrame,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
  title = "",
): string {
  const parts: string[] = [];
  const x1 = frame.x + frame.width;
  const y1 = frame.y + frame.height;
  parts.push(
    tag("rect", {
      class: "panel-frame",
      x: frame.x,
      y: frame.y,
      width: frame.width,
      height: frame.height,
      fill: "none",
      stroke: "#333",
    }),
  );
  for (const t of xScale.ticks()) {
    const px = xScale(t);
    parts.push(tag("line", { class: "x-tick", x1: px, y1, x2: px, y2: y1 + 4, stroke: "#333" }));
    parts.push(
      tag(
        "text",
        { x: px, y: y1 + 16, "text-anchor": "middle", "font-size": 10 },
        esc(fmtNum(t)),
      ),
    );
  }
  for (const t of yScale.ticks()) {
    const py = yScale(t);
    parts.push(tag("line", { class: "y-tick", x1: frame.x - 4, y1: py, x2: frame.x, y2: py, stroke: "#333" }));
    parts.push(
      tag(
        "text",
        { x: frame.x - 6, y: py + 3, "text-anchor": "end", "font-size": 10 },
        esc(fmtNum(t)),
      ),
    );
  }
  parts.push(
    tag(
      "text",
      { class: "x-label", x: frame.x + frame.width / 2, y: y1 + 32, "text-anchor": "middle", "font-size": 11 },
      esc(xLabel),
    ),
  );
  parts.push(
    tag(
      "text",
      {
        class: "y-label",
        x: frame.x - 38,
        y: frame.y + frame.height / 2,
        "text-anchor": "middle",
        "font-size": 11,
        transform: `rotate(-90 ${frame.x - 38} ${frame.y + frame.height / 2})`,
      },
      esc(yLabel),
    ),
  );
  if (title) {
    parts.push(
      tag(
        "text",
        { class: "panel-title", x: frame.x + frame.width / 2, y: frame.y - 8, "text-anchor": "middle", "font-size": 12 },
        esc(title),
      ),
    );
  }
  return parts.join("\n");
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    body +
    "\n</svg>\n"
  );
}
