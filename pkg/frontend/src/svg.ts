/** Minimal SVG string builders; no DOM, output is a standalone file. */

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function tag(name: string, attrs: Record<string, string | number>, body = ""): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join(" ");
  return body === "" ? `<${name} ${parts}/>` : `<${name} ${parts}>${body}</${name}>`;
}

export function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toPrecision(6);
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    tag("rect", { x: 0, y: 0, width, height, fill: "white" }),
    ...body,
    "</svg>",
  ].join("\n");
}

export interface Frame {
  left: number;
  top: number;
  width: number;
  height: number;
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export function toPx(frame: Frame, x: number, y: number): [number, number] {
  const px = frame.left + ((x - frame.x0) / (frame.x1 - frame.x0)) * frame.width;
  const py = frame.top + frame.height - ((y - frame.y0) / (frame.y1 - frame.y0)) * frame.height;
  return [px, py];
}

/** Axis box with ticks at given data positions, labels formatted by cb. */
export function axes(
  frame: Frame,
  xticks: number[],
  yticks: number[],
  label: (v: number) => string,
): string[] {
  const out: string[] = [
    tag("rect", {
      x: frame.left,
      y: frame.top,
      width: frame.width,
      height: frame.height,
      fill: "none",
      stroke: "black",
      "stroke-width": 1,
    }),
  ];
  for (const v of xticks) {
    const [px] = toPx(frame, v, frame.y0);
    const base = frame.top + frame.height;
    out.push(tag("line", { x1: px, y1: base, x2: px, y2: base + 4, stroke: "black" }));
    out.push(
      tag(
        "text",
        { x: px, y: base + 16, "font-size": 10, "text-anchor": "middle", "font-family": "monospace" },
        esc(label(v)),
      ),
    );
  }
  for (const v of yticks) {
    const [, py] = toPx(frame, frame.x0, v);
    out.push(tag("line", { x1: frame.left - 4, y1: py, x2: frame.left, y2: py, stroke: "black" }));
    out.push(
      tag(
        "text",
        { x: frame.left - 6, y: py + 3, "font-size": 10, "text-anchor": "end", "font-family": "monospace" },
        esc(label(v)),
      ),
    );
  }
  return out;
}
