import { ScanTable, column } from "./csv.js";
import { fitPowerLaw, PowerFit } from "./fit.js";
import { Pgm } from "./pgm.js";
import * as svg from "./svg.js";

export interface DecayOptions {
  /** column holding the small parameter; "N" columns are converted via h = 1/(2 pi N) */
  xColumn: string;
  yColumn: string;
  title: string;
}

export interface DecayFigure {
  svg: string;
  fit: PowerFit;
}

const WIDTH = 480;
const HEIGHT = 360;
const FRAME = { left: 64, top: 40, width: WIDTH - 88, height: HEIGHT - 100 };

function sciLabel(v: number): string {
  const e = Math.floor(Math.log10(v));
  const m = v / 10 ** e;
  return Math.abs(m - 1) < 1e-9 ? `1e${e}` : `${m.toPrecision(2)}e${e}`;
}

/** Log-log decay plot of one scan column with its power-law fit annotated. */
export function decayFigure(table: ScanTable, opts: DecayOptions): DecayFigure {
  let xs = column(table, opts.xColumn);
  if (opts.xColumn === "N") {
    xs = xs.map((n) => 1 / (2 * Math.PI * n));
  }
  const ys = column(table, opts.yColumn);
  const pts = xs
    .map((x, i) => [x, ys[i]] as const)
    .filter(([x, y]) => x > 0 && y > 0 && Number.isFinite(y));
  if (pts.length < 2) {
    throw new Error(`fewer than two positive points in ${opts.yColumn}`);
  }
  const fit = fitPowerLaw(
    pts.map(([x]) => x),
    pts.map(([, y]) => y),
  );

  const lx = pts.map(([x]) => Math.log10(x));
  const ly = pts.map(([, y]) => Math.log10(y));
  const pad = 0.15;
  const frame: svg.Frame = {
    ...FRAME,
    x0: Math.min(...lx) - pad,
    x1: Math.max(...lx) + pad,
    y0: Math.min(...ly) - pad,
    y1: Math.max(...ly) + pad,
  };

  const body: string[] = [];
  const ticks = (lo: number, hi: number) => {
    const out: number[] = [];
    for (let e = Math.ceil(lo); e <= Math.floor(hi); e++) out.push(e);
    return out.length >= 2 ? out : [lo + pad, hi - pad];
  };
  body.push(
    ...svg.axes(frame, ticks(frame.x0, frame.x1), ticks(frame.y0, frame.y1), (v) =>
      sciLabel(10 ** v),
    ),
  );

  // fitted line drawn across the frame, under the markers
  const yAt = (logx: number) =>
    Math.log10(fit.prefactor) + fit.exponent * logx;
  const [fx0, fy0] = svg.toPx(frame, frame.x0 + pad / 2, yAt(frame.x0 + pad / 2));
  const [fx1, fy1] = svg.toPx(frame, frame.x1 - pad / 2, yAt(frame.x1 - pad / 2));
  body.push(
    svg.tag("line", { x1: fx0, y1: fy0, x2: fx1, y2: fy1, stroke: "#888", "stroke-dasharray": "4 3" }),
  );
  for (let i = 0; i < pts.length; i++) {
    const [cx, cy] = svg.toPx(frame, lx[i], ly[i]);
    body.push(svg.tag("circle", { cx, cy, r: 3.5, fill: "#1f4e8c" }));
  }

  body.push(
    svg.tag(
      "text",
      { x: WIDTH / 2, y: 22, "font-size": 13, "text-anchor": "middle", "font-family": "sans-serif" },
      svg.esc(opts.title),
    ),
  );
  const note = `fitted exponent ${fit.exponent.toFixed(3)} (r2 ${fit.r2.toFixed(3)}, ${fit.used} pts)`;
  body.push(
    svg.tag(
      "text",
      {
        x: FRAME.left + 8,
        y: FRAME.top + 16,
        "font-size": 11,
        "font-family": "monospace",
        fill: "#333",
      },
      svg.esc(note),
    ),
  );
  body.push(
    svg.tag(
      "text",
      { x: WIDTH / 2, y: HEIGHT - 10, "font-size": 11, "text-anchor": "middle", "font-family": "sans-serif" },
      svg.esc(`${opts.xColumn === "N" ? "h = 1/(2 pi N)" : opts.xColumn} (log)`),
    ),
  );
  return { svg: svg.document(WIDTH, HEIGHT, body), fit };
}

export interface MaskFigure {
  svg: string;
  filled: number;
  total: number;
}

/** One filled square per set pixel, momentum upward as in the PGM. */
export function maskFigure(pgm: Pgm, title: string): MaskFigure {
  const cell = Math.max(2, Math.floor(400 / Math.max(pgm.width, pgm.height)));
  const w = pgm.width * cell + 40;
  const h = pgm.height * cell + 64;
  const body: string[] = [];
  let filled = 0;
  for (let r = 0; r < pgm.height; r++) {
    for (let c = 0; c < pgm.width; c++) {
      if (pgm.pixels[r][c] > pgm.maxval / 2) {
        filled += 1;
        body.push(
          svg.tag("rect", {
            x: 20 + c * cell,
            y: 44 + r * cell,
            width: cell,
            height: cell,
            fill: "#1f4e8c",
          }),
        );
      }
    }
  }
  const total = pgm.width * pgm.height;
  body.push(
    svg.tag(
      "text",
      { x: w / 2, y: 20, "font-size": 13, "text-anchor": "middle", "font-family": "sans-serif" },
      svg.esc(title),
    ),
  );
  body.push(
    svg.tag(
      "text",
      { x: w / 2, y: 36, "font-size": 11, "text-anchor": "middle", "font-family": "monospace" },
      svg.esc(`${filled}/${total} cells filled (${((100 * filled) / total).toFixed(1)}%)`),
    ),
  );
  return { svg: svg.document(w, h, body), filled, total };
}
