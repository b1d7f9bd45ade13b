import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { parseScanCsv } from "./csv.js";
import { parsePgm } from "./pgm.js";
import { decayFigure, DecayOptions, maskFigure } from "./plots.js";

const KINDS: Record<string, Omit<DecayOptions, "title"> & { title: string }> = {
  fup: { xColumn: "h", yColumn: "norm", title: "restricted transform norm vs h" },
  key: { xColumn: "N", yColumn: "norm", title: "long-word operator norm vs h" },
  damping: { xColumn: "N", yColumn: "damped_norm", title: "damped power norm vs h" },
};

export function renderFile(kind: string, inputPath: string): string {
  if (kind === "mask") {
    const pgm = parsePgm(readFileSync(inputPath, "utf8"));
    return maskFigure(pgm, `word set mask (${pgm.width} x ${pgm.height})`).svg;
  }
  const spec = KINDS[kind];
  if (!spec) {
    throw new Error(`unknown kind "${kind}" (have: ${[...Object.keys(KINDS), "mask"].join(", ")})`);
  }
  const table = parseScanCsv(readFileSync(inputPath, "utf8"));
  return decayFigure(table, spec).svg;
}

export function main(argv: string[]): number {
  const { values, positionals } = parseArgs({
    args: argv,
    options: {
      input: { type: "string", short: "i" },
      output: { type: "string", short: "o" },
    },
    allowPositionals: true,
  });
  const kind = positionals[0];
  if (!kind || !values.input || !values.output) {
    process.stderr.write(
      "usage: plot <fup|key|damping|mask> --input <csv|pgm> --output <svg>\n",
    );
    return 2;
  }
  try {
    const out = renderFile(kind, values.input);
    writeFileSync(values.output, out);
  } catch (err) {
    process.stderr.write(`plot error: ${err instanceof Error ? err.message : err}\n`);
    return 1;
  }
  process.stdout.write(`${values.output}\n`);
  return 0;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
