import Papa from "papaparse";

/** Scan table: "#" provenance lines, a header row, numeric data rows. */
export interface ScanTable {
  comments: string[];
  header: string[];
  rows: number[][];
}

export function parseScanCsv(text: string): ScanTable {
  const comments = text
    .split(/\r?\n/)
    .filter((line) => line.startsWith("#"))
    .map((line) => line.replace(/^#\s?/, ""));
  const parsed = Papa.parse<string[]>(text.trim(), {
    comments: "#",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`csv parse failed: ${parsed.errors[0].message}`);
  }
  const [header, ...body] = parsed.data;
  if (!header || header.length === 0) {
    throw new Error("csv has no header row");
  }
  const rows = body.map((cells, i) => {
    if (cells.length !== header.length) {
      throw new Error(`row ${i + 1} has ${cells.length} cells, expected ${header.length}`);
    }
    // numeric table: repr-formatted floats, integers, or "nan"
    return cells.map(Number);
  });
  return { comments, header, rows };
}

export function column(table: ScanTable, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`no column "${name}" (have: ${table.header.join(", ")})`);
  }
  return table.rows.map((row) => row[idx]);
}
