/** Plain-text (P2) PGM parser for the rendered set masks. */
export interface Pgm {
  width: number;
  height: number;
  maxval: number;
  /** pixels[row][col], row 0 at the top of the image */
  pixels: number[][];
}

export function parsePgm(text: string): Pgm {
  const tokens: string[] = [];
  for (const line of text.split(/\r?\n/)) {
    const body = line.split("#", 1)[0].trim();
    if (body.length > 0) {
      tokens.push(...body.split(/\s+/));
    }
  }
  if (tokens[0] !== "P2") {
    throw new Error(`expected magic P2, got ${tokens[0]}`);
  }
  const [width, height, maxval] = tokens.slice(1, 4).map(Number);
  if (!Number.isInteger(width) || !Number.isInteger(height) || width < 1 || height < 1) {
    throw new Error("bad PGM dimensions");
  }
  const flat = tokens.slice(4).map(Number);
  if (flat.length !== width * height) {
    throw new Error(`expected ${width * height} pixels, got ${flat.length}`);
  }
  const pixels: number[][] = [];
  for (let r = 0; r < height; r++) {
    const row = flat.slice(r * width, (r + 1) * width);
    for (const v of row) {
      if (!Number.isInteger(v) || v < 0 || v > maxval) {
        throw new Error(`pixel ${v} outside [0, ${maxval}]`);
      }
    }
    pixels.push(row);
  }
  return { width, height, maxval, pixels };
}
