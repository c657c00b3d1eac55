// A1-notation coordinates. Columns and rows are 1-based; a cell key is the
// canonical "A1" string used across the UI state.

export interface Cell {
  col: number;
  row: number;
}

export interface RangeBox {
  c1: number;
  r1: number;
  c2: number;
  r2: number;
}

export function colLetters(col: number): string {
  let out = "";
  while (col > 0) {
    const rem = (col - 1) % 26;
    out = String.fromCharCode(65 + rem) + out;
    col = Math.floor((col - 1) / 26);
  }
  return out;
}

export function lettersToCol(s: string): number {
  let col = 0;
  for (const ch of s) {
    col = col * 26 + (ch.charCodeAt(0) - 64);
  }
  return col;
}

const CELL_RE = /^\$?([A-Z]+)\$?([0-9]+)$/;

export function parseCell(text: string): Cell {
  const m = CELL_RE.exec(text.trim().toUpperCase());
  if (!m) throw new Error(`not a cell reference: ${text}`);
  return { col: lettersToCol(m[1]!), row: parseInt(m[2]!, 10) };
}

export function cellKey(c: Cell): string {
  return `${colLetters(c.col)}${c.row}`;
}

export function parseRange(text: string): RangeBox {
  const parts = text.split(":");
  if (parts.length > 2) throw new Error(`not a range: ${text}`);
  const a = parseCell(parts[0]!);
  const b = parts.length === 2 ? parseCell(parts[1]!) : a;
  return {
    c1: Math.min(a.col, b.col),
    r1: Math.min(a.row, b.row),
    c2: Math.max(a.col, b.col),
    r2: Math.max(a.row, b.row),
  };
}

export function printRange(box: RangeBox): string {
  const head = cellKey({ col: box.c1, row: box.r1 });
  if (box.c1 === box.c2 && box.r1 === box.r2) return head;
  return `${head}:${cellKey({ col: box.c2, row: box.r2 })}`;
}

/** Every cell key covered by a list of A1 range strings. */
export function cellsOfRanges(ranges: readonly string[]): Set<string> {
  const out = new Set<string>();
  for (const text of ranges) {
    const box = parseRange(text);
    for (let col = box.c1; col <= box.c2; col++) {
      for (let row = box.r1; row <= box.r2; row++) {
        out.add(cellKey({ col, row }));
      }
    }
  }
  return out;
}
