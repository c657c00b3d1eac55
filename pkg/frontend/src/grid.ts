// Virtualized grid: only the visible window of cells is materialized in the
// DOM, and cell contents are fetched from the service in tiles as the user
// scrolls. Highlights are painted per hop with a fixed 8-color cycle.

import { cellKey, cellsOfRanges, colLetters, parseRange, printRange } from "./a1.js";
import type { TraceServiceClient } from "./api.js";
import type { TraceView } from "./state.js";

const CELL_W = 88;
const CELL_H = 24;
const HEADER_W = 48;
const TILE_ROWS = 64;
const TILE_COLS = 16;
export const HOP_COLORS = 8;

export class GridView {
  private contents = new Map<string, string>();
  private fetchedTiles = new Set<string>();
  private viewport: HTMLDivElement;
  private spacer: HTMLDivElement;
  private layer: HTMLDivElement;
  private maxRow = 120;
  private maxCol = 26;
  private dragStart: { col: number; row: number } | null = null;
  private editor: HTMLInputElement | null = null;

  constructor(
    private root: HTMLElement,
    private store: TraceView,
    private client: TraceServiceClient,
  ) {
    this.viewport = document.createElement("div");
    this.viewport.className = "grid-viewport";
    this.spacer = document.createElement("div");
    this.spacer.className = "grid-spacer";
    this.layer = document.createElement("div");
    this.layer.className = "grid-layer";
    this.spacer.appendChild(this.layer);
    this.viewport.appendChild(this.spacer);
    this.root.appendChild(this.viewport);

    this.viewport.addEventListener("scroll", () => this.render());
    this.layer.addEventListener("mousedown", (ev) => this.onMouseDown(ev));
    this.layer.addEventListener("mouseup", (ev) => this.onMouseUp(ev));
    this.layer.addEventListener("dblclick", (ev) => this.onDblClick(ev));
    store.onChange(() => this.render());
  }

  reset(): void {
    this.contents.clear();
    this.fetchedTiles.clear();
    this.maxRow = 120;
    this.maxCol = 26;
    this.viewport.scrollTop = 0;
    this.viewport.scrollLeft = 0;
    this.render();
  }

  private cellAt(ev: MouseEvent): { col: number; row: number } | null {
    const rect = this.layer.getBoundingClientRect();
    const x = ev.clientX - rect.left - HEADER_W;
    const y = ev.clientY - rect.top - CELL_H;
    if (x < 0 || y < 0) return null;
    return { col: Math.floor(x / CELL_W) + 1, row: Math.floor(y / CELL_H) + 1 };
  }

  private onMouseDown(ev: MouseEvent): void {
    this.dragStart = this.cellAt(ev);
  }

  private onMouseUp(ev: MouseEvent): void {
    const end = this.cellAt(ev);
    const start = this.dragStart;
    this.dragStart = null;
    if (!start || !end) return;
    const box = {
      c1: Math.min(start.col, end.col),
      r1: Math.min(start.row, end.row),
      c2: Math.max(start.col, end.col),
      r2: Math.max(start.row, end.row),
    };
    void this.store.select(printRange(box));
  }

  private onDblClick(ev: MouseEvent): void {
    const cell = this.cellAt(ev);
    if (!cell || this.editor) return;
    const key = cellKey(cell);
    const input = document.createElement("input");
    input.className = "cell-editor";
    input.value = this.contents.get(key) ?? "";
    input.style.left = `${HEADER_W + (cell.col - 1) * CELL_W}px`;
    input.style.top = `${CELL_H + (cell.row - 1) * CELL_H}px`;
    input.style.width = `${CELL_W * 2}px`;
    const close = () => {
      input.remove();
      this.editor = null;
    };
    input.addEventListener("keydown", (kev) => {
      if (kev.key === "Enter") {
        const content = input.value;
        close();
        this.contents.set(key, content);
        void this.store.editCell(key, content);
      } else if (kev.key === "Escape") {
        close();
      }
    });
    input.addEventListener("blur", close);
    this.layer.appendChild(input);
    this.editor = input;
    input.focus();
  }

  private async fetchVisible(c1: number, r1: number, c2: number, r2: number): Promise<void> {
    if (!this.store.sheetId) return;
    const wanted: string[] = [];
    for (let tc = Math.floor((c1 - 1) / TILE_COLS); tc <= Math.floor((c2 - 1) / TILE_COLS); tc++) {
      for (let tr = Math.floor((r1 - 1) / TILE_ROWS); tr <= Math.floor((r2 - 1) / TILE_ROWS); tr++) {
        const id = `${this.store.sheetId}:${tc}:${tr}`;
        if (!this.fetchedTiles.has(id)) {
          this.fetchedTiles.add(id);
          wanted.push(
            printRange({
              c1: tc * TILE_COLS + 1,
              r1: tr * TILE_ROWS + 1,
              c2: (tc + 1) * TILE_COLS,
              r2: (tr + 1) * TILE_ROWS,
            }),
          );
        }
      }
    }
    let grew = false;
    for (const window of wanted) {
      const cells = await this.client.grid(this.store.sheetId, window);
      for (const { addr, content } of cells) {
        this.contents.set(addr, content);
      }
      if (cells.length > 0) grew = true;
    }
    if (grew) this.render(false);
  }

  render(fetch = true): void {
    const top = this.viewport.scrollTop;
    const left = this.viewport.scrollLeft;
    const rows = Math.ceil(this.viewport.clientHeight / CELL_H) + 4;
    const cols = Math.ceil(this.viewport.clientWidth / CELL_W) + 2;
    const r1 = Math.max(1, Math.floor(top / CELL_H));
    const c1 = Math.max(1, Math.floor(left / CELL_W));
    const r2 = r1 + rows;
    const c2 = c1 + cols;

    // grow the scrollable area as the user approaches its edge
    this.maxRow = Math.max(this.maxRow, r2 + 40);
    this.maxCol = Math.max(this.maxCol, c2 + 6);
    this.spacer.style.height = `${CELL_H * (this.maxRow + 1)}px`;
    this.spacer.style.width = `${HEADER_W + CELL_W * this.maxCol}px`;

    if (fetch) void this.fetchVisible(c1, r1, c2, r2);

    const hopOf = new Map<string, number>();
    this.store.highlightSets.forEach((ranges, hop) => {
      for (const key of cellsOfRanges(ranges)) {
        if (!hopOf.has(key)) hopOf.set(key, hop);
      }
    });
    const selected = this.store.selectedRange;

    const parts: string[] = [];
    for (let col = c1; col <= c2; col++) {
      parts.push(
        `<div class="ghead" style="left:${HEADER_W + (col - 1) * CELL_W}px;top:${top}px;width:${CELL_W}px;height:${CELL_H}px">${colLetters(col)}</div>`,
      );
    }
    for (let row = r1; row <= r2; row++) {
      parts.push(
        `<div class="ghead" style="left:${left}px;top:${CELL_H + (row - 1) * CELL_H}px;width:${HEADER_W}px;height:${CELL_H}px">${row}</div>`,
      );
      for (let col = c1; col <= c2; col++) {
        const key = `${colLetters(col)}${row}`;
        const content = this.contents.get(key) ?? "";
        const classes = ["gcell"];
        const hop = hopOf.get(key);
        if (hop !== undefined) classes.push(`hop${hop % HOP_COLORS}`);
        if (selected && inRange(selected, col, row)) classes.push("selected");
        if (content.startsWith("=")) classes.push("formula");
        parts.push(
          `<div class="${classes.join(" ")}" style="left:${HEADER_W + (col - 1) * CELL_W}px;top:${CELL_H + (row - 1) * CELL_H}px;width:${CELL_W}px;height:${CELL_H}px" title="${key}">${escapeHtml(content)}</div>`,
        );
      }
    }
    parts.push(
      `<div class="ghead corner" style="left:${left}px;top:${top}px;width:${HEADER_W}px;height:${CELL_H}px"></div>`,
    );
    this.layer.innerHTML = parts.join("");
  }
}

function inRange(rangeText: string, col: number, row: number): boolean {
  const box = parseRange(rangeText);
  return box.c1 <= col && col <= box.c2 && box.r1 <= row && row <= box.r2;
}

function escapeHtml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
