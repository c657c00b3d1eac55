// UI-independent trace view state: the current sheet session, selection,
// highlight sets per hop, and the selection history. All service calls are
// sequence-numbered so a response for a superseded selection is dropped
// instead of clobbering newer results.

import { cellsOfRanges } from "./a1.js";
import type { EditOp, GraphStats, TraceResult } from "./api.js";

export type Direction = "deps" | "precs";
export type HopMode = "transitive" | "stepwise";

export interface TraceClient {
  createSheet(dump: string): Promise<string>;
  trace(
    sheetId: string,
    range: string,
    dir: Direction,
    transitive: boolean,
  ): Promise<TraceResult>;
  edits(sheetId: string, ops: EditOp[]): Promise<GraphStats>;
  stats(sheetId: string): Promise<GraphStats>;
}

export interface Banner {
  kind: "error" | "info";
  text: string;
}

export class TraceView {
  sheetId: string | null = null;
  selectedRange: string | null = null;
  direction: Direction = "deps";
  hopMode: HopMode = "transitive";
  /** hop index -> ranges highlighted by that hop */
  highlightSets: string[][] = [];
  history: string[] = [];
  stats: GraphStats | null = null;
  banner: Banner | null = null;
  lastElapsedUs: number | null = null;

  private seq = 0;
  private listeners: Array<() => void> = [];

  constructor(private client: TraceClient) {}

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  private fail(err: unknown): void {
    this.banner = { kind: "error", text: err instanceof Error ? err.message : String(err) };
    this.notify();
  }

  dismissBanner(): void {
    this.banner = null;
    this.notify();
  }

  highlightedCells(): Set<string> {
    const out = new Set<string>();
    for (const hop of this.highlightSets) {
      for (const key of cellsOfRanges(hop)) out.add(key);
    }
    return out;
  }

  async loadSheet(dump: string): Promise<void> {
    try {
      this.sheetId = await this.client.createSheet(dump);
      this.selectedRange = null;
      this.highlightSets = [];
      this.history = [];
      this.banner = null;
      this.stats = await this.client.stats(this.sheetId);
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Click or drag selection; records the previous selection for Back. */
  async select(range: string, recordHistory = true): Promise<void> {
    if (!this.sheetId) return;
    if (recordHistory && this.selectedRange && this.selectedRange !== range) {
      this.history.push(this.selectedRange);
    }
    this.selectedRange = range;
    await this.retrace();
  }

  /** Re-run the trace for the current selection, replacing all hops. */
  async retrace(): Promise<void> {
    if (!this.sheetId || !this.selectedRange) return;
    const mySeq = ++this.seq;
    const transitive = this.hopMode === "transitive";
    try {
      const result = await this.client.trace(
        this.sheetId,
        this.selectedRange,
        this.direction,
        transitive,
      );
      if (mySeq !== this.seq) return; // superseded selection: drop it
      this.highlightSets = [result.ranges];
      this.lastElapsedUs = result.elapsed_us;
      this.banner =
        result.ranges.length === 0
          ? { kind: "info", text: `no ${this.direction === "deps" ? "dependents" : "precedents"}` }
          : null;
      this.notify();
    } catch (err) {
      if (mySeq === this.seq) this.fail(err);
    }
  }

  /** Stepwise mode: expand one more hop from the newest highlight set. */
  async step(): Promise<void> {
    if (!this.sheetId || this.hopMode !== "stepwise" || this.highlightSets.length === 0) {
      return;
    }
    const mySeq = this.seq;
    const frontier = this.highlightSets[this.highlightSets.length - 1]!;
    const seen = this.highlightedCells();
    const next = new Set<string>();
    try {
      for (const range of frontier) {
        const result = await this.client.trace(this.sheetId, range, this.direction, false);
        if (mySeq !== this.seq) return;
        for (const key of cellsOfRanges(result.ranges)) {
          if (!seen.has(key)) next.add(key);
        }
      }
    } catch (err) {
      if (mySeq === this.seq) this.fail(err);
      return;
    }
    if (next.size === 0) {
      this.banner = { kind: "info", text: "no further hops" };
    } else {
      this.highlightSets.push([...next].sort());
    }
    this.notify();
  }

  async setDirection(direction: Direction): Promise<void> {
    if (this.direction === direction) return;
    this.direction = direction;
    await this.retrace();
  }

  async setHopMode(mode: HopMode): Promise<void> {
    if (this.hopMode === mode) return;
    this.hopMode = mode;
    await this.retrace();
  }

  /** Chain-following: a highlighted cell becomes the new selection. */
  async followHighlight(cellKey: string): Promise<void> {
    if (!this.highlightedCells().has(cellKey)) return;
    await this.select(cellKey);
  }

  async back(): Promise<void> {
    const previous = this.history.pop();
    if (previous) {
      await this.select(previous, false);
    }
  }

  /** The one action that mutates the graph; re-traces afterwards. */
  async editCell(cellKey: string, content: string): Promise<void> {
    if (!this.sheetId) return;
    try {
      this.stats = await this.client.edits(this.sheetId, [
        { op: "set", cell: cellKey, content },
      ]);
    } catch (err) {
      this.fail(err);
      return;
    }
    this.notify();
    if (this.selectedRange) {
      await this.retrace();
    }
  }
}
