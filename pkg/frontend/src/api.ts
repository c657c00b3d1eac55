// Typed client for the trace service HTTP API.

export interface GridCell {
  addr: string;
  content: string;
}

export interface TraceResult {
  ranges: string[];
  elapsed_us: number;
}

export interface GraphStats {
  edges: number;
  vertices: number;
  rawEdges: number;
  rawVertices: number;
  edgeRatio: number;
  vertexRatio: number;
}

export type EditOp =
  | { op: "clear"; range: string }
  | { op: "set"; cell: string; content: string };

export class ServiceError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function unwrap<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      detail = ((await resp.json()) as { detail?: string }).detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ServiceError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class TraceServiceClient {
  constructor(readonly baseUrl: string) {}

  async createSheet(dump: string): Promise<string> {
    const resp = await fetch(`${this.baseUrl}/sheets`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ dump }),
    });
    return (await unwrap<{ id: string }>(resp)).id;
  }

  async grid(sheetId: string, window: string): Promise<GridCell[]> {
    const url = `${this.baseUrl}/sheets/${sheetId}/grid?window=${encodeURIComponent(window)}`;
    return (await unwrap<{ cells: GridCell[] }>(await fetch(url))).cells;
  }

  async trace(
    sheetId: string,
    range: string,
    dir: "deps" | "precs",
    transitive: boolean,
  ): Promise<TraceResult> {
    const params = new URLSearchParams({
      range,
      dir,
      transitive: String(transitive),
    });
    const url = `${this.baseUrl}/sheets/${sheetId}/trace?${params}`;
    return unwrap<TraceResult>(await fetch(url));
  }

  async edits(sheetId: string, ops: EditOp[]): Promise<GraphStats> {
    const resp = await fetch(`${this.baseUrl}/sheets/${sheetId}/edits`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ops }),
    });
    return unwrap<GraphStats>(resp);
  }

  async stats(sheetId: string): Promise<GraphStats> {
    return unwrap<GraphStats>(await fetch(`${this.baseUrl}/sheets/${sheetId}/stats`));
  }

  async deleteSheet(sheetId: string): Promise<void> {
    await unwrap(await fetch(`${this.baseUrl}/sheets/${sheetId}`, { method: "DELETE" }));
  }
}
