// Typed client for the segmentation service. The UI never computes
// boundaries itself: every displayed curve is a server response.

export type LayerName = 'RPE' | 'CHOROID';

export interface Point {
  col: number;
  row: number;
}

export interface SegResult {
  rpe: number[];
  choroid: number[];
  flags: string[];
  thickness: {
    per_column_px: number[];
    per_column_mm: number[];
    mean_px: number;
    mean_mm: number;
  };
  config: Record<string, unknown>;
  stage_timings: Record<string, number>;
}

export interface ApiError {
  status: number;
  message: string;
}

export interface ScanPayload {
  bytes: ArrayBuffer;
  contentType: string;
}

export interface Api {
  uploadScan(data: Blob): Promise<string>;
  getScan(sessionId: string): Promise<ScanPayload>;
  getResult(sessionId: string): Promise<SegResult>;
  postCorrection(
    sessionId: string,
    layer: LayerName,
    a: Point,
    b: Point
  ): Promise<SegResult>;
  postUndo(sessionId: string): Promise<SegResult>;
}

async function asError(resp: Response): Promise<ApiError> {
  let message = `${resp.status}`;
  try {
    const body = await resp.json();
    message = typeof body.detail === 'string' ? body.detail : JSON.stringify(body.detail);
  } catch {
    /* non-JSON error body */
  }
  return { status: resp.status, message };
}

export class HttpApi implements Api {
  constructor(private baseUrl: string = '') {}

  async uploadScan(data: Blob): Promise<string> {
    const resp = await fetch(`${this.baseUrl}/api/scans`, { method: 'POST', body: data });
    if (!resp.ok) throw await asError(resp);
    const body = await resp.json();
    return body.session_id as string;
  }

  async getScan(sessionId: string): Promise<ScanPayload> {
    const resp = await fetch(`${this.baseUrl}/api/scans/${sessionId}`);
    if (!resp.ok) throw await asError(resp);
    return {
      bytes: await resp.arrayBuffer(),
      contentType: resp.headers.get('content-type') ?? '',
    };
  }

  async getResult(sessionId: string): Promise<SegResult> {
    const resp = await fetch(`${this.baseUrl}/api/scans/${sessionId}/result`);
    if (!resp.ok) throw await asError(resp);
    return (await resp.json()) as SegResult;
  }

  async postCorrection(
    sessionId: string,
    layer: LayerName,
    a: Point,
    b: Point
  ): Promise<SegResult> {
    const resp = await fetch(`${this.baseUrl}/api/scans/${sessionId}/corrections`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ layer, a, b }),
    });
    if (!resp.ok) throw await asError(resp);
    return (await resp.json()) as SegResult;
  }

  async postUndo(sessionId: string): Promise<SegResult> {
    const resp = await fetch(`${this.baseUrl}/api/scans/${sessionId}/undo`, {
      method: 'POST',
    });
    if (!resp.ok) throw await asError(resp);
    return (await resp.json()) as SegResult;
  }
}
