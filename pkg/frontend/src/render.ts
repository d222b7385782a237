// Canvas drawing: scan raster, boundary polylines, pending markers.
// Colors follow the clinical convention used elsewhere in the project:
// green for automatic boundaries, blue once a layer has been manually
// corrected, yellow crosses for pending picks.

import type { SegResult, LayerName } from './api.js';
import { ViewState, imageToCanvas } from './state.js';

const AUTO_COLOR = '#00c853';
const CORRECTED_COLOR = '#2979ff';
const PENDING_COLOR = '#ffd600';
const ACTIVE_WIDTH = 2;
const INACTIVE_WIDTH = 1;

export class ScanRenderer {
  private ctx: CanvasRenderingContext2D;
  private scan: ImageBitmap | null = null;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext('2d');
    if (!ctx) throw new Error('2d canvas unavailable');
    this.ctx = ctx;
  }

  async setScan(image: ImageData): Promise<void> {
    this.scan = await createImageBitmap(image);
  }

  draw(state: ViewState, result: SegResult | null): void {
    const dpr = window.devicePixelRatio || 1;
    const vp = state.viewport;
    const cssWidth = state.imageCols * vp.zoom;
    const cssHeight = state.imageRows * vp.zoom;
    this.canvas.style.width = `${cssWidth}px`;
    this.canvas.style.height = `${cssHeight}px`;
    this.canvas.width = Math.round(cssWidth * dpr);
    this.canvas.height = Math.round(cssHeight * dpr);
    const ctx = this.ctx;
    ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
    ctx.imageSmoothingEnabled = vp.zoom < 1;
    ctx.clearRect(0, 0, cssWidth, cssHeight);
    if (this.scan) {
      ctx.drawImage(this.scan, 0, 0, cssWidth, cssHeight);
    }
    if (result) {
      this.drawBoundary(state, result.rpe, 'RPE');
      this.drawBoundary(state, result.choroid, 'CHOROID');
    }
    for (const p of state.pendingPoints) {
      this.drawMarker(state, p.col, p.row);
    }
  }

  private drawBoundary(state: ViewState, rows: number[], layer: LayerName): void {
    const ctx = this.ctx;
    ctx.strokeStyle = state.correctedLayers.has(layer) ? CORRECTED_COLOR : AUTO_COLOR;
    ctx.lineWidth = state.activeLayer === layer ? ACTIVE_WIDTH : INACTIVE_WIDTH;
    ctx.beginPath();
    for (let c = 0; c < rows.length; c++) {
      const { x, y } = imageToCanvas(state.viewport, { col: c, row: rows[c] });
      const cx = x + state.viewport.zoom / 2;
      const cy = y + state.viewport.zoom / 2;
      if (c === 0) ctx.moveTo(cx, cy);
      else ctx.lineTo(cx, cy);
    }
    ctx.stroke();
  }

  private drawMarker(state: ViewState, col: number, row: number): void {
    const ctx = this.ctx;
    const { x, y } = imageToCanvas(state.viewport, { col, row });
    const cx = x + state.viewport.zoom / 2;
    const cy = y + state.viewport.zoom / 2;
    ctx.strokeStyle = PENDING_COLOR;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(cx - 6, cy);
    ctx.lineTo(cx + 6, cy);
    ctx.moveTo(cx, cy - 6);
    ctx.lineTo(cx, cy + 6);
    ctx.stroke();
  }
}
