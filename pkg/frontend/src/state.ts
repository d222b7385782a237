// View state and the pure geometry/selection logic behind the correction
// workflow. Everything here is side-effect free so it can be unit tested
// without a canvas or a server.

import type { LayerName, Point } from './api.js';

export interface Viewport {
  zoom: number;
  panX: number; // image column at the canvas origin
  panY: number; // image row at the canvas origin
}

export function imageToCanvas(vp: Viewport, p: Point): { x: number; y: number } {
  return { x: (p.col - vp.panX) * vp.zoom, y: (p.row - vp.panY) * vp.zoom };
}

export function canvasToImage(vp: Viewport, x: number, y: number): Point {
  return {
    col: Math.floor(x / vp.zoom + vp.panX),
    row: Math.floor(y / vp.zoom + vp.panY),
  };
}

/** Columns where two boundary polylines differ (for change highlighting). */
export function diffColumns(prev: number[], next: number[]): number[] {
  const changed: number[] = [];
  const n = Math.min(prev.length, next.length);
  for (let c = 0; c < n; c++) {
    if (prev[c] !== next[c]) changed.push(c);
  }
  return changed;
}

export class ViewState {
  sessionId = '';
  imageCols = 0;
  imageRows = 0;
  viewport: Viewport = { zoom: 1, panX: 0, panY: 0 };
  activeLayer: LayerName = 'CHOROID';
  pendingPoints: Point[] = [];
  boundaryVersion = 0; // bumped on every accepted server update
  correctionsApplied = 0; // per session, drives the undo control
  correctedLayers = new Set<LayerName>();
  submitInFlight = false;

  setZoom(zoom: number): void {
    if (zoom > 0) this.viewport.zoom = zoom;
  }

  /**
   * Register a click. Returns a hint string when the click is ignored,
   * null when a marker was placed. A third click restarts the selection
   * with the new point as its first marker.
   */
  pickPoint(canvasX: number, canvasY: number): string | null {
    const p = canvasToImage(this.viewport, canvasX, canvasY);
    if (p.col < 0 || p.col >= this.imageCols || p.row < 0 || p.row >= this.imageRows) {
      return 'click inside the scan to pick a point';
    }
    if (this.pendingPoints.length >= 2) {
      this.pendingPoints = [p];
    } else {
      this.pendingPoints.push(p);
    }
    return null;
  }

  /** Both points picked and on strictly different columns. */
  canSubmit(): boolean {
    return (
      !this.submitInFlight &&
      this.pendingPoints.length === 2 &&
      this.pendingPoints[0].col !== this.pendingPoints[1].col
    );
  }

  /** Equal-column pairs never reach the server. */
  selectionProblem(): string | null {
    if (this.pendingPoints.length !== 2) return 'pick two points first';
    if (this.pendingPoints[0].col === this.pendingPoints[1].col) {
      return 'points must lie on different columns';
    }
    return null;
  }

  canUndo(): boolean {
    return this.correctionsApplied > 0 && !this.submitInFlight;
  }

  clearPending(): void {
    this.pendingPoints = [];
  }
}
