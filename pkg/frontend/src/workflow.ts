// Submit/undo controller: the only place that talks to the server about
// boundary changes. Keeps the state machine honest: pending points are
// cleared only on success, kept on a 422 so the user can adjust.

import type { Api, SegResult } from './api.js';
import { ViewState } from './state.js';

export interface WorkflowOutcome {
  ok: boolean;
  result?: SegResult;
  message?: string;
}

function isApiError(e: unknown): e is { status: number; message: string } {
  return typeof e === 'object' && e !== null && 'status' in e && 'message' in e;
}

export class CorrectionController {
  constructor(
    private api: Api,
    public state: ViewState
  ) {}

  async submit(): Promise<WorkflowOutcome> {
    const problem = this.state.selectionProblem();
    if (problem) return { ok: false, message: problem };
    const [a, b] = this.state.pendingPoints;
    this.state.submitInFlight = true;
    try {
      const result = await this.api.postCorrection(
        this.state.sessionId,
        this.state.activeLayer,
        a,
        b
      );
      this.state.clearPending();
      this.state.boundaryVersion += 1;
      this.state.correctionsApplied += 1;
      this.state.correctedLayers.add(this.state.activeLayer);
      return { ok: true, result };
    } catch (e) {
      // points stay selected on rejection so the user can adjust them
      const message = isApiError(e) ? e.message : String(e);
      return { ok: false, message };
    } finally {
      this.state.submitInFlight = false;
    }
  }

  async undo(): Promise<WorkflowOutcome> {
    if (!this.state.canUndo()) return { ok: false, message: 'nothing to undo' };
    this.state.submitInFlight = true;
    try {
      const result = await this.api.postUndo(this.state.sessionId);
      this.state.boundaryVersion += 1;
      this.state.correctionsApplied -= 1;
      if (this.state.correctionsApplied === 0) {
        this.state.correctedLayers.clear();
      }
      return { ok: true, result };
    } catch (e) {
      const message = isApiError(e) ? e.message : String(e);
      return { ok: false, message };
    } finally {
      this.state.submitInFlight = false;
    }
  }
}
