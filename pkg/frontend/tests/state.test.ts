import { describe, expect, it } from 'vitest';

import { ViewState, canvasToImage, diffColumns, imageToCanvas } from '../src/state.js';

describe('coordinate mapping', () => {
  it('round-trips image -> canvas -> image at zooms 1, 2, 4', () => {
    for (const zoom of [1, 2, 4]) {
      const vp = { zoom, panX: 0, panY: 0 };
      for (const p of [
        { col: 0, row: 0 },
        { col: 17, row: 3 },
        { col: 511, row: 495 },
      ]) {
        const c = imageToCanvas(vp, p);
        expect(canvasToImage(vp, c.x, c.y)).toEqual(p);
      }
    }
  });

  it('round-trips with a pan offset', () => {
    const vp = { zoom: 2, panX: 40, panY: 12 };
    const p = { col: 100, row: 50 };
    const c = imageToCanvas(vp, p);
    expect(canvasToImage(vp, c.x, c.y)).toEqual(p);
  });

  it('divides by zoom: canvas (200,100) at 2x maps to image (100,50)', () => {
    expect(canvasToImage({ zoom: 2, panX: 0, panY: 0 }, 200, 100)).toEqual({
      col: 100,
      row: 50,
    });
  });
});

describe('point picking', () => {
  function freshState(): ViewState {
    const s = new ViewState();
    s.sessionId = 's';
    s.imageCols = 200;
    s.imageRows = 100;
    return s;
  }

  it('first click leaves one pending marker', () => {
    const s = freshState();
    expect(s.pickPoint(10, 10)).toBeNull();
    expect(s.pendingPoints).toHaveLength(1);
  });

  it('third click restarts the selection', () => {
    const s = freshState();
    s.pickPoint(10, 10);
    s.pickPoint(20, 20);
    expect(s.pendingPoints).toHaveLength(2);
    s.pickPoint(30, 30);
    expect(s.pendingPoints).toEqual([{ col: 30, row: 30 }]);
  });

  it('ignores clicks outside the image with a hint', () => {
    const s = freshState();
    const hint = s.pickPoint(5000, 10);
    expect(hint).toBeTruthy();
    expect(s.pendingPoints).toHaveLength(0);
  });

  it('blocks equal-column selections client-side', () => {
    const s = freshState();
    s.pickPoint(50, 10);
    s.pickPoint(50, 60);
    expect(s.canSubmit()).toBe(false);
    expect(s.selectionProblem()).toMatch(/different columns/);
  });

  it('allows distinct-column selections', () => {
    const s = freshState();
    s.pickPoint(50, 10);
    s.pickPoint(51, 60);
    expect(s.canSubmit()).toBe(true);
    expect(s.selectionProblem()).toBeNull();
  });
});

describe('diffColumns', () => {
  it('is empty for identical polylines', () => {
    expect(diffColumns([1, 2, 3], [1, 2, 3])).toEqual([]);
  });

  it('reports exactly the changed columns', () => {
    expect(diffColumns([5, 5, 5, 5], [5, 9, 9, 5])).toEqual([1, 2]);
  });
});
