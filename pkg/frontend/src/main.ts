// DOM wiring for the correction page: upload, click-to-pick, submit,
// undo, zoom, layer toggle. Session id lives in the URL hash so a
// refresh re-fetches everything from the server (no client persistence).

import { HttpApi, SegResult, LayerName } from './api.js';
import { decodePgm, grayToImageData } from './pgm.js';
import { ScanRenderer } from './render.js';
import { ViewState } from './state.js';
import { CorrectionController } from './workflow.js';

const api = new HttpApi();
const state = new ViewState();
const controller = new CorrectionController(api, state);

let renderer: ScanRenderer | null = null;
let result: SegResult | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function status(text: string): void {
  el<HTMLSpanElement>('status').textContent = text;
}

function refreshControls(): void {
  el<HTMLButtonElement>('submit').disabled = !state.canSubmit();
  el<HTMLButtonElement>('undo').disabled = !state.canUndo();
  el<HTMLSpanElement>('revision').textContent = `rev ${state.boundaryVersion}`;
}

function redraw(): void {
  if (renderer) renderer.draw(state, result);
  refreshControls();
}

async function loadSession(sessionId: string): Promise<void> {
  const scan = await api.getScan(sessionId);
  let imageData: ImageData;
  if (scan.contentType.includes('png')) {
    const bitmap = await createImageBitmap(new Blob([scan.bytes], { type: 'image/png' }));
    const work = document.createElement('canvas');
    work.width = bitmap.width;
    work.height = bitmap.height;
    const ctx = work.getContext('2d')!;
    ctx.drawImage(bitmap, 0, 0);
    imageData = ctx.getImageData(0, 0, bitmap.width, bitmap.height);
  } else {
    imageData = grayToImageData(decodePgm(scan.bytes));
  }
  state.sessionId = sessionId;
  state.imageCols = imageData.width;
  state.imageRows = imageData.height;
  state.pendingPoints = [];
  result = await api.getResult(sessionId);
  renderer = new ScanRenderer(el<HTMLCanvasElement>('scan'));
  await renderer.setScan(imageData);
  window.location.hash = sessionId;
  status(result.flags.length ? `flags: ${result.flags.join(', ')}` : 'ready');
  redraw();
}

async function onUpload(file: File): Promise<void> {
  status('segmenting…');
  try {
    const sessionId = await api.uploadScan(file);
    await loadSession(sessionId);
  } catch (e) {
    status(`upload failed: ${(e as { message?: string }).message ?? e}`);
  }
}

function onCanvasClick(event: MouseEvent): void {
  if (!state.sessionId) return;
  const rect = el<HTMLCanvasElement>('scan').getBoundingClientRect();
  const hint = state.pickPoint(event.clientX - rect.left, event.clientY - rect.top);
  if (hint) status(hint);
  else status(`${state.pendingPoints.length} point(s) picked`);
  redraw();
}

async function onSubmit(): Promise<void> {
  const outcome = await controller.submit();
  if (outcome.ok && outcome.result) {
    result = outcome.result;
    status('correction applied');
  } else {
    status(outcome.message ?? 'rejected');
  }
  redraw();
}

async function onUndo(): Promise<void> {
  const outcome = await controller.undo();
  if (outcome.ok && outcome.result) {
    result = outcome.result;
    status('reverted');
  } else {
    status(outcome.message ?? 'nothing to undo');
  }
  redraw();
}

function init(): void {
  el<HTMLInputElement>('file').addEventListener('change', (e) => {
    const input = e.target as HTMLInputElement;
    if (input.files && input.files[0]) void onUpload(input.files[0]);
  });
  el<HTMLCanvasElement>('scan').addEventListener('click', onCanvasClick);
  el<HTMLButtonElement>('submit').addEventListener('click', () => void onSubmit());
  el<HTMLButtonElement>('undo').addEventListener('click', () => void onUndo());
  for (const zoom of [1, 2, 4]) {
    el<HTMLButtonElement>(`zoom${zoom}`).addEventListener('click', () => {
      state.setZoom(zoom);
      redraw();
    });
  }
  for (const layer of ['RPE', 'CHOROID'] as LayerName[]) {
    el<HTMLInputElement>(`layer-${layer.toLowerCase()}`).addEventListener('change', () => {
      state.activeLayer = layer;
      state.clearPending();
      redraw();
    });
  }
  const fromHash = window.location.hash.replace(/^#/, '');
  if (fromHash) {
    void loadSession(fromHash).catch(() => status('session expired; upload a scan'));
  } else {
    status('upload a scan to begin');
  }
  refreshControls();
}

init();
