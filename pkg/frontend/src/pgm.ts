// Minimal binary PGM (P5, maxval <= 255) decoder. Browsers cannot render
// portable graymaps, and the server returns scans exactly as uploaded.

export interface GrayFrame {
  cols: number;
  rows: number;
  gray: Uint8Array; // row-major
}

export function decodePgm(buffer: ArrayBuffer): GrayFrame {
  const bytes = new Uint8Array(buffer);
  if (bytes[0] !== 0x50 || bytes[1] !== 0x35) {
    throw new Error('not a P5 graymap');
  }
  let pos = 2;
  const fields: number[] = [];
  while (fields.length < 3) {
    while (pos < bytes.length && isSpace(bytes[pos])) pos++;
    if (bytes[pos] === 0x23) {
      // comment runs to end of line
      while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
      continue;
    }
    let value = 0;
    let seen = false;
    while (pos < bytes.length && bytes[pos] >= 0x30 && bytes[pos] <= 0x39) {
      value = value * 10 + (bytes[pos] - 0x30);
      pos++;
      seen = true;
    }
    if (!seen) throw new Error('malformed graymap header');
    fields.push(value);
  }
  pos++; // single whitespace after maxval
  const [cols, rows, maxval] = fields;
  if (maxval > 255) throw new Error('only 8-bit graymaps supported');
  const expected = cols * rows;
  const gray = bytes.slice(pos, pos + expected);
  if (gray.length !== expected) throw new Error('truncated graymap payload');
  return { cols, rows, gray };
}

function isSpace(b: number): boolean {
  return b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d;
}

export function grayToImageData(frame: GrayFrame): ImageData {
  const rgba = new Uint8ClampedArray(frame.cols * frame.rows * 4);
  for (let i = 0; i < frame.gray.length; i++) {
    const v = frame.gray[i];
    rgba[4 * i] = v;
    rgba[4 * i + 1] = v;
    rgba[4 * i + 2] = v;
    rgba[4 * i + 3] = 255;
  }
  return new ImageData(rgba, frame.cols, frame.rows);
}
