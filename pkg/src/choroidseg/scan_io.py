"""Scan and label file I/O plus overlay rendering.

Supported rasters are binary portable graymaps (P5, maxval 255) and 8-bit
grayscale PNG. Labels are UTF-8 CSV with header ``layer,col,row``.
"""

import enum
import os
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ChannelError, DecodeError, DimensionError, ParseError

DEFAULT_AXIAL_RESOLUTION_UM = 3.87167


class Layer(enum.Enum):
    RPE = "RPE"
    CHOROID = "CHOROID"


@dataclass
class GrayImage:
    """Grayscale scan held as float64 so filtering never quantizes.

    Pixels stay in [0, 255]; quantization to uint8 happens only on export.
    """

    pixels: np.ndarray
    axial_resolution_um: float = DEFAULT_AXIAL_RESOLUTION_UM

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 2:
            raise DimensionError(f"expected a 2-D matrix, got {self.pixels.ndim}-D")
        if self.rows < 3 or self.cols < 3:
            raise DimensionError(
                f"image must be at least 3x3, got {self.rows}x{self.cols}"
            )
        if self.pixels.min() < 0 or self.pixels.max() > 255:
            raise DimensionError("pixel values must lie in [0, 255]")
        if self.axial_resolution_um <= 0:
            raise DimensionError("axial resolution must be positive")

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]


@dataclass
class LabelSet:
    """Sparse expert-marked boundary points for one layer."""

    layer: Layer
    points: list = field(default_factory=list)  # (col, row) int pairs

    def __len__(self) -> int:
        return len(self.points)


def load_scan(path: str, resolution_um: float | None = None) -> GrayImage:
    """Load an 8-bit grayscale raster (P5 PGM or grayscale PNG).

    Color or non-8-bit inputs are rejected rather than converted; a silent
    luma conversion would hide acquisition mistakes.
    """
    try:
        img = Image.open(path)
        img.load()
    except FileNotFoundError as exc:
        raise DecodeError(f"cannot read scan file: {path}") from exc
    except UnidentifiedImageError as exc:
        raise DecodeError(f"not a supported raster file: {path}") from exc
    except OSError as exc:
        raise DecodeError(f"failed to decode {path}: {exc}") from exc
    if img.mode != "L":
        raise ChannelError(
            f"{path}: expected 8-bit grayscale, got mode {img.mode!r}"
        )
    pixels = np.asarray(img, dtype=np.float64)
    if resolution_um is None:
        resolution_um = DEFAULT_AXIAL_RESOLUTION_UM
    return GrayImage(pixels=pixels, axial_resolution_um=resolution_um)


def save_scan(image: GrayImage, path: str) -> None:
    """Write a scan as P5 PGM (.pgm) or grayscale PNG, quantizing to uint8."""
    data = np.clip(np.rint(image.pixels), 0, 255).astype(np.uint8)
    if path.lower().endswith(".pgm"):
        with open(path, "wb") as fh:
            fh.write(b"P5\n%d %d\n255\n" % (image.cols, image.rows))
            fh.write(data.tobytes())
    else:
        Image.fromarray(data, mode="L").save(path)


def load_labels(path: str) -> dict[Layer, LabelSet]:
    """Parse a label CSV into one LabelSet per layer.

    Expected header is ``layer,col,row``; extra whitespace is tolerated.
    Bounds against any particular scan are checked at evaluation time,
    not here.
    """
    sets = {layer: LabelSet(layer=layer) for layer in Layer}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read label file: {path}") from exc
    if not lines:
        raise ParseError(f"{path}: empty file, expected header 'layer,col,row'")
    header = [c.strip().lower() for c in lines[0].split(",")]
    if header != ["layer", "col", "row"]:
        raise ParseError(f"{path}:1: expected header 'layer,col,row', got {lines[0]!r}")
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = [c.strip() for c in line.split(",")]
        if len(parts) != 3:
            raise ParseError(f"{path}:{lineno}: expected 3 fields, got {len(parts)}")
        layer_name, col_s, row_s = parts
        try:
            layer = Layer(layer_name.upper())
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: unknown layer {layer_name!r}") from exc
        try:
            col, row = int(col_s), int(row_s)
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: non-integer coordinate") from exc
        sets[layer].points.append((col, row))
    return sets


def save_labels(sets: dict[Layer, LabelSet], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("layer,col,row\n")
        for layer in Layer:
            for col, row in sets.get(layer, LabelSet(layer)).points:
                fh.write(f"{layer.value},{col},{row}\n")


def render_overlay(image: GrayImage, boundaries, labels=None, path: str | None = None) -> np.ndarray:
    """Render boundary curves and label dots over the scan.

    Parameters
    ----------
    boundaries : list of (Boundary, (r, g, b)) pairs
        Each boundary recolors one pixel per column at its row.
    labels : LabelSet, optional
        Drawn as red 3x3 dots (clipped at the borders).
    path : str, optional
        When given, the RGB raster is also written there (PNG).

    Returns the HxWx3 uint8 overlay.
    """
    gray = np.clip(np.rint(image.pixels), 0, 255).astype(np.uint8)
    rgb = np.repeat(gray[:, :, None], 3, axis=2)
    for boundary, color in boundaries:
        rows = np.asarray(boundary.rows)
        if rows.shape[0] != image.cols:
            raise DimensionError(
                f"boundary length {rows.shape[0]} != image cols {image.cols}"
            )
        rgb[rows, np.arange(image.cols)] = color
    if labels is not None:
        for col, row in labels.points:
            r0, r1 = max(0, row - 1), min(image.rows, row + 2)
            c0, c1 = max(0, col - 1), min(image.cols, col + 2)
            rgb[r0:r1, c0:c1] = (255, 0, 0)
    if path is not None:
        Image.fromarray(rgb, mode="RGB").save(path)
    return rgb


def sniff_format(data: bytes) -> str | None:
    """Return 'pgm' or 'png' from magic bytes, None if neither."""
    if data[:2] == b"P5":
        return "pgm"
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return "png"
    return None


def load_scan_bytes(data: bytes, resolution_um: float | None = None) -> GrayImage:
    """Decode scan bytes (PGM/PNG) without touching the filesystem."""
    import io

    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise DecodeError(f"failed to decode uploaded raster: {exc}") from exc
    if img.mode != "L":
        raise ChannelError(f"expected 8-bit grayscale, got mode {img.mode!r}")
    if resolution_um is None:
        resolution_um = DEFAULT_AXIAL_RESOLUTION_UM
    return GrayImage(np.asarray(img, dtype=np.float64), resolution_um)


def ensure_dir(path: str) -> None:
    if path and not os.path.isdir(path):
        os.makedirs(path, exist_ok=True)
