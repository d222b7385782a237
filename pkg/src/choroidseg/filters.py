"""Spatial and frequency-domain enhancement plus boundary-based flattening."""

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DimensionError, DomainError, ParameterError
from .scan_io import GrayImage


@dataclass
class HomomorphicParams:
    """Gaussian high-pass gains for log-domain illumination correction."""

    sigma: float = 3.2
    gamma_h: float = 1.0
    gamma_l: float = 0.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")


@dataclass
class FlattenMap:
    """Per-column downward shifts that level a boundary at pivot_row."""

    shifts: np.ndarray
    pivot_row: int

    def __post_init__(self):
        self.shifts = np.asarray(self.shifts, dtype=np.int64)


def vertical_gradient(m: np.ndarray) -> np.ndarray:
    """Correlate with the column kernel [2, 0, -2].

    out(i, j) = 2*m(i-1, j) - 2*m(i+1, j), borders replicated, so a bright
    row sitting above a dark row produces a positive response.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 3:
        raise DimensionError("vertical gradient needs a matrix with >= 3 rows")
    kernel = np.array([[2.0], [0.0], [-2.0]])
    return ndimage.correlate(m, kernel, mode="nearest")


def gamma_correct(m: np.ndarray, gamma: float) -> np.ndarray:
    """Brighten dark areas: out = 255^(1-gamma) * m^gamma on [0, 255]."""
    if not 0.0 < gamma <= 1.0:
        raise ParameterError(f"gamma must lie in (0, 1], got {gamma}")
    m = np.asarray(m, dtype=np.float64)
    if m.min() < 0:
        raise DomainError("gamma correction requires nonnegative inputs")
    return 255.0 ** (1.0 - gamma) * m**gamma


def highpass_gain(d_squared, p: HomomorphicParams):
    """Radial filter gain at squared distance d_squared from the centered
    zero frequency."""
    d_squared = np.asarray(d_squared, dtype=np.float64)
    g = (p.gamma_h - p.gamma_l) * (1.0 - np.exp(-d_squared / (2.0 * p.sigma**2)))
    return g + p.gamma_l


def gain_matrix(rows: int, cols: int, p: HomomorphicParams) -> np.ndarray:
    """Full gain matrix on the centered spectrum (DC at rows//2, cols//2)."""
    u = np.arange(rows)[:, None] - rows // 2
    v = np.arange(cols)[None, :] - cols // 2
    return highpass_gain(u * u + v * v, p)


def homomorphic_filter(m: np.ndarray, p: HomomorphicParams | None = None) -> np.ndarray:
    """Log-domain Gaussian high-pass over the centered 2-D spectrum.

    Steps: ln(1+m) -> FFT -> multiply by the centered gain -> inverse FFT
    (real part) -> expm1 -> linear rescale to [0, 255]. The transform runs
    at the exact image size; padding would move the filter center.

    A structure-free (constant) input rescales degenerately and is pinned
    to 127.5 everywhere.
    """
    if p is None:
        p = HomomorphicParams()
    m = np.asarray(m, dtype=np.float64)
    rows, cols = m.shape
    log_img = np.log1p(m)
    spectrum = np.fft.fftshift(np.fft.fft2(log_img))
    spectrum *= gain_matrix(rows, cols, p)
    out = np.expm1(np.real(np.fft.ifft2(np.fft.ifftshift(spectrum))))
    lo, hi = out.min(), out.max()
    if hi - lo <= 1e-9:
        return np.full_like(out, 127.5)
    return (out - lo) / (hi - lo) * 255.0


def flatten(image: GrayImage, rpe) -> tuple[GrayImage, FlattenMap]:
    """Shift each column down until the boundary sits on one row.

    The pivot is the lowest boundary point (largest row index); removed
    bottom pixels wrap around to the top of their column, so every column
    keeps its multiset of values.
    """
    rows = np.asarray(rpe.rows, dtype=np.int64)
    if rows.shape[0] != image.cols:
        raise DimensionError(
            f"boundary length {rows.shape[0]} != image cols {image.cols}"
        )
    if rows.min() < 0 or rows.max() >= image.rows:
        raise DimensionError("boundary rows out of image bounds")
    pivot = int(rows.max())
    shifts = pivot - rows
    shifted = np.empty_like(image.pixels)
    for c in range(image.cols):
        shifted[:, c] = np.roll(image.pixels[:, c], shifts[c])
    return (
        GrayImage(shifted, image.axial_resolution_um),
        FlattenMap(shifts=shifts, pivot_row=pivot),
    )


def unflatten_boundary(rows: np.ndarray, fm: FlattenMap) -> np.ndarray:
    """Map boundary rows from flattened back to original coordinates."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[0] != fm.shifts.shape[0]:
        raise DimensionError(
            f"boundary length {rows.shape[0]} != shift count {fm.shifts.shape[0]}"
        )
    return np.maximum(rows - fm.shifts, 0)
