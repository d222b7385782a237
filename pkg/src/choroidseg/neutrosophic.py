"""Three-set image model: truth / indeterminacy / falsity.

A grayscale scan is mapped to three aligned matrices in [0, 1]:

* T — membership of each pixel in the bright "object" class, computed as
  the min-max normalized local mean of the intensities;
* F — background membership, the complement 1 - T;
* I — indeterminacy, the normalized absolute deviation between a pixel
  and its local mean (large where the pixel disagrees with its window).

An alpha-mean smoothing replaces T/F values by their local means wherever
indeterminacy reaches the threshold alpha, then recomputes indeterminacy
from the smoothed truth matrix.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ParameterError, UndefinedInputError
from .scan_io import GrayImage


@dataclass
class NeutroConfig:
    """Window size of the local mean and the indeterminacy threshold."""

    window: int = 5
    alpha: float = 0.85

    def __post_init__(self):
        if self.window % 2 == 0 or self.window < 3:
            raise ParameterError(f"window must be odd and >= 3, got {self.window}")
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass
class NeutrosophicImage:
    T: np.ndarray
    I: np.ndarray
    F: np.ndarray


def local_mean(m: np.ndarray, window: int) -> np.ndarray:
    """Mean over a window x window neighborhood with replicated borders."""
    if window % 2 == 0 or window < 1:
        raise ParameterError(f"window must be odd and >= 1, got {window}")
    m = np.asarray(m, dtype=np.float64)
    kernel = np.full((window, window), 1.0 / (window * window))
    return ndimage.correlate(m, kernel, mode="nearest")


def _normalize(m: np.ndarray, degenerate_value: float) -> np.ndarray:
    lo, hi = m.min(), m.max()
    if hi == lo:
        return np.full_like(m, degenerate_value)
    return (m - lo) / (hi - lo)


def to_neutrosophic(image: GrayImage, cfg: NeutroConfig | None = None) -> NeutrosophicImage:
    """Convert a scan to its T/I/F representation.

    Degenerate inputs (constant local mean or constant deviation) map to
    T = F = 0.5 and I = 0: total object/background ignorance with zero
    indeterminacy spread, which also avoids dividing by zero.
    """
    if cfg is None:
        cfg = NeutroConfig()
    g = image.pixels
    g_bar = local_mean(g, cfg.window)
    t = _normalize(g_bar, 0.5)
    f = 1.0 - t
    delta = np.abs(g - g_bar)
    i = _normalize(delta, 0.0)
    return NeutrosophicImage(T=t, I=i, F=f)


def set_entropy(m: np.ndarray, bins: int = 256) -> float:
    """Shannon entropy (natural log) of a [0, 1] matrix histogrammed into
    equal-width bins."""
    m = np.asarray(m, dtype=np.float64)
    if m.size == 0:
        raise UndefinedInputError("entropy of an empty matrix is undefined")
    if bins < 1:
        raise ParameterError(f"bins must be >= 1, got {bins}")
    counts, _ = np.histogram(m.ravel(), bins=bins, range=(0.0, 1.0))
    p = counts[counts > 0] / m.size
    return float(-(p * np.log(p)).sum())


def total_entropy(ns: NeutrosophicImage, bins: int = 256) -> float:
    """Sum of the three set entropies."""
    return set_entropy(ns.T, bins) + set_entropy(ns.I, bins) + set_entropy(ns.F, bins)


def alpha_mean(ns: NeutrosophicImage, cfg: NeutroConfig | None = None) -> NeutrosophicImage:
    """Replace T/F by their local means where I >= alpha; rebuild I.

    The smoothed truth mean is taken over the full image, not only over
    replaced cells, and the new indeterminacy is the normalized deviation
    between that mean and its own local mean.
    """
    if cfg is None:
        cfg = NeutroConfig()
    t_bar = local_mean(ns.T, cfg.window)
    f_bar = local_mean(ns.F, cfg.window)
    replace = ns.I >= cfg.alpha
    t_a = np.where(replace, t_bar, ns.T)
    f_a = np.where(replace, f_bar, ns.F)
    t_bar_bar = local_mean(t_bar, cfg.window)
    delta_t = np.abs(t_bar - t_bar_bar)
    i_a = _normalize(delta_t, 0.0)
    return NeutrosophicImage(T=t_a, I=i_a, F=f_a)
