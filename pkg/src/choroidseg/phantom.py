"""Synthetic three-band B-scan phantoms with known ground truth.

Layout, top to bottom: dark vitreous, a bright band standing in for the
RPE/photoreceptor complex, a dark choroid band, then a brighter sclera.
Ground truth for each layer is the first row BELOW the corresponding
band (the transition row that the gradient search locks onto). Optional
dark disks straddling the lower transition mimic choroidal vessels, and
Gaussian speckle mimics acquisition noise.
"""

from dataclasses import dataclass, field

import numpy as np

from .scan_io import GrayImage


@dataclass
class PhantomTruth:
    image: GrayImage
    rpe_rows: np.ndarray       # first choroid row per column
    choroid_rows: np.ndarray   # first sclera row per column
    vessels: list = field(default_factory=list)  # (row, col, radius)


def make_phantom(
    rows: int = 496,
    cols: int = 768,
    rng: np.random.Generator | None = None,
    *,
    band_top: float | None = None,
    band_height: int | None = None,
    slope: float | None = None,
    choroid_thickness: float | None = None,
    n_vessels: int | None = None,
    noise_sigma: float | None = None,
) -> PhantomTruth:
    """Generate a phantom; unset parameters are drawn from sane ranges.

    Slopes stay below 0.1 px/col and speckle sigma below 8, matching what
    the search tolerates on clinical scans.
    """
    if rng is None:
        rng = np.random.default_rng()
    if band_top is None:
        band_top = rng.uniform(0.22, 0.42) * rows
    if band_height is None:
        band_height = int(rng.integers(10, 17))
    if slope is None:
        slope = rng.uniform(-0.1, 0.1)
    if choroid_thickness is None:
        choroid_thickness = rng.uniform(0.13, 0.22) * rows
    if n_vessels is None:
        n_vessels = int(rng.integers(6, 11))
    if noise_sigma is None:
        noise_sigma = rng.uniform(3.0, 5.0)

    c = np.arange(cols)
    wobble = 2.0 * np.sin(2.0 * np.pi * c / cols * rng.uniform(0.5, 2.0))
    top = band_top + slope * (c - cols / 2) + wobble
    top = np.clip(top, 10, rows * 0.62)
    rpe_rows = np.round(top).astype(np.int64) + band_height
    thick = choroid_thickness + rng.uniform(-0.05, 0.05) * (c - cols / 2) / 10.0
    choroid_rows = rpe_rows + np.round(thick).astype(np.int64)
    choroid_rows = np.minimum(choroid_rows, rows - 20)

    img = np.full((rows, cols), 25.0)
    r = np.arange(rows)[:, None]
    band_start = rpe_rows - band_height
    img[(r >= band_start[None, :]) & (r < rpe_rows[None, :])] = 205.0
    img[(r >= rpe_rows[None, :]) & (r < choroid_rows[None, :])] = 90.0
    img[r >= choroid_rows[None, :]] = 112.0

    # vessel lumens sit just above the lower transition and are darker
    # than the stroma by more than the stroma-sclera step, so their rims
    # out-contrast the true boundary unless gamma compression tames them
    vessels = []
    rr, cc = np.ogrid[:rows, :cols]
    for _ in range(n_vessels):
        vc = int(rng.integers(int(cols * 0.05), int(cols * 0.95)))
        radius = int(rng.integers(9, 17))
        vr = int(choroid_rows[vc] - radius - rng.integers(1, 6))
        disk = (rr - vr) ** 2 + (cc - vc) ** 2 <= radius**2
        img[disk] = 8.0
        vessels.append((vr, vc, radius))

    if noise_sigma > 0:
        img = img + rng.normal(0.0, noise_sigma, size=img.shape)
    img = np.clip(img, 0.0, 255.0)
    return PhantomTruth(
        image=GrayImage(img),
        rpe_rows=rpe_rows,
        choroid_rows=choroid_rows,
        vessels=vessels,
    )
