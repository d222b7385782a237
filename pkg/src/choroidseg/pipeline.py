"""End-to-end segmentation: RPE search, flattening, choroid search,
thickness, evaluation, and manual correction."""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DegenerateSelectionError,
    DimensionError,
    DomainError,
    GeometryError,
    UndefinedMetricError,
)
from .filters import (
    FlattenMap,
    HomomorphicParams,
    flatten,
    gamma_correct,
    homomorphic_filter,
    unflatten_boundary,
    vertical_gradient,
)
from .graph_segment import Boundary, WeightConfig, node_gradient_score, shortest_boundary
from .neutrosophic import NeutroConfig, alpha_mean, to_neutrosophic
from .scan_io import GrayImage, LabelSet, Layer

MM_PER_PX_DEFAULT = 0.00387167


@dataclass
class PipelineConfig:
    neutro: NeutroConfig = field(default_factory=NeutroConfig)
    homomorphic: HomomorphicParams = field(default_factory=HomomorphicParams)
    gamma: float = 0.2
    weight_rpe: WeightConfig = field(default_factory=lambda: WeightConfig(mode="rpe"))
    weight_choroid: WeightConfig = field(
        default_factory=lambda: WeightConfig(mode="dark_to_light")
    )
    roi_offset_px: int = 5
    apply_alpha_mean: bool = False
    enhance_order: str = "gamma_first"  # or "homomorphic_first"
    min_gradient_energy: float = 1.0

    def __post_init__(self):
        if self.roi_offset_px < 0:
            raise ValueError("roi_offset_px must be >= 0")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.enhance_order not in ("gamma_first", "homomorphic_first"):
            raise ValueError(f"unknown enhance_order {self.enhance_order!r}")


@dataclass
class ThicknessProfile:
    per_column_px: np.ndarray
    per_column_mm: np.ndarray
    mean_px: float
    mean_mm: float


@dataclass
class SegmentationResult:
    rpe: Boundary
    choroid: Boundary
    flatten_map: FlattenMap
    thickness: ThicknessProfile
    config_snapshot: dict
    stage_timings: dict
    flags: list = field(default_factory=list)


@dataclass
class ErrorReport:
    layer: Layer
    n_points: int
    mean_unsigned_px: float
    mean_unsigned_mm: float
    per_point: list  # (col, labeled_row, predicted_row, abs_diff)


def _rpe_score(image: GrayImage, cfg: PipelineConfig) -> np.ndarray:
    """Gradient score for the RPE search: truth set rescaled to the 0..255
    gray range (keeps the 4*255 weight base coherent), then the vertical
    gradient."""
    ns = to_neutrosophic(image, cfg.neutro)
    if cfg.apply_alpha_mean:
        ns = alpha_mean(ns, cfg.neutro)
    return vertical_gradient(ns.T * 255.0)


def detect_rpe(image: GrayImage, cfg: PipelineConfig | None = None) -> Boundary:
    """Locate the bright-over-dark retinal edge across the scan."""
    if cfg is None:
        cfg = PipelineConfig()
    score = _rpe_score(image, cfg)
    return shortest_boundary(score, image.pixels, cfg.weight_rpe)


def _enhance_roi(f_scaled: np.ndarray, cfg: PipelineConfig) -> np.ndarray:
    if cfg.enhance_order == "gamma_first":
        return homomorphic_filter(gamma_correct(f_scaled, cfg.gamma), cfg.homomorphic)
    return gamma_correct(homomorphic_filter(f_scaled, cfg.homomorphic), cfg.gamma)


def detect_choroid(
    image: GrayImage, rpe: Boundary, cfg: PipelineConfig | None = None
) -> tuple[Boundary, FlattenMap]:
    """Locate the dark-to-light lower choroid edge below a detected RPE.

    The scan is flattened on the RPE, a guard band of roi_offset_px rows
    is skipped (so the RPE's own edge cannot recapture the search), and
    the falsity set of the remaining region is enhanced (gamma, then the
    illumination filter by default). The falsity set inverts contrast, so
    the enhanced region is complemented back to scan polarity before the
    gradient; the dark-to-light mode then negates that gradient, which is
    maximal exactly at the dark-over-bright transition.
    """
    if cfg is None:
        cfg = PipelineConfig()
    flat, fmap = flatten(image, rpe)
    roi_start = fmap.pivot_row + cfg.roi_offset_px
    if flat.rows - roi_start < 3:
        deep = np.flatnonzero(np.asarray(rpe.rows) + cfg.roi_offset_px >= flat.rows - 3)
        raise GeometryError(
            "no room below the RPE for a choroid search "
            f"(ROI would span {max(flat.rows - roi_start, 0)} rows; "
            f"deepest columns: {deep[:8].tolist()})"
        )
    roi = GrayImage(flat.pixels[roi_start:, :], image.axial_resolution_um)
    ns = to_neutrosophic(roi, cfg.neutro)
    enhanced = _enhance_roi(ns.F * 255.0, cfg)
    grad = vertical_gradient(255.0 - enhanced)
    score = node_gradient_score(grad, cfg.weight_choroid.mode)
    local = shortest_boundary(score, roi.pixels, cfg.weight_choroid)
    flat_rows = local.rows + roi_start
    original_rows = unflatten_boundary(flat_rows, fmap)
    return Boundary(rows=original_rows, layer=Layer.CHOROID), fmap


def thickness_profile(
    rpe: Boundary, choroid: Boundary, resolution_um: float = 3.87167
) -> ThicknessProfile:
    """Per-column choroid thickness in pixels and millimeters."""
    if len(rpe) != len(choroid):
        raise DimensionError("boundary lengths differ")
    px = choroid.rows - rpe.rows
    mm_per_px = resolution_um / 1000.0
    mm = px * mm_per_px
    return ThicknessProfile(
        per_column_px=px,
        per_column_mm=mm,
        mean_px=float(px.mean()),
        mean_mm=float(px.mean() * mm_per_px),
    )


def segment(image: GrayImage, cfg: PipelineConfig | None = None) -> SegmentationResult:
    """Run the full chain and collect boundaries, thickness, and timings.

    Results violating the choroid-below-RPE order, or coming from a scan
    with no usable gradient structure, are flagged rather than rejected:
    the operator still needs the draft boundary to correct it.
    """
    if cfg is None:
        cfg = PipelineConfig()
    flags = []
    timings = {}
    t0 = time.perf_counter()
    score = _rpe_score(image, cfg)
    if float(np.abs(score).mean()) < cfg.min_gradient_energy:
        flags.append("low_gradient_energy")
    rpe = shortest_boundary(score, image.pixels, cfg.weight_rpe)
    timings["rpe_detection_s"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    try:
        choroid, fmap = detect_choroid(image, rpe, cfg)
    except GeometryError:
        if "low_gradient_energy" not in flags:
            raise
        # degenerate scan: keep a correctable draft instead of refusing
        _, fmap = flatten(image, rpe)
        choroid = Boundary(rows=rpe.rows.copy(), layer=Layer.CHOROID)
        flags.append("choroid_search_failed")
    timings["choroid_detection_s"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    profile = thickness_profile(rpe, choroid, image.axial_resolution_um)
    timings["thickness_s"] = time.perf_counter() - t2
    timings["total_s"] = time.perf_counter() - t0

    if np.any(choroid.rows < rpe.rows):
        flags.append("boundary_order_violation")
    return SegmentationResult(
        rpe=rpe,
        choroid=choroid,
        flatten_map=fmap,
        thickness=profile,
        config_snapshot=config_to_dict(cfg),
        stage_timings=timings,
        flags=flags,
    )


def apply_manual_correction(b: Boundary, a_point, b_point) -> Boundary:
    """Replace the boundary between two user-picked points by the straight
    line through them (rows rounded to the nearest integer). Columns
    outside [a.col, b.col] are untouched."""
    (ac, ar), (bc, br) = a_point, b_point
    if ac > bc:
        (ac, ar), (bc, br) = (bc, br), (ac, ar)
    if ac == bc:
        raise DegenerateSelectionError("correction endpoints share a column")
    if not (0 <= ac < len(b) and 0 <= bc < len(b)):
        raise DimensionError("correction endpoints outside boundary columns")
    rows = b.rows.copy()
    span = bc - ac
    for c in range(ac, bc + 1):
        value = ar + (br - ar) * (c - ac) / span
        rows[c] = int(np.floor(value + 0.5))
    return Boundary(rows=rows, layer=b.layer)


def evaluate(b: Boundary, labels: LabelSet, resolution_um: float = 3.87167) -> ErrorReport:
    """Mean unsigned row error of a boundary against sparse label points."""
    if labels.layer != b.layer:
        raise DomainError(
            f"label layer {labels.layer.value} does not match boundary {b.layer.value}"
        )
    if not labels.points:
        raise UndefinedMetricError("no label points: error metric undefined")
    per_point = []
    for col, row in labels.points:
        if not 0 <= col < len(b):
            raise DomainError(f"label column {col} outside scan width {len(b)}")
        predicted = int(b.rows[col])
        per_point.append((col, row, predicted, abs(predicted - row)))
    mean_px = float(np.mean([p[3] for p in per_point]))
    return ErrorReport(
        layer=b.layer,
        n_points=len(per_point),
        mean_unsigned_px=mean_px,
        mean_unsigned_mm=mean_px * (resolution_um / 1000.0),
        per_point=per_point,
    )


LINEAR_BLUE_RED = "linear-blue-red"


def _blue_red(t: np.ndarray) -> np.ndarray:
    """Map normalized values to a linear blue->red ramp (documented default
    colormap: cold = pure blue, hot = pure red)."""
    t = np.clip(t, 0.0, 1.0)
    rgb = np.zeros(t.shape + (3,), dtype=np.uint8)
    rgb[..., 0] = np.rint(255.0 * t)
    rgb[..., 2] = np.rint(255.0 * (1.0 - t))
    return rgb


def thickness_map(results: list, out_path: str) -> None:
    """Write a scan-by-column thickness matrix as CSV plus a color raster.

    The raster maps millimeters linearly onto the blue->red ramp; the
    min/max used for the mapping land in a ``<out>.minmax.txt`` sidecar.
    A constant matrix maps to the midpoint color.
    """
    from PIL import Image as PILImage

    if not results:
        raise DimensionError("thickness map needs at least one result")
    widths = {len(r.thickness.per_column_mm) for r in results}
    if len(widths) != 1:
        raise DimensionError(f"ragged column counts across scans: {sorted(widths)}")
    matrix = np.stack([r.thickness.per_column_mm for r in results])
    csv_path = out_path + ".csv"
    np.savetxt(csv_path, matrix, delimiter=",", fmt="%.8f")
    lo, hi = float(matrix.min()), float(matrix.max())
    if hi > lo:
        t = (matrix - lo) / (hi - lo)
    else:
        t = np.full_like(matrix, 0.5)
    PILImage.fromarray(_blue_red(t), mode="RGB").save(out_path + ".png")
    with open(out_path + ".minmax.txt", "w", encoding="utf-8") as fh:
        fh.write(f"colormap={LINEAR_BLUE_RED}\nmin_mm={lo:.8f}\nmax_mm={hi:.8f}\n")


def write_thickness_csv(profile: ThicknessProfile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("col,thickness_px,thickness_mm\n")
        for c, (px, mm) in enumerate(zip(profile.per_column_px, profile.per_column_mm)):
            fh.write(f"{c},{int(px)},{float(mm)!r}\n")


# --- config and result (de)serialization -------------------------------

def config_to_dict(cfg: PipelineConfig) -> dict:
    """Flat key/value snapshot; the same keys work in config files."""
    return {
        "window": cfg.neutro.window,
        "alpha": cfg.neutro.alpha,
        "apply_alpha_mean": cfg.apply_alpha_mean,
        "gamma": cfg.gamma,
        "sigma": cfg.homomorphic.sigma,
        "gamma_h": cfg.homomorphic.gamma_h,
        "gamma_l": cfg.homomorphic.gamma_l,
        "roi_offset_px": cfg.roi_offset_px,
        "enhance_order": cfg.enhance_order,
        "rpe_d_above": cfg.weight_rpe.d_above,
        "rpe_w_min": cfg.weight_rpe.w_min,
        "rpe_weight_floor": cfg.weight_rpe.weight_floor,
        "choroid_w_min": cfg.weight_choroid.w_min,
        "choroid_weight_floor": cfg.weight_choroid.weight_floor,
        "min_gradient_energy": cfg.min_gradient_energy,
    }


def config_from_dict(values: dict) -> PipelineConfig:
    base = PipelineConfig()
    known = set(config_to_dict(base))
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    d = {**config_to_dict(base), **values}
    return PipelineConfig(
        neutro=NeutroConfig(window=int(d["window"]), alpha=float(d["alpha"])),
        homomorphic=HomomorphicParams(
            sigma=float(d["sigma"]),
            gamma_h=float(d["gamma_h"]),
            gamma_l=float(d["gamma_l"]),
        ),
        gamma=float(d["gamma"]),
        weight_rpe=WeightConfig(
            mode="rpe",
            d_above=int(d["rpe_d_above"]),
            w_min=float(d["rpe_w_min"]),
            weight_floor=float(d["rpe_weight_floor"]),
        ),
        weight_choroid=WeightConfig(
            mode="dark_to_light",
            w_min=float(d["choroid_w_min"]),
            weight_floor=float(d["choroid_weight_floor"]),
        ),
        roi_offset_px=int(d["roi_offset_px"]),
        apply_alpha_mean=bool(d["apply_alpha_mean"]),
        enhance_order=str(d["enhance_order"]),
        min_gradient_energy=float(d["min_gradient_energy"]),
    )


def result_to_dict(result: SegmentationResult) -> dict:
    return {
        "rpe": result.rpe.rows.tolist(),
        "choroid": result.choroid.rows.tolist(),
        "flatten": {
            "pivot_row": int(result.flatten_map.pivot_row),
            "shifts": result.flatten_map.shifts.tolist(),
        },
        "thickness": {
            "per_column_px": result.thickness.per_column_px.tolist(),
            "per_column_mm": result.thickness.per_column_mm.tolist(),
            "mean_px": result.thickness.mean_px,
            "mean_mm": result.thickness.mean_mm,
        },
        "config": result.config_snapshot,
        "flags": list(result.flags),
        "stage_timings": dict(result.stage_timings),
    }


def result_from_dict(d: dict) -> SegmentationResult:
    rpe = Boundary(rows=np.asarray(d["rpe"], dtype=np.int64), layer=Layer.RPE)
    choroid = Boundary(
        rows=np.asarray(d["choroid"], dtype=np.int64), layer=Layer.CHOROID
    )
    thickness = ThicknessProfile(
        per_column_px=np.asarray(d["thickness"]["per_column_px"], dtype=np.int64),
        per_column_mm=np.asarray(d["thickness"]["per_column_mm"], dtype=np.float64),
        mean_px=float(d["thickness"]["mean_px"]),
        mean_mm=float(d["thickness"]["mean_mm"]),
    )
    return SegmentationResult(
        rpe=rpe,
        choroid=choroid,
        flatten_map=FlattenMap(
            shifts=np.asarray(d["flatten"]["shifts"], dtype=np.int64),
            pivot_row=int(d["flatten"]["pivot_row"]),
        ),
        thickness=thickness,
        config_snapshot=dict(d["config"]),
        stage_timings=dict(d["stage_timings"]),
        flags=list(d["flags"]),
    )


def recompute_after_correction(
    result: SegmentationResult, layer: Layer, corrected: Boundary, resolution_um: float
) -> SegmentationResult:
    """New result with one boundary replaced and thickness/flags refreshed
    (timings and config snapshot are kept from the original run)."""
    rpe = corrected if layer == Layer.RPE else result.rpe
    choroid = corrected if layer == Layer.CHOROID else result.choroid
    profile = thickness_profile(rpe, choroid, resolution_um)
    flags = [f for f in result.flags if f != "boundary_order_violation"]
    if np.any(choroid.rows < rpe.rows):
        flags.append("boundary_order_violation")
    return replace(
        result, rpe=rpe, choroid=choroid, thickness=profile, flags=flags
    )
