"""Boundary extraction as a minimum-weight path through the pixel grid.

Every pixel is a node joined to its 8 neighbors. An edge costs
``4*255 - score(n1) - score(n2) - brightness(n1)``, clamped from below so
the search stays nonnegative; the score is the vertical gradient (bright
edges in RPE mode, negated for dark-to-light transitions). Edges lying
entirely inside the first or last column get a near-zero weight so the
path can slide to its best start and end rows on its own. The graph is
never materialized: weights are computed on demand inside a compiled
search over the score matrix, which keeps memory flat and the search fast
even on full 496x768 scans.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DimensionError, TopologyError
from .scan_io import Layer

MAX_GRAY = 255.0


@dataclass
class WeightConfig:
    """Edge-weight settings for one boundary search.

    mode "rpe" subtracts the mean of up to d_above pixel intensities
    directly above a node (favors edges under bright tissue); mode
    "dark_to_light" negates the gradient score and uses no brightness
    term.
    """

    mode: str = "rpe"
    d_above: int = 10
    w_min: float = 1e-5
    weight_floor: float = 1e-5
    symmetric_brightness: bool = False

    def __post_init__(self):
        if self.mode not in ("rpe", "dark_to_light"):
            raise ValueError(f"unknown weight mode {self.mode!r}")
        if self.d_above < 1:
            raise ValueError("d_above must be >= 1")
        if self.w_min <= 0 or self.weight_floor <= 0:
            raise ValueError("w_min and weight_floor must be positive")

    @property
    def layer(self) -> Layer:
        return Layer.RPE if self.mode == "rpe" else Layer.CHOROID


@dataclass
class Boundary:
    """One row index per image column."""

    rows: np.ndarray
    layer: Layer

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.int64)

    def __len__(self) -> int:
        return self.rows.shape[0]


def node_gradient_score(grad: np.ndarray, mode: str) -> np.ndarray:
    """Score matrix for the given mode: identity for "rpe", negated for
    "dark_to_light" (maximal where a dark row sits above a bright one)."""
    if mode == "rpe":
        return np.asarray(grad, dtype=np.float64)
    if mode == "dark_to_light":
        return -np.asarray(grad, dtype=np.float64)
    raise ValueError(f"unknown weight mode {mode!r}")


def brightness_term(image: np.ndarray, d_above: int) -> np.ndarray:
    """Per-node mean of up to d_above intensities directly above the node.

    Nodes in the top row have no pixels above and get 0.
    """
    image = np.asarray(image, dtype=np.float64)
    rows, cols = image.shape
    cs = np.zeros((rows + 1, cols))
    np.cumsum(image, axis=0, out=cs[1:])
    out = np.zeros_like(image)
    for r in range(1, rows):
        k = min(r, d_above)
        out[r] = (cs[r] - cs[r - k]) / k
    return out


def edge_weight(score, image, n1, n2, cfg: WeightConfig) -> float:
    """Weight of the directed edge n1 -> n2: the 4*255 base minus both
    node scores and the brightness term, clamped at cfg.weight_floor."""
    r1, c1 = n1
    r2, c2 = n2
    if max(abs(r1 - r2), abs(c1 - c2)) != 1:
        raise TopologyError(f"{n1} and {n2} are not 8-neighbors")
    score = np.asarray(score, dtype=np.float64)
    if cfg.mode == "rpe":
        bt = brightness_term(image, cfg.d_above)
        b = (bt[r1, c1] + bt[r2, c2]) / 2.0 if cfg.symmetric_brightness else bt[r1, c1]
    else:
        b = 0.0
    raw = 4.0 * MAX_GRAY - score[r1, c1] - score[r2, c2] - b
    return max(raw, cfg.weight_floor)


@njit(cache=True)
def _search(score, bterm, w_min, weight_floor, symmetric):
    rows, cols = score.shape
    n = rows * cols
    target = n - 1
    dist = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int64)
    finished = np.zeros(n, dtype=np.uint8)
    cap = 8 * n + 16
    heap_d = np.empty(cap, dtype=np.float64)
    heap_id = np.empty(cap, dtype=np.int64)
    heap_d[0] = 0.0
    heap_id[0] = 0
    size = 1
    dist[0] = 0.0
    base = 4.0 * MAX_GRAY
    while size > 0:
        d = heap_d[0]
        u = heap_id[0]
        size -= 1
        heap_d[0] = heap_d[size]
        heap_id[0] = heap_id[size]
        i = 0
        while True:
            left = 2 * i + 1
            right = left + 1
            best = i
            if left < size and (
                heap_d[left] < heap_d[best]
                or (heap_d[left] == heap_d[best] and heap_id[left] < heap_id[best])
            ):
                best = left
            if right < size and (
                heap_d[right] < heap_d[best]
                or (heap_d[right] == heap_d[best] and heap_id[right] < heap_id[best])
            ):
                best = right
            if best == i:
                break
            heap_d[i], heap_d[best] = heap_d[best], heap_d[i]
            heap_id[i], heap_id[best] = heap_id[best], heap_id[i]
            i = best
        if finished[u] or d > dist[u]:
            continue
        finished[u] = 1
        if u == target:
            break
        ur = u // cols
        uc = u % cols
        for dr in range(-1, 2):
            for dc in range(-1, 2):
                if dr == 0 and dc == 0:
                    continue
                vr = ur + dr
                vc = uc + dc
                if vr < 0 or vr >= rows or vc < 0 or vc >= cols:
                    continue
                v = vr * cols + vc
                if finished[v]:
                    continue
                if (uc == 0 and vc == 0) or (uc == cols - 1 and vc == cols - 1):
                    w = w_min
                else:
                    if symmetric:
                        b = (bterm[ur, uc] + bterm[vr, vc]) / 2.0
                    else:
                        b = bterm[ur, uc]
                    raw = base - score[ur, uc] - score[vr, vc] - b
                    w = raw if raw > weight_floor else weight_floor
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    pred[v] = u
                    j = size
                    heap_d[j] = nd
                    heap_id[j] = v
                    size += 1
                    while j > 0:
                        parent = (j - 1) // 2
                        if heap_d[parent] > heap_d[j] or (
                            heap_d[parent] == heap_d[j]
                            and heap_id[parent] > heap_id[j]
                        ):
                            heap_d[parent], heap_d[j] = heap_d[j], heap_d[parent]
                            heap_id[parent], heap_id[j] = heap_id[j], heap_id[parent]
                            j = parent
                        else:
                            break
    return pred, dist[target]


def shortest_path(score, image, cfg: WeightConfig):
    """Minimum-weight corner-to-corner path.

    Returns (path, cost) where path is a list of (row, col) nodes from
    (0, 0) to (rows-1, cols-1) and cost is the summed edge weight.
    """
    score = np.ascontiguousarray(score, dtype=np.float64)
    rows, cols = score.shape
    if cols < 2:
        raise DimensionError("path search needs at least 2 columns")
    if cfg.mode == "rpe":
        bterm = brightness_term(image, cfg.d_above)
    else:
        bterm = np.zeros_like(score)
    pred, cost = _search(
        score, bterm, cfg.w_min, cfg.weight_floor, cfg.symmetric_brightness
    )
    node = rows * cols - 1
    backward = []
    while node != -1:
        backward.append((node // cols, node % cols))
        node = pred[node]
    backward.reverse()
    return backward, float(cost)


def path_to_rows(path, rows: int, cols: int) -> np.ndarray:
    """Collapse a node path to one row per column (rounded mean of the
    rows visited in that column; untouched columns are interpolated)."""
    sums = np.zeros(cols)
    counts = np.zeros(cols)
    for r, c in path:
        sums[c] += r
        counts[c] += 1
    out = np.empty(cols, dtype=np.int64)
    visited = counts > 0
    means = np.zeros(cols)
    means[visited] = sums[visited] / counts[visited]
    if not visited.all():
        # defensive only: a connected corner-to-corner path hits every column
        idx = np.arange(cols)
        means[~visited] = np.interp(idx[~visited], idx[visited], means[visited])
    out[:] = np.floor(means + 0.5).astype(np.int64)
    return np.clip(out, 0, rows - 1)


def shortest_boundary(score, image, cfg: WeightConfig) -> Boundary:
    """Extract a boundary as the minimum-weight path across the image."""
    score = np.asarray(score, dtype=np.float64)
    rows, cols = score.shape
    path, _ = shortest_path(score, image, cfg)
    return Boundary(rows=path_to_rows(path, rows, cols), layer=cfg.layer)
