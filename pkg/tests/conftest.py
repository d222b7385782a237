"""Shared test oracles: plain-Python (loop-based) reimplementations used to
cross-check the vectorized/compiled code paths, plus small file helpers.

The oracles intentionally avoid the library's own building blocks so a bug
cannot cancel itself out.
"""

import numpy as np
import pytest


def loop_local_mean(m, window):
    """Windowed mean with index clamping, written with bare loops."""
    m = np.asarray(m, dtype=float)
    rows, cols = m.shape
    half = window // 2
    out = np.zeros_like(m)
    for i in range(rows):
        for j in range(cols):
            acc = 0.0
            for di in range(-half, half + 1):
                for dj in range(-half, half + 1):
                    ii = min(max(i + di, 0), rows - 1)
                    jj = min(max(j + dj, 0), cols - 1)
                    acc += m[ii, jj]
            out[i, j] = acc / (window * window)
    return out


def _loop_normalize(m, degenerate):
    lo, hi = m.min(), m.max()
    if hi == lo:
        return np.full_like(m, degenerate)
    return (m - lo) / (hi - lo)


def loop_to_neutrosophic(g, window=5):
    g = np.asarray(g, dtype=float)
    g_bar = loop_local_mean(g, window)
    t = _loop_normalize(g_bar, 0.5)
    f = 1.0 - t
    delta = np.abs(g - g_bar)
    i = _loop_normalize(delta, 0.0)
    return t, i, f


def loop_alpha_mean(t, i, f, window=5, alpha=0.85):
    t_bar = loop_local_mean(t, window)
    f_bar = loop_local_mean(f, window)
    t_a = np.where(i >= alpha, t_bar, t)
    f_a = np.where(i >= alpha, f_bar, f)
    t_bar_bar = loop_local_mean(t_bar, window)
    delta_t = np.abs(t_bar - t_bar_bar)
    i_a = _loop_normalize(delta_t, 0.0)
    return t_a, i_a, f_a


def brute_force_min_cost(score, bterm, w_min, weight_floor):
    """Exhaustive minimum path cost (0,0) -> (rows-1, cols-1), depth-first
    with cost pruning. Weight arithmetic restates the contract inline.

    Pruning uses an admissible bound: any path still at column c must pay
    at least the sum over remaining columns of the cheapest single
    column-advancing edge (sideways moves only add cost).
    """
    score = np.asarray(score, dtype=float)
    rows, cols = score.shape
    base = 4.0 * 255.0
    target = (rows - 1, cols - 1)
    visited = np.zeros((rows, cols), dtype=bool)
    best = [np.inf]

    def weight(a, b):
        if (a[1] == 0 and b[1] == 0) or (a[1] == cols - 1 and b[1] == cols - 1):
            return w_min
        raw = base - score[a] - score[b] - bterm[a]
        return raw if raw > weight_floor else weight_floor

    suffix = np.zeros(cols)
    for c in range(cols - 2, -1, -1):
        cheapest = min(
            weight((r, c), (r + dr, c + 1))
            for r in range(rows)
            for dr in (-1, 0, 1)
            if 0 <= r + dr < rows
        )
        suffix[c] = suffix[c + 1] + cheapest

    def dfs(node, cost):
        if cost + suffix[node[1]] >= best[0]:
            return
        if node == target:
            best[0] = cost
            return
        r, c = node
        visited[r, c] = True
        nbrs = []
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if dr == 0 and dc == 0:
                    continue
                nr, nc = r + dr, c + dc
                if 0 <= nr < rows and 0 <= nc < cols and not visited[nr, nc]:
                    nxt = (nr, nc)
                    w = weight(node, nxt)
                    # explore by optimistic completion cost: near-optimal
                    # first descent makes the cost bound bite immediately
                    nbrs.append((w + suffix[nc], w, nxt))
        nbrs.sort()
        for _, w, nxt in nbrs:
            dfs(nxt, cost + w)
        visited[r, c] = False

    dfs((0, 0), 0.0)
    return best[0]


def write_pgm(path, pixels):
    pixels = np.asarray(pixels, dtype=np.uint8)
    rows, cols = pixels.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (cols, rows))
        fh.write(pixels.tobytes())


@pytest.fixture
def tmp_pgm(tmp_path):
    def factory(pixels, name="scan.pgm"):
        path = tmp_path / name
        write_pgm(path, pixels)
        return str(path)

    return factory
