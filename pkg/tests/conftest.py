"""Shared brute-force oracles for the test suite.

Everything here is deliberately naive (nested loops, dense all-pairs
shortest paths) so the fast implementations are checked against independent
computations.
"""
from __future__ import annotations

import math

import numpy as np


def brute_dilate(img: np.ndarray, se) -> np.ndarray:
    h, w = img.shape
    out = np.empty_like(img)
    for y in range(h):
        for x in range(w):
            vals = []
            for dx, dy in se:
                ty, tx = y + dy, x + dx
                if 0 <= ty < h and 0 <= tx < w:
                    vals.append(img[ty, tx])
            out[y, x] = max(vals)
    return out


def brute_erode(img: np.ndarray, se) -> np.ndarray:
    h, w = img.shape
    out = np.empty_like(img)
    for y in range(h):
        for x in range(w):
            vals = []
            for dx, dy in se:
                ty, tx = y + dy, x + dx
                if 0 <= ty < h and 0 <= tx < w:
                    vals.append(img[ty, tx])
            out[y, x] = min(vals)
    return out


def floyd_warshall_distances(pilot: np.ndarray, lam: float) -> np.ndarray:
    """All-pairs shortest-path distances on the 8-connected pixel graph.

    Node order is row-major; edge weight 1 + lam * |intensity difference|.
    """
    h, w = pilot.shape
    n = h * w
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for y in range(h):
        for x in range(w):
            u = y * w + x
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dx == 0 and dy == 0:
                        continue
                    ty, tx = y + dy, x + dx
                    if 0 <= ty < h and 0 <= tx < w:
                        v = ty * w + tx
                        dist[u, v] = 1.0 + lam * abs(pilot[y, x] - pilot[ty, tx])
    for k in range(n):
        dist = np.minimum(dist, dist[:, k, None] + dist[None, k, :])
    return dist


def oracle_amoeba(pilot: np.ndarray, center, lam: float, r: float, dist=None) -> frozenset:
    """Original amoeba membership from the all-pairs oracle: {y : d(x, y) <= r}."""
    h, w = pilot.shape
    if dist is None:
        dist = floyd_warshall_distances(pilot, lam)
    cx, cy = center
    row = dist[cy * w + cx]
    return frozenset(
        (x, y) for y in range(h) for x in range(w) if row[y * w + x] <= r
    )


def oracle_modified_amoeba(
    pilot: np.ndarray, center, lam: float, r: float, dist=None
) -> frozenset:
    """Set-dilate the oracle amoeba by the 5-point diamond, cap by the
    Chebyshev ball of radius ceil(r), clip to the image."""
    h, w = pilot.shape
    base = oracle_amoeba(pilot, center, lam, r, dist=dist)
    cx, cy = center
    cap = math.ceil(r)
    out = set()
    for x, y in base:
        for dx, dy in ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)):
            tx, ty = x + dx, y + dy
            if not (0 <= tx < w and 0 <= ty < h):
                continue
            if max(abs(tx - cx), abs(ty - cy)) > cap:
                continue
            out.add((tx, ty))
    return frozenset(out)


def oracle_rank(img: np.ndarray, field, beta: float, largest: bool) -> np.ndarray:
    """Per-pixel rank filter via plain python sorting over the member values."""
    h, w = img.shape
    out = np.empty_like(img)
    for y in range(h):
        for x in range(w):
            members = field.amoeba_at(x, y).members
            vals = sorted(img[my, mx] for mx, my in members)
            m = len(vals)
            k = math.ceil(beta * m * (1.0 - 1e-12))
            k = min(max(k, 1), m)
            out[y, x] = vals[m - k] if largest else vals[k - 1]
    return out


def brute_nearest_distance(mask: np.ndarray) -> np.ndarray:
    """Euclidean distance from every pixel to the nearest True pixel."""
    h, w = mask.shape
    pts = np.argwhere(mask)
    out = np.full((h, w), np.inf)
    for y in range(h):
        for x in range(w):
            for py, px in pts:
                d = math.hypot(y - py, x - px)
                if d < out[y, x]:
                    out[y, x] = d
    return out
