"""Spatially-variant structuring elements grown per pixel on a pilot image.

An amoeba at pixel x is the set of pixels reachable from x within a distance
budget r, where a path step between 8-connected neighbors costs
1 + lam * |pilot intensity difference|.  Flat regions let the amoeba spread
to a full square; contour lines are expensive to cross, so the amoeba hugs
them.  The modified variant grows the member set one pixel outward (set
dilation by the 5-point diamond, capped at the Chebyshev ball of radius
ceil(r)), which lets edge detectors see across a contour.

Distances are computed by Dijkstra region growing with a binary heap,
restricted to the Chebyshev window of radius floor(r): every step costs at
least 1, so no pixel farther than floor(r) steps can be within budget, and
any shortest path that leaves the window already exceeds the budget.
Membership uses the exact accumulated cost, no epsilon.

Per pixel the work is O(r^2 log r) (window graph of O(r^2) nodes and edges,
each heap operation O(log r^2)); a whole field costs O(H*W*r^2*log r).
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange

from .image import as_image

_CAP_CHEBYSHEV = 0
_CAP_EUCLIDEAN = 1

_CAP_NAMES = {"chebyshev": _CAP_CHEBYSHEV, "euclidean": _CAP_EUCLIDEAN}


@dataclass(frozen=True)
class AmoebaParams:
    """Growth parameters: lam weighs intensity differences, radius is the budget."""

    lam: float
    radius: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.radius <= 0:
            raise ValueError("radius must be > 0")


@dataclass(frozen=True)
class Amoeba:
    """One pixel's structuring element: its center and absolute member coords."""

    center: tuple[int, int]  # (x, y)
    members: frozenset  # of (x, y)


@dataclass(frozen=True)
class AmoebaField:
    """Per-pixel amoebas for a whole image, as window-relative boolean masks.

    masks[y, x, a, b] says whether pixel
    (x + b - window_radius, y + a - window_radius) belongs to the amoeba
    centered at (x, y).  Mask cells are only ever set for in-image pixels.
    """

    masks: np.ndarray  # bool, shape (h, w, 2*window_radius+1, 2*window_radius+1)
    window_radius: int
    params: AmoebaParams
    modified: bool
    pilot_digest: str = field(compare=False, default="")

    @property
    def shape(self) -> tuple[int, int]:
        return self.masks.shape[:2]

    def member_counts(self) -> np.ndarray:
        return self.masks.sum(axis=(2, 3))

    def amoeba_at(self, x: int, y: int) -> Amoeba:
        h, w = self.shape
        if not (0 <= x < w and 0 <= y < h):
            raise IndexError(f"pixel ({x}, {y}) outside {w}x{h} field")
        rw = self.window_radius
        aa, bb = np.nonzero(self.masks[y, x])
        members = frozenset(
            (int(x + b - rw), int(y + a - rw)) for a, b in zip(aa, bb)
        )
        return Amoeba(center=(x, y), members=members)


def pixel_distance(pilot, a: tuple[int, int], b: tuple[int, int]) -> float:
    """Absolute intensity difference between two pixels of the pilot image."""
    img = as_image(pilot)
    h, w = img.shape
    for x, y in (a, b):
        if not (0 <= x < w and 0 <= y < h):
            raise IndexError(f"pixel ({x}, {y}) outside {w}x{h} image")
    return abs(float(img[a[1], a[0]]) - float(img[b[1], b[0]]))


@njit(cache=True)
def _heap_push(heap_cost, heap_node, size, cost, node):
    # Binary min-heap ordered by (cost, node index); the index tie-break makes
    # traversal order fully deterministic.
    i = size
    heap_cost[i] = cost
    heap_node[i] = node
    while i > 0:
        parent = (i - 1) >> 1
        pc = heap_cost[parent]
        pn = heap_node[parent]
        if cost < pc or (cost == pc and node < pn):
            heap_cost[i] = pc
            heap_node[i] = pn
            heap_cost[parent] = cost
            heap_node[parent] = node
            i = parent
        else:
            break
    return size + 1


@njit(cache=True)
def _heap_pop(heap_cost, heap_node, size):
    top_c = heap_cost[0]
    top_n = heap_node[0]
    size -= 1
    if size > 0:
        c = heap_cost[size]
        n = heap_node[size]
        i = 0
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            right = child + 1
            if right < size and (
                heap_cost[right] < heap_cost[child]
                or (heap_cost[right] == heap_cost[child] and heap_node[right] < heap_node[child])
            ):
                child = right
            bc = heap_cost[child]
            bn = heap_node[child]
            if bc < c or (bc == c and bn < n):
                heap_cost[i] = bc
                heap_node[i] = bn
                i = child
            else:
                break
        heap_cost[i] = c
        heap_node[i] = n
    return top_c, top_n, size


@njit(cache=True)
def _grow_distances(pilot, cy, cx, big_r, lam, r, dist, heap_cost, heap_node):
    # Dijkstra over the (2*big_r+1)^2 window around (cy, cx), lazy-deletion
    # heap, stopping once the cheapest frontier node exceeds the budget r.
    h, w = pilot.shape
    side = 2 * big_r + 1
    n = side * side
    for i in range(n):
        dist[i] = np.inf
    start = big_r * side + big_r
    dist[start] = 0.0
    size = _heap_push(heap_cost, heap_node, 0, 0.0, start)
    while size > 0:
        c, u, size = _heap_pop(heap_cost, heap_node, size)
        if c > dist[u]:
            continue
        if c > r:
            break
        uy = u // side
        ux = u % side
        ay = cy + uy - big_r
        ax = cx + ux - big_r
        pu = pilot[ay, ax]
        for dy in range(-1, 2):
            vy = uy + dy
            if vy < 0 or vy >= side:
                continue
            by = ay + dy
            if by < 0 or by >= h:
                continue
            for dx in range(-1, 2):
                if dy == 0 and dx == 0:
                    continue
                vx = ux + dx
                if vx < 0 or vx >= side:
                    continue
                bx = ax + dx
                if bx < 0 or bx >= w:
                    continue
                diff = pilot[by, bx] - pu
                if diff < 0.0:
                    diff = -diff
                nd = c + 1.0 + lam * diff
                v = vy * side + vx
                if nd < dist[v]:
                    dist[v] = nd
                    size = _heap_push(heap_cost, heap_node, size, nd, v)


@njit(cache=True)
def _expand_modified(orig, mask_out, cy, cx, big_r, win_r, cap_kind, cap_r, h, w):
    # Set-dilate the original member mask by the 5-point diamond into the
    # (possibly larger) output window, keeping only in-image pixels within
    # the cap ball of radius cap_r around the center.
    side = 2 * big_r + 1
    wside = 2 * win_r + 1
    shift = win_r - big_r
    for a in range(side):
        for b in range(side):
            if not orig[a, b]:
                continue
            for d in range(5):
                if d == 0:
                    da, db = 0, 0
                elif d == 1:
                    da, db = -1, 0
                elif d == 2:
                    da, db = 1, 0
                elif d == 3:
                    da, db = 0, -1
                else:
                    da, db = 0, 1
                ta = a + shift + da
                tb = b + shift + db
                if ta < 0 or ta >= wside or tb < 0 or tb >= wside:
                    continue
                oy = ta - win_r
                ox = tb - win_r
                if cap_kind == 1 and oy * oy + ox * ox > cap_r * cap_r:
                    continue
                ty = cy + oy
                tx = cx + ox
                if ty < 0 or ty >= h or tx < 0 or tx >= w:
                    continue
                mask_out[ta, tb] = True


@njit(parallel=True, cache=True)
def _field_kernel(pilot, r, lam, modified, cap_kind):
    h, w = pilot.shape
    big_r = int(np.floor(r))
    win_r = int(np.ceil(r)) if modified else big_r
    side = 2 * big_r + 1
    wside = 2 * win_r + 1
    n = side * side
    masks = np.zeros((h, w, wside, wside), dtype=np.bool_)
    cap_r = int(np.ceil(r))
    for y in prange(h):
        dist = np.empty(n, dtype=np.float64)
        heap_cost = np.empty(9 * n + 16, dtype=np.float64)
        heap_node = np.empty(9 * n + 16, dtype=np.int64)
        orig = np.empty((side, side), dtype=np.bool_)
        for x in range(w):
            _grow_distances(pilot, y, x, big_r, lam, r, dist, heap_cost, heap_node)
            if modified:
                for a in range(side):
                    for b in range(side):
                        orig[a, b] = dist[a * side + b] <= r
                _expand_modified(orig, masks[y, x], y, x, big_r, win_r, cap_kind, cap_r, h, w)
            else:
                for a in range(side):
                    for b in range(side):
                        if dist[a * side + b] <= r:
                            masks[y, x, a, b] = True
    return masks


def _single_masks(pilot, cx, cy, params, modified, cap_kind):
    h, w = pilot.shape
    big_r = int(np.floor(params.radius))
    win_r = int(np.ceil(params.radius)) if modified else big_r
    side = 2 * big_r + 1
    n = side * side
    dist = np.empty(n, dtype=np.float64)
    heap_cost = np.empty(9 * n + 16, dtype=np.float64)
    heap_node = np.empty(9 * n + 16, dtype=np.int64)
    _grow_distances(pilot, cy, cx, big_r, params.lam, params.radius, dist, heap_cost, heap_node)
    orig = (dist <= params.radius).reshape(side, side)
    if not modified:
        return orig, big_r
    out = np.zeros((2 * win_r + 1, 2 * win_r + 1), dtype=np.bool_)
    _expand_modified(
        orig, out, cy, cx, big_r, win_r, cap_kind, int(np.ceil(params.radius)), h, w
    )
    return out, win_r


def _mask_to_members(mask, cx, cy, win_r):
    aa, bb = np.nonzero(mask)
    return frozenset((int(cx + b - win_r), int(cy + a - win_r)) for a, b in zip(aa, bb))


def _check_center(pilot, center):
    h, w = pilot.shape
    x, y = center
    if not (0 <= x < w and 0 <= y < h):
        raise IndexError(f"center ({x}, {y}) outside {w}x{h} image")
    return int(x), int(y)


def compute_amoeba(pilot, center: tuple[int, int], params: AmoebaParams) -> Amoeba:
    """Grow the original amoeba at one pixel: {y : path distance <= radius}."""
    img = as_image(pilot)
    x, y = _check_center(img, center)
    mask, win_r = _single_masks(img, x, y, params, False, _CAP_CHEBYSHEV)
    return Amoeba(center=(x, y), members=_mask_to_members(mask, x, y, win_r))


def compute_modified_amoeba(
    pilot, center: tuple[int, int], params: AmoebaParams, norm: str = "chebyshev"
) -> Amoeba:
    """Grow the modified amoeba: original, set-dilated one pixel, capped.

    The cap keeps members within distance ceil(radius) of the center under
    the chosen norm (chebyshev by default; euclidean available for
    comparison).
    """
    img = as_image(pilot)
    x, y = _check_center(img, center)
    mask, win_r = _single_masks(img, x, y, params, True, _CAP_NAMES[norm])
    return Amoeba(center=(x, y), members=_mask_to_members(mask, x, y, win_r))


def compute_amoeba_field(
    pilot, params: AmoebaParams, modified: bool = True, norm: str = "chebyshev"
) -> AmoebaField:
    """Grow an amoeba at every pixel of the pilot image.

    Rows are processed in parallel; each pixel's amoeba depends only on the
    read-only pilot, so the result is identical to sequential evaluation.
    """
    img = as_image(pilot)
    masks = _field_kernel(img, float(params.radius), float(params.lam), modified, _CAP_NAMES[norm])
    win_r = (masks.shape[2] - 1) // 2
    digest = hashlib.sha256(img.tobytes()).hexdigest()
    return AmoebaField(
        masks=masks,
        window_radius=win_r,
        params=params,
        modified=modified,
        pilot_digest=digest,
    )
