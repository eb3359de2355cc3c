"""Flat spatially-invariant morphology and the four classic edge detectors.

Dilation/erosion take the max/min over the structuring element's offsets,
clipped to the image domain.  Detectors: morphological gradient (MG),
blur-minimization (BM), alpha-trimmed morphological (ATM), and reduced-noise
morphological (RNM).  Edge maps stay real-valued; thresholding is the
evaluator's job.
"""
from __future__ import annotations

import numpy as np

from .filters import alpha_trimmed_mean_filter, mean_filter
from .image import as_image, make_square_se


def _overlay(out, img, dx, dy, op):
    h, w = img.shape
    y0, y1 = max(0, -dy), min(h, h - dy)
    x0, x1 = max(0, -dx), min(w, w - dx)
    if y0 >= y1 or x0 >= x1:
        return
    dst = out[y0:y1, x0:x1]
    src = img[y0 + dy : y1 + dy, x0 + dx : x1 + dx]
    op(dst, src, out=dst)


def dilate(image, se) -> np.ndarray:
    """Max over the structuring element, out-of-bounds offsets absent."""
    img = as_image(image)
    if not se:
        raise ValueError("structuring element must be nonempty")
    out = np.full_like(img, -np.inf)
    for dx, dy in se:
        _overlay(out, img, dx, dy, np.maximum)
    if np.any(np.isneginf(out)):
        raise ValueError("structuring element leaves a pixel with an empty window")
    return out


def erode(image, se) -> np.ndarray:
    """Min over the structuring element, out-of-bounds offsets absent."""
    img = as_image(image)
    if not se:
        raise ValueError("structuring element must be nonempty")
    out = np.full_like(img, np.inf)
    for dx, dy in se:
        _overlay(out, img, dx, dy, np.minimum)
    if np.any(np.isposinf(out)):
        raise ValueError("structuring element leaves a pixel with an empty window")
    return out


def opening(image, se) -> np.ndarray:
    return dilate(erode(image, se), se)


def closing(image, se) -> np.ndarray:
    return erode(dilate(image, se), se)


def detect_mg(image, se=None) -> np.ndarray:
    """Morphological gradient: dilation minus erosion."""
    if se is None:
        se = make_square_se(1)
    return dilate(image, se) - erode(image, se)


def detect_bm(image, se=None, n: int = 1) -> np.ndarray:
    """Blur-minimization detector: min of the two residues of the mean-blurred image."""
    if se is None:
        se = make_square_se(1)
    f_av = mean_filter(image, n)
    return np.minimum(f_av - erode(f_av, se), dilate(f_av, se) - f_av)


def detect_atm(image, se=None, n: int = 1, alpha: float = 0.25) -> np.ndarray:
    """Alpha-trimmed morphological detector on the trimmed-mean-blurred image.

    min{ opening - erosion, dilation - closing } of the blurred image; both
    terms are nonnegative because opening dominates erosion and dilation
    dominates closing.
    """
    if se is None:
        se = make_square_se(1)
    f_a = alpha_trimmed_mean_filter(image, n, alpha)
    ero = erode(f_a, se)
    dil = dilate(f_a, se)
    return np.minimum(dilate(ero, se) - ero, dil - erode(dil, se))


def detect_rnm(image, se=None) -> np.ndarray:
    """Reduced-noise morphological detector.

    Denoise by closing-then-opening, then take the dilation residue of the
    closing of the denoised image.
    """
    if se is None:
        se = make_square_se(1)
    m = opening(closing(image, se), se)
    mc = closing(m, se)
    return dilate(mc, se) - mc
