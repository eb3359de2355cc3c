"""Blur filters used as detector preprocessing.

All windowed operations clip the window to the image domain: out-of-bounds
pixels simply do not take part, so border statistics stay well defined
without inventing padding values.
"""
from __future__ import annotations

import numpy as np
from numba import njit, prange
from scipy.ndimage import convolve1d

from .image import as_image


@njit(parallel=True, cache=True)
def _windowed_trimmed_mean(img, n, alpha):
    h, w = img.shape
    side = 2 * n + 1
    out = np.empty_like(img)
    for y in prange(h):
        buf = np.empty(side * side, dtype=np.float64)
        for x in range(w):
            m = 0
            for dy in range(-n, n + 1):
                ty = y + dy
                if ty < 0 or ty >= h:
                    continue
                for dx in range(-n, n + 1):
                    tx = x + dx
                    if tx < 0 or tx >= w:
                        continue
                    buf[m] = img[ty, tx]
                    m += 1
            # floor(alpha*m); the (1+1e-12) factor counters IEEE round-down of
            # decimal alphas (0.3*10 = 2.999...96 must still trim 3).
            t = int(np.floor(alpha * m * (1.0 + 1e-12)))
            if 2 * t >= m:
                t = 0  # window too small to trim; fall back to plain mean
            if t == 0:
                s = 0.0
                for i in range(m):
                    s += buf[i]
                out[y, x] = s / m
            else:
                vals = buf[:m]
                vals.sort()
                s = 0.0
                for i in range(t, m - t):
                    s += vals[i]
                out[y, x] = s / (m - 2 * t)
    return out


def mean_filter(image, n: int = 1) -> np.ndarray:
    """Running mean over the clipped (2n+1)x(2n+1) window centered per pixel."""
    img = as_image(image)
    if n < 0:
        raise ValueError("window half-width must be >= 0")
    if n == 0:
        return img.copy()
    return _windowed_trimmed_mean(img, n, 0.0)


def alpha_trimmed_mean_filter(image, n: int = 1, alpha: float = 0.25) -> np.ndarray:
    """Window mean after dropping the floor(alpha*m) smallest and largest samples.

    m is the clipped window size, so border pixels trim proportionally less.
    alpha=0 reproduces mean_filter exactly.
    """
    img = as_image(image)
    if n < 0:
        raise ValueError("window half-width must be >= 0")
    if not 0.0 <= alpha < 0.5:
        raise ValueError("alpha must be in [0, 0.5)")
    if n == 0:
        return img.copy()
    return _windowed_trimmed_mean(img, n, float(alpha))


def gaussian_kernel(sigma: float) -> np.ndarray:
    """1-D Gaussian taps truncated at ceil(3*sigma), renormalized to sum 1."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    rad = int(np.ceil(3.0 * sigma))
    xs = np.arange(-rad, rad + 1, dtype=np.float64)
    k = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(image, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with clipped-and-renormalized borders.

    Near the border the kernel is restricted to in-image samples and rescaled
    to sum 1, so constant images are preserved exactly everywhere.
    """
    img = as_image(image)
    k = gaussian_kernel(sigma)
    out = img
    ones = np.ones_like(img)
    for axis in (0, 1):
        num = convolve1d(out, k, axis=axis, mode="constant", cval=0.0)
        den = convolve1d(ones, k, axis=axis, mode="constant", cval=0.0)
        out = num / den
    return out
