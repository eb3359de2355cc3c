"""Synthetic benchmark image and reproducible noise corruption.

All randomness comes from numpy's counter-based Philox generator keyed by an
explicit 64-bit seed, so the same (image, parameters, seed) triple always
produces bit-identical output regardless of platform or worker count.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import as_image

_NEIGHBORS8 = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]


def make_circle_image(
    size: int,
    outer_level: float = 100.0,
    inner_level: float = 150.0,
    radius: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Build the two-level disc benchmark and its ideal edge set.

    Parameters
    ----------
    size : int
        Image is size x size; the disc is centered at ((size-1)/2, (size-1)/2).
    outer_level, inner_level : float
        Gray levels outside and inside the disc.
    radius : float, optional
        Disc radius in pixels; defaults to size/4.  Must satisfy
        0 < radius < size/2.

    Returns
    -------
    (image, truth) : (float64 array, bool array)
        truth marks the inner-side boundary: disc pixels with at least one
        8-neighbor outside the disc (a one-pixel-wide closed ring).  It is
        empty when the two levels are equal (no contrast, no edge).
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    if radius is None:
        radius = size / 4.0
    if not 0 < radius < size / 2:
        raise ValueError(f"radius must be in (0, size/2), got {radius}")
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size]
    inner = (xx - c) ** 2 + (yy - c) ** 2 < radius * radius
    image = np.where(inner, float(inner_level), float(outer_level))

    truth = np.zeros_like(inner)
    if inner_level != outer_level:
        outer = ~inner
        for dx, dy in _NEIGHBORS8:
            shifted = np.zeros_like(outer)
            ys = slice(max(0, -dy), size - max(0, dy))
            xs = slice(max(0, -dx), size - max(0, dx))
            ys_src = slice(max(0, dy), size - max(0, -dy))
            xs_src = slice(max(0, dx), size - max(0, -dx))
            shifted[ys, xs] = outer[ys_src, xs_src]
            truth |= inner & shifted
    return image, truth


def add_gaussian_noise(image, sigma: float, seed: int) -> np.ndarray:
    """Add i.i.d. N(0, sigma^2) noise and clamp to [0, 255]."""
    img = as_image(image)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return img.copy()
    rng = np.random.Generator(np.random.Philox(key=seed))
    return np.clip(img + rng.normal(0.0, sigma, img.shape), 0.0, 255.0)


def add_impulse_noise(image, prob: float, seed: int) -> np.ndarray:
    """Replace each pixel independently with probability prob.

    Replacements are salt-and-pepper: 0 or 255 with equal probability.
    """
    img = as_image(image)
    if not 0.0 <= prob <= 1.0:
        raise ValueError("prob must be in [0, 1]")
    rng = np.random.Generator(np.random.Philox(key=seed))
    hit = rng.random(img.shape) < prob
    salt = rng.random(img.shape) < 0.5
    return np.where(hit, np.where(salt, 255.0, 0.0), img)


@dataclass(frozen=True)
class NoiseSpec:
    """One noise corruption: kind 'gaussian' (sigma) or 'impulse' (prob), plus seed."""

    kind: str
    sigma: float = 0.0
    prob: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("gaussian", "impulse", "none"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if not 0.0 <= self.prob <= 1.0:
            raise ValueError("prob must be in [0, 1]")

    @property
    def level(self) -> float:
        if self.kind == "gaussian":
            return self.sigma
        if self.kind == "impulse":
            return self.prob
        return 0.0

    def apply(self, image) -> np.ndarray:
        if self.kind == "gaussian":
            return add_gaussian_noise(image, self.sigma, self.seed)
        if self.kind == "impulse":
            return add_impulse_noise(image, self.prob, self.seed)
        return as_image(image).copy()
