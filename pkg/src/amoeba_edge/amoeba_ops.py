"""Rank-order morphology over amoeba fields and the four amoeba edge detectors.

Amoeba dilation/erosion take the k-th largest/smallest image value over each
pixel's amoeba, with k = ceil(beta * member count).  The rank softens the
plain max/min: stray noise pixels absorbed while the modified amoeba expanded
across a contour no longer dominate the result.

Amoeba shapes always come from a pilot image (a Gaussian blur of the operand)
while values are read from the operand itself.  Composite operations
(opening, closing) compute one field from the blur of their input and share
it across both stages.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .amoeba import AmoebaField, AmoebaParams, compute_amoeba_field
from .filters import alpha_trimmed_mean_filter, gaussian_blur, mean_filter
from .image import as_image


@dataclass(frozen=True)
class AmoebaConfig:
    """Parameters shared by the amoeba detectors.

    beta drives MG/BM/ATM ranks; beta1/beta2 drive the RNM stages.  window
    and alpha configure the BM/ATM preprocessing blurs.  pilot_sigma is the
    Gaussian blur applied before growing amoeba shapes.  rnm_field_per_stage
    recomputes the field before every elementary stage of the RNM pipeline
    instead of once per composite operation.
    """

    lam: float = 0.5
    radius: float = 7.0
    beta: float = 0.1
    beta1: float = 0.3
    beta2: float = 0.1
    window: int = 1
    alpha: float = 0.25
    pilot_sigma: float = 1.0
    rnm_field_per_stage: bool = False

    def __post_init__(self):
        for name in ("beta", "beta1", "beta2"):
            b = getattr(self, name)
            if not 0.0 < b <= 1.0:
                raise ValueError(f"{name} must be in (0, 1]")
        if self.pilot_sigma <= 0:
            raise ValueError("pilot_sigma must be > 0")
        AmoebaParams(lam=self.lam, radius=self.radius)  # validates lam and radius

    @property
    def params(self) -> AmoebaParams:
        return AmoebaParams(lam=self.lam, radius=self.radius)


@njit(parallel=True, cache=True)
def _rank_kernel(img, masks, win_r, beta, take_max):
    h, w = img.shape
    side = 2 * win_r + 1
    out = np.empty_like(img)
    for y in prange(h):
        buf = np.empty(side * side, dtype=np.float64)
        for x in range(w):
            m = 0
            for a in range(side):
                ty = y + a - win_r
                if ty < 0 or ty >= h:
                    continue
                for b in range(side):
                    if masks[y, x, a, b]:
                        buf[m] = img[ty, x + b - win_r]
                        m += 1
            # ceil(beta*m); the (1-1e-12) factor counters IEEE round-up of
            # decimal betas (0.1*30 = 3.000...04 must still give k=3).
            k = int(np.ceil(beta * m * (1.0 - 1e-12)))
            if k < 1:
                k = 1
            elif k > m:
                k = m
            vals = buf[:m]
            vals.sort()
            if take_max:
                out[y, x] = vals[m - k]
            else:
                out[y, x] = vals[k - 1]
    return out


def _check_field(image, field: AmoebaField) -> np.ndarray:
    img = as_image(image)
    if field.shape != img.shape:
        raise ValueError(f"field shape {field.shape} does not match image {img.shape}")
    return img


def amoeba_dilate(image, field: AmoebaField, beta: float = 0.1) -> np.ndarray:
    """k-th largest image value over each pixel's amoeba, k = ceil(beta*|amoeba|)."""
    img = _check_field(image, field)
    return _rank_kernel(img, field.masks, field.window_radius, float(beta), True)


def amoeba_erode(image, field: AmoebaField, beta: float = 0.1) -> np.ndarray:
    """k-th smallest image value over each pixel's amoeba, k = ceil(beta*|amoeba|)."""
    img = _check_field(image, field)
    return _rank_kernel(img, field.masks, field.window_radius, float(beta), False)


def _pilot_field(image, params: AmoebaParams, pilot_sigma: float) -> AmoebaField:
    return compute_amoeba_field(gaussian_blur(image, pilot_sigma), params, modified=True)


def amoeba_open(
    image,
    params: AmoebaParams,
    beta: float = 0.1,
    pilot_sigma: float = 1.0,
    field: AmoebaField | None = None,
) -> np.ndarray:
    """Amoeba erosion then dilation; both stages share one field.

    The field defaults to amoebas grown on the Gaussian blur of the input.
    """
    if field is None:
        field = _pilot_field(image, params, pilot_sigma)
    return amoeba_dilate(amoeba_erode(image, field, beta), field, beta)


def amoeba_close(
    image,
    params: AmoebaParams,
    beta: float = 0.1,
    pilot_sigma: float = 1.0,
    field: AmoebaField | None = None,
) -> np.ndarray:
    """Amoeba dilation then erosion; both stages share one field."""
    if field is None:
        field = _pilot_field(image, params, pilot_sigma)
    return amoeba_erode(amoeba_dilate(image, field, beta), field, beta)


def detect_amoeba_mg(image, config: AmoebaConfig = AmoebaConfig()) -> np.ndarray:
    """Amoeba morphological gradient; amoebas grown on the blurred input."""
    img = as_image(image)
    field = _pilot_field(img, config.params, config.pilot_sigma)
    return amoeba_dilate(img, field, config.beta) - amoeba_erode(img, field, config.beta)


def detect_amoeba_bm(image, config: AmoebaConfig = AmoebaConfig()) -> np.ndarray:
    """Amoeba blur-minimization; amoebas grown on the blurred mean image.

    Rank operations with k > 1 are not extensive/anti-extensive, so the raw
    residue min can dip below zero; edge strengths clamp at 0.
    """
    img = as_image(image)
    f_av = mean_filter(img, config.window)
    field = _pilot_field(f_av, config.params, config.pilot_sigma)
    out = np.minimum(
        f_av - amoeba_erode(f_av, field, config.beta),
        amoeba_dilate(f_av, field, config.beta) - f_av,
    )
    return np.maximum(out, 0.0)


def detect_amoeba_atm(image, config: AmoebaConfig = AmoebaConfig()) -> np.ndarray:
    """Amoeba alpha-trimmed detector; one field serves all four operations."""
    img = as_image(image)
    f_a = alpha_trimmed_mean_filter(img, config.window, config.alpha)
    field = _pilot_field(f_a, config.params, config.pilot_sigma)
    ero = amoeba_erode(f_a, field, config.beta)
    dil = amoeba_dilate(f_a, field, config.beta)
    opened = amoeba_dilate(ero, field, config.beta)
    closed = amoeba_erode(dil, field, config.beta)
    return np.maximum(np.minimum(opened - ero, dil - closed), 0.0)


def detect_amoeba_rnm(image, config: AmoebaConfig = AmoebaConfig()) -> np.ndarray:
    """Amoeba reduced-noise detector.

    Denoising phase: closing then opening at beta1, each composite growing a
    fresh field from the blur of its own input so the shapes adapt as the
    noise is removed.  Residue phase: closing at beta2 followed by the
    dilation residue, both over ONE field grown on the blur of the denoised
    image; sharing the field mirrors the classic residue (one structuring
    element for the closing and the dilation) and keeps flat regions
    cancelling exactly instead of flickering between two slightly different
    member sets.  With rnm_field_per_stage, every elementary stage regrows
    its field instead.
    """
    img = as_image(image)
    params, sigma = config.params, config.pilot_sigma

    if config.rnm_field_per_stage:
        def stage(op, operand, beta):
            field = _pilot_field(operand, params, sigma)
            return op(operand, field, beta)

        c1 = stage(amoeba_erode, stage(amoeba_dilate, img, config.beta1), config.beta1)
        m = stage(amoeba_dilate, stage(amoeba_erode, c1, config.beta1), config.beta1)
        c2 = stage(amoeba_erode, stage(amoeba_dilate, m, config.beta2), config.beta2)
        dil = stage(amoeba_dilate, c2, config.beta2)
    else:
        c1 = amoeba_close(img, params, config.beta1, sigma)
        m = amoeba_open(c1, params, config.beta1, sigma)
        tail_field = _pilot_field(m, params, sigma)
        c2 = amoeba_erode(amoeba_dilate(m, tail_field, config.beta2), tail_field, config.beta2)
        dil = amoeba_dilate(c2, tail_field, config.beta2)
    return np.maximum(dil - c2, 0.0)
