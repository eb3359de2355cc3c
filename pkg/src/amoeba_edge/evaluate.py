"""Quantitative edge-detector evaluation: thresholding, Pratt FOM, ROC/AUC.

Edge maps are real-valued, nonnegative strength rasters.  Detection quality
is scored against a boolean ground-truth mask either at a fixed threshold
(pratt_fom) or at the best threshold of a sweep (best_fom).  ROC curves sweep
the same thresholds and report (false positive rate, true positive rate)
pairs plus the trapezoidal area under the curve.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import distance_transform_edt

from .image import atomic_write_bytes

DEFAULT_FOM_ALPHA = 1.0 / 9.0
MAX_SWEEP_THRESHOLDS = 256


def _as_edge_map(edge_map) -> np.ndarray:
    arr = np.asarray(edge_map, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"edge map must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("edge map contains non-finite values")
    if (arr < 0).any():
        raise ValueError("edge map contains negative strengths")
    return arr


def _as_mask(mask, like=None) -> np.ndarray:
    arr = np.asarray(mask)
    if arr.dtype != bool:
        arr = arr.astype(bool)
    if arr.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {arr.shape}")
    if like is not None and arr.shape != like.shape:
        raise ValueError(f"mask shape {arr.shape} does not match {like.shape}")
    return arr


def threshold(edge_map, t: float) -> np.ndarray:
    """Binary mask of pixels with strength >= t."""
    if not np.isfinite(t):
        raise ValueError("threshold must be finite")
    return _as_edge_map(edge_map) >= t


def pratt_fom(detected, ideal, alpha: float = DEFAULT_FOM_ALPHA) -> float:
    """Pratt's figure of merit between detected and ideal edge pixel sets.

    Each detected pixel contributes 1/(1 + alpha*d^2) where d is its
    Euclidean distance to the nearest ideal pixel; the sum is normalized by
    max(ideal count, detected count).  1.0 means a perfect match; an empty
    detection scores 0.
    """
    det = _as_mask(detected)
    ide = _as_mask(ideal, like=det)
    n_ideal = int(ide.sum())
    if n_ideal == 0:
        raise ValueError("ideal edge set is empty")
    n_det = int(det.sum())
    if n_det == 0:
        return 0.0
    dist = distance_transform_edt(~ide)
    d = dist[det]
    return float(np.sum(1.0 / (1.0 + alpha * d * d)) / max(n_ideal, n_det))


def _sweep_thresholds(strengths: np.ndarray, max_count: int = MAX_SWEEP_THRESHOLDS) -> np.ndarray:
    """Thresholds for a sweep: the distinct positive strengths, quantile-capped.

    Only positive responses are candidate thresholds (a zero-strength pixel is
    no response), so an all-zero map yields an empty sweep.  Above max_count
    distinct values, nearest-rank quantiles keep the sweep at actual attained
    values, which makes the sweep invariant under positive rescaling.
    """
    vals = np.unique(strengths[strengths > 0])
    if vals.size == 0:
        return vals
    if vals.size <= max_count:
        return vals
    qs = np.linspace(0.0, 1.0, max_count)
    return np.unique(np.quantile(vals, qs, method="nearest"))


def best_fom(
    edge_map,
    ideal,
    alpha: float = DEFAULT_FOM_ALPHA,
    thresholds=None,
) -> tuple[float, float]:
    """Maximize pratt_fom over a threshold sweep; returns (fom, threshold).

    Ties break toward the lower threshold.  A map with no positive response
    scores (0.0, 0.0).
    """
    strengths = _as_edge_map(edge_map)
    ide = _as_mask(ideal, like=strengths)
    n_ideal = int(ide.sum())
    if n_ideal == 0:
        raise ValueError("ideal edge set is empty")
    if thresholds is None:
        thresholds = _sweep_thresholds(strengths)
    thresholds = np.sort(np.asarray(thresholds, dtype=np.float64))
    if thresholds.size == 0:
        return 0.0, 0.0

    dist = distance_transform_edt(~ide)
    gain = 1.0 / (1.0 + alpha * dist * dist)
    best = (0.0, float(thresholds[0]))
    for t in thresholds:
        det = strengths >= t
        n_det = int(det.sum())
        if n_det == 0:
            continue
        fom = float(gain[det].sum() / max(n_ideal, n_det))
        if fom > best[0]:
            best = (fom, float(t))
    return best


@dataclass(frozen=True)
class RocCurve:
    """ROC points ordered by nondecreasing false positive rate.

    thresholds[i] produced (false_rates[i], hit_rates[i]); the forced
    endpoints are threshold +inf -> (0, 0) and threshold 0 -> (1, 1).
    """

    thresholds: np.ndarray
    false_rates: np.ndarray
    hit_rates: np.ndarray
    auc: float

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.false_rates, self.hit_rates])


def roc_curve(edge_map, ideal, thresholds=None) -> RocCurve:
    """Sweep thresholds and report hit rate vs false rate, with trapezoid AUC."""
    strengths = _as_edge_map(edge_map)
    ide = _as_mask(ideal, like=strengths)
    n_ideal = int(ide.sum())
    n_off = ide.size - n_ideal
    if n_ideal == 0 or n_off == 0:
        raise ValueError("ideal mask must contain both edge and non-edge pixels")
    if thresholds is None:
        thresholds = _sweep_thresholds(strengths)
    # High to low so rates come out nondecreasing.
    thresholds = np.sort(np.asarray(thresholds, dtype=np.float64))[::-1]

    ts = [np.inf]
    pf = [0.0]
    pd = [0.0]
    for t in thresholds:
        det = strengths >= t
        pd.append(float((det & ide).sum() / n_ideal))
        pf.append(float((det & ~ide).sum() / n_off))
        ts.append(float(t))
    ts.append(0.0)
    pf.append(1.0)
    pd.append(1.0)

    false_rates = np.asarray(pf)
    hit_rates = np.asarray(pd)
    auc = float(np.trapezoid(hit_rates, false_rates))
    return RocCurve(
        thresholds=np.asarray(ts),
        false_rates=false_rates,
        hit_rates=hit_rates,
        auc=auc,
    )


@dataclass(frozen=True)
class EvalReport:
    """One detector evaluation: best-threshold FOM, ROC/AUC, and provenance."""

    detector: str
    fom: float
    fom_threshold: float
    roc: RocCurve
    noise_kind: str = "none"
    noise_level: float = 0.0
    seed: int = 0
    params: dict = field(default_factory=dict)

    @property
    def auc(self) -> float:
        return self.roc.auc


def evaluate_edge_map(
    edge_map,
    ideal,
    detector: str = "",
    alpha: float = DEFAULT_FOM_ALPHA,
    noise_kind: str = "none",
    noise_level: float = 0.0,
    seed: int = 0,
    params: dict | None = None,
) -> EvalReport:
    """Bundle best_fom and roc_curve into one report."""
    fom, t = best_fom(edge_map, ideal, alpha=alpha)
    roc = roc_curve(edge_map, ideal)
    return EvalReport(
        detector=detector,
        fom=fom,
        fom_threshold=t,
        roc=roc,
        noise_kind=noise_kind,
        noise_level=noise_level,
        seed=seed,
        params=dict(params or {}),
    )


def write_roc_csv(path, roc: RocCurve) -> None:
    """Write (threshold, false_rate, hit_rate) triples as CSV."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["threshold", "p_f", "p_d"])
    for t, f, d in zip(roc.thresholds, roc.false_rates, roc.hit_rates):
        writer.writerow([repr(float(t)), repr(float(f)), repr(float(d))])
    atomic_write_bytes(path, buf.getvalue().encode("ascii"))
