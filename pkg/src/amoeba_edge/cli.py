"""Command-line front end: generate, corrupt, detect, eval, sweep, bench, amoeba-dump.

Every run is reproducible: all parameters are explicit flags with defaults,
sweep cells derive their noise seeds from a hash of the global seed and the
cell key (so cells are order-independent and resumable), and output files are
written via temp-and-rename so they are never left truncated.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import os
import sys
import time

import numpy as np

from . import __version__
from .amoeba import AmoebaParams, compute_amoeba, compute_modified_amoeba
from .amoeba_ops import (
    AmoebaConfig,
    detect_amoeba_atm,
    detect_amoeba_bm,
    detect_amoeba_mg,
    detect_amoeba_rnm,
)
from .canny import CannyConfig, detect_canny
from .classic import detect_atm, detect_bm, detect_mg, detect_rnm
from .evaluate import best_fom, roc_curve, write_roc_csv
from .filters import gaussian_blur
from .image import (
    as_image,
    atomic_write_bytes,
    clamp_quantize,
    make_square_se,
    read_image,
    write_image,
)
from .noise import NoiseSpec, make_circle_image

AMOEBA_DETECTORS = ("amg", "abm", "aatm", "arnm")
CLASSIC_DETECTORS = ("mg", "bm", "atm", "rnm")
ALL_DETECTORS = CLASSIC_DETECTORS + AMOEBA_DETECTORS + ("canny",)

SWEEP_COLUMNS = [
    "detector", "noise_kind", "noise_level", "r", "lambda", "beta", "beta1",
    "beta2", "se_radius", "window_n", "trim_alpha", "pilot_sigma", "threshold",
    "fom", "auc", "wall_ms", "seed", "version",
]


def derive_seed(global_seed: int, key: str) -> int:
    """Stable 64-bit seed for one sweep cell."""
    digest = hashlib.sha256(f"{global_seed}|{key}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def run_named_detector(
    name: str,
    image,
    *,
    lam: float = 0.5,
    r: float = 7.0,
    beta: float = 0.1,
    beta1: float = 0.3,
    beta2: float = 0.1,
    se_radius: int = 1,
    window: int = 1,
    alpha: float = 0.25,
    pilot_sigma: float = 1.0,
) -> np.ndarray:
    """Run one of the nine detectors by name, returning its edge-strength map.

    For canny the map is the suppressed gradient magnitude (its binary output
    is separate; see detect_canny).
    """
    img = as_image(image)
    if name in AMOEBA_DETECTORS:
        config = AmoebaConfig(
            lam=lam, radius=r, beta=beta, beta1=beta1, beta2=beta2,
            window=window, alpha=alpha, pilot_sigma=pilot_sigma,
        )
        fn = {
            "amg": detect_amoeba_mg,
            "abm": detect_amoeba_bm,
            "aatm": detect_amoeba_atm,
            "arnm": detect_amoeba_rnm,
        }[name]
        return fn(img, config)
    if name in CLASSIC_DETECTORS:
        se = make_square_se(se_radius)
        if name == "mg":
            return detect_mg(img, se)
        if name == "bm":
            return detect_bm(img, se, window)
        if name == "atm":
            return detect_atm(img, se, window, alpha)
        return detect_rnm(img, se)
    if name == "canny":
        _, magnitude = detect_canny(img, CannyConfig(blur_sigma=pilot_sigma))
        return magnitude
    raise ValueError(f"unknown detector {name!r}; choose from {', '.join(ALL_DETECTORS)}")


def write_edge_map(path, edge_map) -> None:
    """Lossless text sidecar: 'width height' header, then one row per line,
    6 significant digits per value."""
    arr = as_image(edge_map)
    h, w = arr.shape
    lines = [f"{w} {h}"]
    for row in arr:
        lines.append(" ".join(f"{v:.6g}" for v in row))
    atomic_write_bytes(path, ("\n".join(lines) + "\n").encode("ascii"))


def read_edge_map(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: bad edge-map header")
        w, h = int(header[0]), int(header[1])
        arr = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if arr.shape != (h, w):
        raise ValueError(f"{path}: expected {h}x{w} values, got {arr.shape}")
    return arr


def _normalized_view(edge_map) -> np.ndarray:
    arr = as_image(edge_map)
    peak = arr.max()
    if peak <= 0:
        return np.zeros_like(arr)
    return arr * (255.0 / peak)


def _write_csv(path, columns, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    atomic_write_bytes(path, buf.getvalue().encode("utf-8"))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ---------------------------------------------------------------------------
# sweep


def run_sweep(
    detectors,
    noise_kind: str,
    levels,
    r_values,
    out_path,
    *,
    global_seed: int = 0,
    size: int = 256,
    circle_radius: float | None = None,
    lam: float = 0.5,
    beta: float = 0.1,
    beta1: float = 0.3,
    beta2: float = 0.1,
    se_radius: int = 1,
    window: int = 1,
    alpha: float = 0.25,
    pilot_sigma: float = 1.0,
    log=None,
) -> list[dict]:
    """Cartesian sweep detector x noise level x r on the circle benchmark.

    One CSV row per cell; cells already present in out_path are skipped, and
    the CSV is rewritten atomically after every cell so an interrupted sweep
    resumes cleanly.  Classic detectors and canny do not take r; they get one
    cell per noise level.
    """
    clean, truth = make_circle_image(size, radius=circle_radius)
    done: set[tuple] = set()
    existing_rows: list[list[str]] = []
    if out_path is not None and os.path.exists(out_path):
        with open(out_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != SWEEP_COLUMNS:
                raise ValueError(f"{out_path}: existing CSV has different columns")
            for row in reader:
                existing_rows.append(row)
                done.add((row[0], row[1], row[2], row[3]))

    all_rows = list(existing_rows)
    reports = []
    for detector in detectors:
        cell_rs = list(r_values) if detector in AMOEBA_DETECTORS else [None]
        for level in levels:
            for r in cell_rs:
                key_fields = (
                    detector, noise_kind, _fmt(float(level)), _fmt(float(r) if r is not None else None)
                )
                if key_fields in done:
                    continue
                key = "|".join(key_fields)
                seed = derive_seed(global_seed, key)
                spec = (
                    NoiseSpec(kind="gaussian", sigma=float(level), seed=seed)
                    if noise_kind == "gaussian"
                    else NoiseSpec(kind="impulse", prob=float(level), seed=seed)
                )
                noisy = spec.apply(clean)
                t0 = time.perf_counter()
                edge_map = run_named_detector(
                    detector, noisy,
                    lam=lam, r=float(r) if r is not None else 7.0,
                    beta=beta, beta1=beta1, beta2=beta2, se_radius=se_radius,
                    window=window, alpha=alpha, pilot_sigma=pilot_sigma,
                )
                wall_ms = (time.perf_counter() - t0) * 1000.0
                fom, thr = best_fom(edge_map, truth)
                auc = roc_curve(edge_map, truth).auc

                is_amoeba = detector in AMOEBA_DETECTORS
                row = [
                    detector,
                    noise_kind,
                    _fmt(float(level)),
                    _fmt(float(r) if r is not None else None),
                    _fmt(lam if is_amoeba else None),
                    _fmt(beta if is_amoeba else None),
                    _fmt(beta1 if detector == "arnm" else None),
                    _fmt(beta2 if detector == "arnm" else None),
                    _fmt(se_radius if detector in CLASSIC_DETECTORS else None),
                    _fmt(window if detector in ("bm", "atm", "abm", "aatm") else None),
                    _fmt(alpha if detector in ("atm", "aatm") else None),
                    _fmt(pilot_sigma if (is_amoeba or detector == "canny") else None),
                    _fmt(thr),
                    _fmt(fom),
                    _fmt(auc),
                    _fmt(round(wall_ms, 3)),
                    _fmt(seed),
                    __version__,
                ]
                all_rows.append(row)
                done.add(key_fields)
                reports.append(dict(zip(SWEEP_COLUMNS, row)))
                if out_path is not None:
                    _write_csv(out_path, SWEEP_COLUMNS, all_rows)
                if log is not None:
                    log(f"cell {key}: fom={fom:.4f} auc={auc:.4f} ({wall_ms:.0f} ms)")
    return reports


# ---------------------------------------------------------------------------
# bench


def fit_r2logr(r_values, times) -> tuple[float, dict[float, float]]:
    """Least-squares a*r^2*log(r) fit; residuals as fractions of each time."""
    rs = np.asarray(r_values, dtype=np.float64)
    ts = np.asarray(times, dtype=np.float64)
    g = rs * rs * np.log(rs)
    a = float((ts * g).sum() / (g * g).sum())
    residuals = {
        float(r): float((t - a * r * r * np.log(r)) / t) for r, t in zip(rs, ts)
    }
    return a, residuals


def run_bench(
    image,
    r_values,
    *,
    repeats: int = 3,
    lam: float = 0.5,
    beta: float = 0.1,
    beta1: float = 0.3,
    beta2: float = 0.1,
    window: int = 1,
    alpha: float = 0.25,
    pilot_sigma: float = 1.0,
    se_radius: int = 1,
    include_classic: bool = True,
    log=None,
) -> dict:
    """Time the amoeba detectors across r values (median of `repeats` runs).

    Classic detectors and canny are timed alongside as the floor reference.
    Returns {"times": {detector: {r: seconds}}, "classic": {detector: seconds},
    "fits": {detector: (coeff, {r: residual})}}.
    """
    img = as_image(image)

    def timed(fn):
        runs = []
        for _ in range(max(1, repeats)):
            t0 = time.perf_counter()
            fn()
            runs.append(time.perf_counter() - t0)
        return float(np.median(runs))

    times: dict[str, dict[float, float]] = {}
    for det in AMOEBA_DETECTORS:
        times[det] = {}
        for r in r_values:
            seconds = timed(
                lambda det=det, r=r: run_named_detector(
                    det, img, lam=lam, r=float(r), beta=beta, beta1=beta1,
                    beta2=beta2, window=window, alpha=alpha, pilot_sigma=pilot_sigma,
                )
            )
            times[det][float(r)] = seconds
            if log is not None:
                log(f"{det} r={r}: {seconds:.3f} s")

    classic: dict[str, float] = {}
    if include_classic:
        for det in CLASSIC_DETECTORS + ("canny",):
            classic[det] = timed(
                lambda det=det: run_named_detector(
                    det, img, se_radius=se_radius, window=window, alpha=alpha,
                    pilot_sigma=pilot_sigma,
                )
            )
            if log is not None:
                log(f"{det}: {classic[det]:.3f} s")

    fits = {}
    for det, per_r in times.items():
        rs = sorted(per_r)
        fits[det] = fit_r2logr(rs, [per_r[r] for r in rs])
    return {"times": times, "classic": classic, "fits": fits}


def bench_rows(result: dict) -> list[list[str]]:
    rows = []
    for det, per_r in result["times"].items():
        a, residuals = result["fits"][det]
        for r in sorted(per_r):
            fitted = a * r * r * np.log(r)
            rows.append(
                [det, _fmt(r), _fmt(per_r[r]), _fmt(float(fitted)),
                 _fmt(residuals[r]), _fmt(a)]
            )
    for det, seconds in result["classic"].items():
        rows.append([det, "", _fmt(seconds), "", "", ""])
    return rows


# ---------------------------------------------------------------------------
# subcommands


def _cmd_generate(args) -> int:
    radius = args.radius if args.radius is not None else args.size / 4.0
    image, truth = make_circle_image(args.size, args.outer, args.inner, radius)
    write_image(image, args.out_image)
    write_image(np.where(truth, 255.0, 0.0), args.out_truth)
    print(f"wrote {args.out_image} and {args.out_truth} ({args.size}x{args.size}, radius {radius:g})")
    return 0


def _make_noise_spec(args, seed: int) -> NoiseSpec:
    if args.noise == "gaussian":
        return NoiseSpec(kind="gaussian", sigma=args.sigma, seed=seed)
    if args.noise == "impulse":
        return NoiseSpec(kind="impulse", prob=args.prob, seed=seed)
    return NoiseSpec(kind="none", seed=seed)


def _cmd_corrupt(args) -> int:
    image = read_image(args.input)
    spec = _make_noise_spec(args, args.seed)
    write_image(spec.apply(image), args.out)
    meta = args.out + ".meta.csv"
    _write_csv(
        meta,
        ["noise_kind", "noise_level", "seed", "version"],
        [[spec.kind, _fmt(spec.level), _fmt(spec.seed), __version__]],
    )
    print(f"wrote {args.out} ({spec.kind} level {spec.level:g}, seed {spec.seed})")
    return 0


def _cmd_detect(args) -> int:
    image = read_image(args.input)
    t0 = time.perf_counter()
    edge_map = run_named_detector(
        args.detector, image,
        lam=args.lam, r=args.r, beta=args.beta, beta1=args.beta1,
        beta2=args.beta2, se_radius=args.se_radius, window=args.window,
        alpha=args.alpha, pilot_sigma=args.pilot_sigma,
    )
    wall_ms = (time.perf_counter() - t0) * 1000.0
    write_image(_normalized_view(edge_map), args.out_map)
    write_edge_map(args.out_raw, edge_map)
    if args.detector == "canny":
        edges, _ = detect_canny(image, CannyConfig(blur_sigma=args.pilot_sigma))
        write_image(np.where(edges, 255.0, 0.0), args.out_map + ".mask.pgm")
    print(f"detector={args.detector} wall_ms={wall_ms:.1f} wrote {args.out_map} {args.out_raw}")
    return 0


def _cmd_eval(args) -> int:
    edge_map = read_edge_map(args.map)
    truth = read_image(args.truth) > 127
    fom, thr = best_fom(edge_map, truth)
    roc = roc_curve(edge_map, truth)
    _write_csv(
        args.out,
        ["detector", "threshold", "fom", "auc", "version"],
        [[args.detector, _fmt(thr), _fmt(fom), _fmt(roc.auc), __version__]],
    )
    if args.roc_out:
        write_roc_csv(args.roc_out, roc)
    print(f"fom={fom:.4f} (threshold {thr:g}) auc={roc.auc:.4f}")
    return 0


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _cmd_sweep(args) -> int:
    detectors = [tok.strip() for tok in args.detectors.split(",") if tok.strip()]
    for det in detectors:
        if det not in ALL_DETECTORS:
            raise ValueError(f"unknown detector {det!r}")
    rows = run_sweep(
        detectors,
        args.noise,
        _parse_float_list(args.levels),
        _parse_float_list(args.r_values),
        args.out,
        global_seed=args.seed,
        size=args.size,
        lam=args.lam, beta=args.beta, beta1=args.beta1, beta2=args.beta2,
        se_radius=args.se_radius, window=args.window, alpha=args.alpha,
        pilot_sigma=args.pilot_sigma,
        log=print,
    )
    print(f"sweep complete: {len(rows)} new cells, CSV at {args.out}")
    return 0


def _cmd_bench(args) -> int:
    if args.image:
        image = read_image(args.image)
    else:
        clean, _ = make_circle_image(args.size)
        image = NoiseSpec(kind="impulse", prob=0.2, seed=args.seed).apply(clean)
    result = run_bench(
        image,
        _parse_float_list(args.r_values),
        repeats=args.repeats,
        lam=args.lam, beta=args.beta, beta1=args.beta1, beta2=args.beta2,
        window=args.window, alpha=args.alpha, pilot_sigma=args.pilot_sigma,
        se_radius=args.se_radius,
        log=print,
    )
    _write_csv(
        args.out,
        ["detector", "r", "median_s", "fit_s", "residual_frac", "coeff"],
        bench_rows(result),
    )
    for det, (a, residuals) in result["fits"].items():
        worst = max(abs(v) for v in residuals.values())
        print(f"{det}: fit a*r^2*log(r) with a={a:.3e}, worst residual {worst:.1%}")
    print(f"wrote {args.out}")
    return 0


def _cmd_amoeba_dump(args) -> int:
    image = read_image(args.input)
    pilot = gaussian_blur(image, args.pilot_sigma) if args.pilot_sigma > 0 else image
    params = AmoebaParams(lam=args.lam, radius=args.r)
    fn = compute_modified_amoeba if args.modified else compute_amoeba
    amoeba = fn(pilot, (args.x, args.y), params)
    overlay = clamp_quantize(image) * 0.5
    for x, y in amoeba.members:
        overlay[y, x] = 255.0
    write_image(overlay, args.out)
    print(f"amoeba at ({args.x}, {args.y}): {len(amoeba.members)} members, wrote {args.out}")
    return 0


def _add_detector_flags(parser) -> None:
    parser.add_argument("--lam", type=float, default=0.5, help="intensity-difference weight (default 0.5)")
    parser.add_argument("--r", type=float, default=7.0, help="amoeba radius (default 7)")
    parser.add_argument("--beta", type=float, default=0.1, help="rank fraction (default 0.1)")
    parser.add_argument("--beta1", type=float, default=0.3, help="rnm denoising rank fraction (default 0.3)")
    parser.add_argument("--beta2", type=float, default=0.1, help="rnm residue rank fraction (default 0.1)")
    parser.add_argument("--se-radius", type=int, default=1, help="classic square SE radius (default 1)")
    parser.add_argument("--window", type=int, default=1, help="mean/trimmed-mean half width (default 1)")
    parser.add_argument("--alpha", type=float, default=0.25, help="trim fraction (default 0.25)")
    parser.add_argument("--pilot-sigma", type=float, default=1.0, help="pilot blur sigma (default 1.0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amoeba-edge",
        description="Morphological-amoeba edge detection, baselines, and evaluation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write the two-level disc benchmark and its ground truth")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--outer", type=float, default=100.0)
    p.add_argument("--inner", type=float, default=150.0)
    p.add_argument("--radius", type=float, default=None, help="disc radius (default size/4)")
    p.add_argument("--out-image", required=True)
    p.add_argument("--out-truth", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("corrupt", help="apply gaussian or impulse noise deterministically")
    p.add_argument("--input", required=True)
    p.add_argument("--noise", choices=["gaussian", "impulse", "none"], required=True)
    p.add_argument("--sigma", type=float, default=25.0)
    p.add_argument("--prob", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("detect", help="run a detector; write view PGM + lossless sidecar")
    p.add_argument("--input", required=True)
    p.add_argument("--detector", choices=ALL_DETECTORS, required=True)
    _add_detector_flags(p)
    p.add_argument("--out-map", required=True, help="normalized PGM for viewing")
    p.add_argument("--out-raw", required=True, help="lossless text edge map for eval")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("eval", help="score an edge map against ground truth")
    p.add_argument("--map", required=True, help="lossless edge map from detect")
    p.add_argument("--truth", required=True, help="ground-truth PGM")
    p.add_argument("--detector", default="", help="label recorded in the CSV")
    p.add_argument("--out", required=True, help="summary CSV")
    p.add_argument("--roc-out", default=None, help="optional ROC points CSV")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="grid of detector x noise level x r on the benchmark")
    p.add_argument("--detectors", required=True, help="comma-separated detector names")
    p.add_argument("--noise", choices=["gaussian", "impulse"], required=True)
    p.add_argument("--levels", required=True, help="comma-separated noise levels")
    p.add_argument("--r-values", default="7", help="comma-separated amoeba radii")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--seed", type=int, default=0, help="global seed; cells derive theirs")
    _add_detector_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bench", help="time detectors across r; fit a*r^2*log(r)")
    p.add_argument("--image", default=None, help="input image (default: circle + 20%% impulse)")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r-values", default="3,5,7,9,11")
    p.add_argument("--repeats", type=int, default=3)
    _add_detector_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("amoeba-dump", help="overlay one pixel's amoeba on the image")
    p.add_argument("--input", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--r", type=float, default=7.0)
    p.add_argument("--pilot-sigma", type=float, default=1.0, help="0 disables the pilot blur")
    p.add_argument("--modified", action="store_true", help="dump the modified amoeba")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_amoeba_dump)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # CLI contract: nonzero exit, message on stderr
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
