"""Edge detection with morphological amoebas.

Grayscale image processing built around spatially-variant structuring
elements ("amoebas") grown per pixel by shortest-path region growing on a
pilot image, the four classic morphological edge detectors and their amoeba
variants, a Canny baseline, reproducible noise/benchmark synthesis, and a
quantitative evaluation harness (Pratt figure of merit, ROC/AUC).
"""

__version__ = "0.1.0"

from .amoeba import (
    Amoeba,
    AmoebaField,
    AmoebaParams,
    compute_amoeba,
    compute_amoeba_field,
    compute_modified_amoeba,
    pixel_distance,
)
from .amoeba_ops import (
    AmoebaConfig,
    amoeba_close,
    amoeba_dilate,
    amoeba_erode,
    amoeba_open,
    detect_amoeba_atm,
    detect_amoeba_bm,
    detect_amoeba_mg,
    detect_amoeba_rnm,
)
from .canny import CannyConfig, detect_canny
from .classic import (
    closing,
    detect_atm,
    detect_bm,
    detect_mg,
    detect_rnm,
    dilate,
    erode,
    opening,
)
from .evaluate import (
    EvalReport,
    RocCurve,
    best_fom,
    evaluate_edge_map,
    pratt_fom,
    roc_curve,
    threshold,
)
from .filters import alpha_trimmed_mean_filter, gaussian_blur, mean_filter
from .image import (
    MalformedImage,
    UnsupportedImageFormat,
    as_image,
    clamp_quantize,
    make_diamond_se,
    make_square_se,
    read_image,
    write_image,
)
from .noise import NoiseSpec, add_gaussian_noise, add_impulse_noise, make_circle_image

__all__ = [
    "Amoeba",
    "AmoebaConfig",
    "AmoebaField",
    "AmoebaParams",
    "CannyConfig",
    "EvalReport",
    "MalformedImage",
    "NoiseSpec",
    "RocCurve",
    "UnsupportedImageFormat",
    "add_gaussian_noise",
    "add_impulse_noise",
    "alpha_trimmed_mean_filter",
    "amoeba_close",
    "amoeba_dilate",
    "amoeba_erode",
    "amoeba_open",
    "as_image",
    "best_fom",
    "clamp_quantize",
    "closing",
    "compute_amoeba",
    "compute_amoeba_field",
    "compute_modified_amoeba",
    "detect_amoeba_atm",
    "detect_amoeba_bm",
    "detect_amoeba_mg",
    "detect_amoeba_rnm",
    "detect_atm",
    "detect_bm",
    "detect_canny",
    "detect_mg",
    "detect_rnm",
    "dilate",
    "erode",
    "evaluate_edge_map",
    "gaussian_blur",
    "make_circle_image",
    "make_diamond_se",
    "make_square_se",
    "mean_filter",
    "opening",
    "pixel_distance",
    "pratt_fom",
    "read_image",
    "roc_curve",
    "threshold",
    "write_image",
]
