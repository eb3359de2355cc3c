"""Raster basics: image validation, structuring elements, and PGM/PNG file I/O.

Images are plain 2-D float64 numpy arrays in row-major order, intensities on
the 0..255 scale.  Quantization to 8 bits happens only at file output so that
filters may produce fractional intensities without premature rounding.

The on-disk interchange format is binary PGM (P5, maxval 255), which supports
a bit-exact round trip.  PNG files are accepted as a read-only convenience.
"""
from __future__ import annotations

import os
import tempfile

import numpy as np

Offsets = frozenset  # structuring element: frozenset of (dx, dy) int pairs


class UnsupportedImageFormat(ValueError):
    """File is not a format this library reads."""


class MalformedImage(ValueError):
    """File claims a supported format but its contents are broken."""


def as_image(data) -> np.ndarray:
    """Validate and return an image as a 2-D float64 array.

    Accepts any array-like; rejects empty, non-2-D, or non-finite input.
    """
    img = np.asarray(data, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image must be at least 1x1, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    return img


def make_square_se(radius: int) -> Offsets:
    """Square structuring element: all offsets with max(|dx|,|dy|) <= radius."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    return frozenset(
        (dx, dy)
        for dy in range(-radius, radius + 1)
        for dx in range(-radius, radius + 1)
    )


def make_diamond_se(radius: int) -> Offsets:
    """Diamond structuring element: all offsets with |dx|+|dy| <= radius."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    return frozenset(
        (dx, dy)
        for dy in range(-radius, radius + 1)
        for dx in range(-radius, radius + 1)
        if abs(dx) + abs(dy) <= radius
    )


def clamp_quantize(image) -> np.ndarray:
    """Clamp to [0, 255] and round half-up to integer-valued intensities."""
    img = as_image(image)
    # np.round rounds half to even; file output wants plain half-up.
    return np.floor(np.clip(img, 0.0, 255.0) + 0.5)


def atomic_write_bytes(path, data: bytes) -> None:
    """Write a file via a temp sibling + rename so readers never see it truncated."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_image(image, path) -> None:
    """Write an image as binary 8-bit grayscale PGM (P5, maxval 255).

    Values are clamped/quantized first; an already 8-bit-valued image round
    trips bit-exactly through write_image/read_image.
    """
    img = clamp_quantize(image)
    h, w = img.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    atomic_write_bytes(path, header + img.astype(np.uint8).tobytes())


def _parse_pgm(data: bytes, path) -> np.ndarray:
    # Header: "P5", width, height, maxval as ASCII tokens; '#' comments allowed;
    # a single whitespace byte separates the maxval from the raw pixel bytes.
    pos = 2  # past magic
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise MalformedImage(f"{path}: truncated PGM header")
        token = data[start:pos]
        if not token.isdigit():
            raise MalformedImage(f"{path}: bad PGM header token {token!r}")
        fields.append(int(token))
    pos += 1  # single whitespace after maxval
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise MalformedImage(f"{path}: bad PGM dimensions {width}x{height}")
    if not 1 <= maxval <= 255:
        raise UnsupportedImageFormat(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    raster = data[pos : pos + width * height]
    if len(raster) < width * height:
        raise MalformedImage(f"{path}: PGM pixel data truncated")
    return (
        np.frombuffer(raster, dtype=np.uint8, count=width * height)
        .reshape(height, width)
        .astype(np.float64)
    )


_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def read_image(path) -> np.ndarray:
    """Read a grayscale image (PGM P5, or PNG as a convenience) to float64."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] == b"P5":
        return _parse_pgm(data, path)
    if data[: len(_PNG_MAGIC)] == _PNG_MAGIC:
        from PIL import Image as PILImage
        from PIL import UnidentifiedImageError

        import io

        try:
            with PILImage.open(io.BytesIO(data)) as im:
                return np.asarray(im.convert("L"), dtype=np.float64)
        except UnidentifiedImageError as exc:
            raise MalformedImage(f"{path}: broken PNG") from exc
    raise UnsupportedImageFormat(f"{path}: not a PGM (P5) or PNG file")
