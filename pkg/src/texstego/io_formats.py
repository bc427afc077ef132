"""Bit-exact serialization of matrices, images, keys, and fitted models.

Wire formats (all integers little-endian):

* matrix:  ``TXM1`` | rows u64 | cols u64 | row-major float64 payload
* stego:   ``STG1`` | H u64 | W u64 | C u64 (= 3) | peak float64 | payload
* key:     ``KEY1`` | alpha f64 | side u64 | pad u64 | peak f64
           | 3 channel records (cover singular values, texture U, texture V,
           each length-prefixed) | mode u8 | wavelet family (u16 len + utf-8)
* pca:     ``PCA1`` | mean, loadings, score matrix blocks (TXM1 each)
* basis:   ``PCB1`` | n_components u64 | n_samples u64 | mean block
           | spectrum block | component blocks (TXM1 each)

The stego container is lossless float64 on purpose: the embedding perturbs
pixels by far less than one 8-bit quantization step, so a PNG round trip
destroys the payload. PNG export exists for viewing and is flagged as lossy.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

from .errors import (
    BadMagicError,
    DimensionError,
    FileAccessError,
    FormatError,
    KeyFieldError,
    ParameterError,
    ShapeError,
    TruncatedFileError,
)

MATRIX_MAGIC = b"TXM1"
STEGO_MAGIC = b"STG1"
KEY_MAGIC = b"KEY1"
PCA_MAGIC = b"PCA1"
BASIS_MAGIC = b"PCB1"

MODE_KEY = "key"
MODE_LITERAL = "literal"
_MODE_CODES = {MODE_KEY: 0, MODE_LITERAL: 1}
_MODE_NAMES = {v: k for k, v in _MODE_CODES.items()}

ORTHOGONALITY_TOL = 1e-9


@dataclass
class FloatImage:
    """3-channel float64 image with a declared peak sample value.

    ``pixels`` is (H, W, 3), RGB order. Samples are nominally in [0, peak];
    the range is a contract for quantization, not enforced here, because a
    freshly embedded stego may overshoot it by a sub-quantum amount.
    """

    pixels: np.ndarray
    peak: float

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ShapeError(f"image must be (H, W, 3), got {self.pixels.shape}")
        self.peak = float(self.peak)
        if not self.peak > 0:
            raise ParameterError(f"declared peak must be > 0, got {self.peak}")

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


@dataclass
class ChannelKey:
    """Per-channel extraction side information."""

    cover_sv: np.ndarray  # (side,) non-increasing, non-negative
    texture_u: np.ndarray  # (side, side) orthogonal
    texture_v: np.ndarray  # (side, side) orthogonal


@dataclass
class StegoKey:
    """Everything extraction needs besides the stego image itself."""

    alpha: float
    side: int
    pad_count: int
    peak: float
    channels: list[ChannelKey] = field(default_factory=list)
    mode: str = MODE_KEY
    family: str = "haar"

    @property
    def original_rows(self):
        return self.side * self.side - self.pad_count


# ---------------------------------------------------------------------------
# low-level readers

class _Reader:
    """Cursor over a byte string that raises TruncatedFileError on underrun."""

    def __init__(self, data: bytes, path):
        self.data = data
        self.pos = 0
        self.path = path

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedFileError(
                f"{self.path}: expected {n} more bytes at offset {self.pos}, "
                f"file has {len(self.data) - self.pos}"
            )
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u8(self) -> int:
        return self.take(1)[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def f64_array(self, count: int) -> np.ndarray:
        raw = self.take(8 * count)
        return np.frombuffer(raw, dtype="<f8", count=count).astype(np.float64)

    def expect_magic(self, magic: bytes):
        got = self.take(len(magic))
        if got != magic:
            raise BadMagicError(f"{self.path}: bad magic {got!r}, expected {magic!r}")

    def done(self):
        if self.pos != len(self.data):
            raise DimensionError(
                f"{self.path}: {len(self.data) - self.pos} trailing bytes "
                "beyond declared payload"
            )


def _read_file(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise FileAccessError(f"cannot read {path}: {exc}") from exc


def _write_file(path, data: bytes):
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise FileAccessError(f"cannot write {path}: {exc}") from exc


def _matrix_block(m: np.ndarray) -> bytes:
    rows, cols = m.shape
    return (
        MATRIX_MAGIC
        + struct.pack("<QQ", rows, cols)
        + np.ascontiguousarray(m, dtype="<f8").tobytes()
    )


def _read_matrix_block(r: _Reader) -> np.ndarray:
    r.expect_magic(MATRIX_MAGIC)
    rows = r.u64()
    cols = r.u64()
    if rows < 1 or cols < 1:
        raise DimensionError(f"{r.path}: invalid matrix dimensions {rows}x{cols}")
    return r.f64_array(rows * cols).reshape(rows, cols)


# ---------------------------------------------------------------------------
# matrices

def save_matrix(m, path):
    """Write a dense 2-D float64 matrix; load_matrix(save_matrix(m)) == m bitwise."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"matrix must be 2-D and non-empty, got shape {m.shape}")
    _write_file(path, _matrix_block(m))


def load_matrix(path) -> np.ndarray:
    r = _Reader(_read_file(path), path)
    m = _read_matrix_block(r)
    r.done()
    return m


# ---------------------------------------------------------------------------
# PNG import/export

def import_png(path) -> FloatImage:
    """Read a PNG into float64 with peak 2^depth - 1.

    Grayscale is replicated to 3 channels, an alpha channel is dropped.
    """
    if not os.path.exists(path):
        raise FileAccessError(f"no such file: {path}")
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise FormatError(f"{path}: not a readable image file")
    if raw.dtype == np.uint8:
        peak = 255.0
    elif raw.dtype == np.uint16:
        peak = 65535.0
    else:
        raise FormatError(f"{path}: unsupported sample type {raw.dtype}")
    if raw.ndim == 2:
        rgb = np.stack([raw, raw, raw], axis=-1)
    elif raw.ndim == 3 and raw.shape[2] == 3:
        rgb = raw[:, :, ::-1]  # BGR -> RGB
    elif raw.ndim == 3 and raw.shape[2] == 4:
        rgb = raw[:, :, 2::-1]
    else:
        raise ShapeError(f"{path}: unsupported channel count {raw.shape}")
    return FloatImage(rgb.astype(np.float64), peak)


def quantize(samples: np.ndarray, depth: int) -> np.ndarray:
    """Round half away from zero, then clamp to [0, 2^depth - 1]."""
    if depth not in (8, 16):
        raise ParameterError(f"export depth must be 8 or 16, got {depth}")
    limit = float(2 ** depth - 1)
    rounded = np.copysign(np.floor(np.abs(samples) + 0.5), samples)
    clamped = np.clip(rounded, 0.0, limit)
    return clamped.astype(np.uint8 if depth == 8 else np.uint16)


def export_png(img: FloatImage, depth: int, path):
    """Quantize to the given bit depth and write a PNG (lossy for extraction)."""
    q = quantize(img.pixels, depth)
    bgr = np.ascontiguousarray(q[:, :, ::-1])
    try:
        ok = cv2.imwrite(str(path), bgr)
    except cv2.error as exc:
        raise FileAccessError(f"cannot write {path}: {exc}") from exc
    if not ok:
        raise FileAccessError(f"cannot write {path}")


# ---------------------------------------------------------------------------
# lossless stego container

def save_stego(img: FloatImage, path):
    h, w = img.height, img.width
    blob = (
        STEGO_MAGIC
        + struct.pack("<QQQ", h, w, 3)
        + struct.pack("<d", img.peak)
        + np.ascontiguousarray(img.pixels, dtype="<f8").tobytes()
    )
    _write_file(path, blob)


def load_stego(path) -> FloatImage:
    r = _Reader(_read_file(path), path)
    r.expect_magic(STEGO_MAGIC)
    h, w, c = r.u64(), r.u64(), r.u64()
    if c != 3:
        raise DimensionError(f"{path}: stego container must have 3 channels, got {c}")
    if h < 1 or w < 1:
        raise DimensionError(f"{path}: invalid stego dimensions {h}x{w}")
    peak = r.f64()
    if not peak > 0:
        raise FormatError(f"{path}: declared peak must be > 0, got {peak}")
    pixels = r.f64_array(h * w * 3).reshape(h, w, 3)
    r.done()
    return FloatImage(pixels, peak)


# ---------------------------------------------------------------------------
# extraction keys

def save_key(key: StegoKey, path):
    if key.mode not in _MODE_CODES:
        raise KeyFieldError(f"unknown extraction mode {key.mode!r}")
    if len(key.channels) != 3:
        raise KeyFieldError(f"key must carry 3 channel records, has {len(key.channels)}")
    parts = [
        KEY_MAGIC,
        struct.pack("<d", key.alpha),
        struct.pack("<QQ", key.side, key.pad_count),
        struct.pack("<d", key.peak),
    ]
    for ch in key.channels:
        sv = np.asarray(ch.cover_sv, dtype="<f8")
        parts.append(struct.pack("<Q", sv.size))
        parts.append(sv.tobytes())
        for m in (ch.texture_u, ch.texture_v):
            parts.append(_matrix_block(np.asarray(m, dtype=np.float64)))
    fam = key.family.encode("utf-8")
    parts.append(struct.pack("<B", _MODE_CODES[key.mode]))
    parts.append(struct.pack("<H", len(fam)))
    parts.append(fam)
    _write_file(path, b"".join(parts))


def _check_orthogonal(m: np.ndarray, side: int, label: str, path):
    if m.shape != (side, side):
        raise KeyFieldError(f"{path}: {label} must be {side}x{side}, got {m.shape}")
    gram = m.T @ m
    err = np.max(np.abs(gram - np.eye(side)))
    if err > ORTHOGONALITY_TOL:
        raise KeyFieldError(
            f"{path}: {label} is not orthogonal (max |U'U - I| = {err:.3e})"
        )


def load_key(path) -> StegoKey:
    r = _Reader(_read_file(path), path)
    r.expect_magic(KEY_MAGIC)
    alpha = r.f64()
    side = r.u64()
    pad_count = r.u64()
    peak = r.f64()
    if side < 1:
        raise KeyFieldError(f"{path}: plane side must be >= 1, got {side}")
    if pad_count >= 2 * side - 1:
        raise KeyFieldError(f"{path}: pad count {pad_count} inconsistent with side {side}")
    if not alpha > 0:
        raise KeyFieldError(f"{path}: embedding strength must be > 0, got {alpha}")
    channels = []
    for label in ("red", "green", "blue"):
        count = r.u64()
        if count != side:
            raise KeyFieldError(
                f"{path}: {label} singular value count {count} does not match side {side}"
            )
        sv = r.f64_array(count)
        if np.any(sv < 0) or np.any(np.diff(sv) > 0):
            raise KeyFieldError(
                f"{path}: {label} cover singular values must be non-negative "
                "and non-increasing"
            )
        u = _read_matrix_block(r)
        v = _read_matrix_block(r)
        _check_orthogonal(u, side, f"{label} texture U", path)
        _check_orthogonal(v, side, f"{label} texture V", path)
        channels.append(ChannelKey(sv, u, v))
    mode_code = r.u8()
    if mode_code not in _MODE_NAMES:
        raise KeyFieldError(f"{path}: unknown mode code {mode_code}")
    fam_len = r.u16()
    family = r.take(fam_len).decode("utf-8")
    if not family:
        raise KeyFieldError(f"{path}: empty wavelet family tag")
    r.done()
    return StegoKey(
        alpha=alpha,
        side=side,
        pad_count=pad_count,
        peak=peak,
        channels=channels,
        mode=_MODE_NAMES[mode_code],
        family=family,
    )


# ---------------------------------------------------------------------------
# fitted models (dataclasses live in facemodel; serialization lives here)

def save_pca_model(model, path):
    from .facemodel import PcaModel  # noqa: F401  (documents the expected type)

    blob = (
        PCA_MAGIC
        + _matrix_block(np.asarray(model.mean, dtype=np.float64).reshape(1, -1))
        + _matrix_block(np.asarray(model.coeff, dtype=np.float64))
        + _matrix_block(np.asarray(model.score, dtype=np.float64))
    )
    _write_file(path, blob)


def load_pca_model(path):
    from .facemodel import PcaModel

    r = _Reader(_read_file(path), path)
    r.expect_magic(PCA_MAGIC)
    mean = _read_matrix_block(r)
    coeff = _read_matrix_block(r)
    score = _read_matrix_block(r)
    r.done()
    if mean.shape != (1, 3):
        raise DimensionError(f"{path}: mean block must be 1x3, got {mean.shape}")
    if coeff.shape != (3, 3):
        raise DimensionError(f"{path}: loadings block must be 3x3, got {coeff.shape}")
    if score.shape[1] != 3:
        raise DimensionError(f"{path}: score block must be Nx3, got {score.shape}")
    return PcaModel(mean=mean.reshape(3), coeff=coeff, score=score)


def save_basis(model, path):
    parts = [
        BASIS_MAGIC,
        struct.pack("<QQ", len(model.components), model.n_samples),
        _matrix_block(np.asarray(model.mean, dtype=np.float64)),
        _matrix_block(np.asarray(model.spectrum, dtype=np.float64).reshape(-1, 1)),
    ]
    for comp in model.components:
        parts.append(_matrix_block(np.asarray(comp, dtype=np.float64)))
    _write_file(path, b"".join(parts))


def load_basis(path):
    from .facemodel import BasisModel

    r = _Reader(_read_file(path), path)
    r.expect_magic(BASIS_MAGIC)
    n_components = r.u64()
    n_samples = r.u64()
    mean = _read_matrix_block(r)
    spectrum = _read_matrix_block(r).reshape(-1)
    components = [_read_matrix_block(r) for _ in range(n_components)]
    r.done()
    for comp in components:
        if comp.shape != (3, mean.shape[0]):
            raise DimensionError(
                f"{path}: component must be 3x{mean.shape[0]}, got {comp.shape}"
            )
    return BasisModel(
        mean=mean,
        components=components,
        singular_values=spectrum[:n_components].copy(),
        spectrum=spectrum,
        n_samples=n_samples,
    )
