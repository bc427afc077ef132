"""Image fidelity measures: mean squared error and peak signal-to-noise ratio."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import PeakMismatchError, ShapeError
from .io_formats import FloatImage


@dataclass
class QualityReport:
    mse: float
    psnr_db: float  # math.inf when mse == 0
    peak: float

    def to_dict(self) -> dict:
        # +infinity is serialized as the string "inf" (json has no literal for it)
        psnr = "inf" if math.isinf(self.psnr_db) else self.psnr_db
        return {"mse": self.mse, "psnr_db": psnr, "peak": self.peak}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def mse(a: FloatImage, b: FloatImage) -> float:
    """Mean squared difference over all H*W*3 samples jointly."""
    if a.pixels.shape != b.pixels.shape:
        raise ShapeError(f"image shapes differ: {a.pixels.shape} vs {b.pixels.shape}")
    diff = a.pixels - b.pixels
    return float(np.mean(diff * diff))


def psnr(a: FloatImage, b: FloatImage) -> float:
    """-10 log10(MSE / S^2) in dB; +inf for identical images."""
    if a.peak != b.peak:
        raise PeakMismatchError(f"declared peaks differ: {a.peak} vs {b.peak}")
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return -10.0 * math.log10(err / (a.peak * a.peak))


def compare(a: FloatImage, b: FloatImage) -> QualityReport:
    return QualityReport(mse=mse(a, b), psnr_db=psnr(a, b), peak=a.peak)
