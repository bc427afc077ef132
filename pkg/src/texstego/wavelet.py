"""Single-level 2-D wavelet analysis/synthesis of 3-channel images.

The default (and currently only) family is orthonormal Haar. Per channel,
each disjoint 2x2 block ``(a b; c d)`` maps to

    CA = (a+b+c+d)/2     approximation
    CH = (a-b+c-d)/2     horizontal detail (differences along columns)
    CV = (a+b-c-d)/2     vertical detail   (differences along rows)
    CD = (a-b-c+d)/2     diagonal detail

which is orthonormal (energy preserving) and exactly invertible at even
sizes, so no boundary handling is needed. Odd inputs are rejected; callers
resize instead of padding.

``register_family`` is the hook for adding further orthonormal families.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError, ShapeError
from .io_formats import FloatImage


def _haar_analyze(x: np.ndarray):
    a = x[0::2, 0::2]
    b = x[0::2, 1::2]
    c = x[1::2, 0::2]
    d = x[1::2, 1::2]
    ca = (a + b + c + d) / 2.0
    ch = (a - b + c - d) / 2.0
    cv = (a + b - c - d) / 2.0
    cd = (a - b - c + d) / 2.0
    return ca, ch, cv, cd


def _haar_synthesize(ca, ch, cv, cd):
    h, w = ca.shape[:2]
    out = np.empty((2 * h, 2 * w) + ca.shape[2:], dtype=np.float64)
    out[0::2, 0::2] = (ca + ch + cv + cd) / 2.0
    out[0::2, 1::2] = (ca - ch + cv - cd) / 2.0
    out[1::2, 0::2] = (ca + ch - cv - cd) / 2.0
    out[1::2, 1::2] = (ca - ch - cv + cd) / 2.0
    return out


_FAMILIES = {"haar": (_haar_analyze, _haar_synthesize)}


def register_family(name: str, analyze, synthesize):
    """Register an orthonormal analysis/synthesis pair under a family tag."""
    _FAMILIES[name] = (analyze, synthesize)


def _family(name: str):
    try:
        return _FAMILIES[name]
    except KeyError:
        raise ParameterError(
            f"unknown wavelet family {name!r}; known: {sorted(_FAMILIES)}"
        ) from None


@dataclass
class SubbandSet:
    """One decomposition level: four (H/2, W/2, 3) subbands plus metadata."""

    ca: np.ndarray
    ch: np.ndarray
    cv: np.ndarray
    cd: np.ndarray
    family: str = "haar"
    peak: float = 1.0  # carried through so synthesis can rebuild a FloatImage

    def bands(self):
        return self.ca, self.ch, self.cv, self.cd


def dwt2(img: FloatImage, family: str = "haar") -> SubbandSet:
    """Decompose a 3-channel image into (CA, CH, CV, CD)."""
    analyze, _ = _family(family)
    h, w = img.height, img.width
    if h < 2 or w < 2 or h % 2 or w % 2:
        raise DimensionError(
            f"image size must be even and >= 2 in both dimensions, got {h}x{w}"
        )
    ca, ch, cv, cd = analyze(img.pixels)
    return SubbandSet(ca=ca, ch=ch, cv=cv, cd=cd, family=family, peak=img.peak)


def idwt2(subbands: SubbandSet) -> FloatImage:
    """Exact inverse of dwt2 for the same family."""
    _, synthesize = _family(subbands.family)
    shapes = {band.shape for band in subbands.bands()}
    if len(shapes) != 1:
        raise ShapeError(f"subband shapes differ: {sorted(shapes)}")
    pixels = synthesize(*subbands.bands())
    return FloatImage(pixels, subbands.peak)
