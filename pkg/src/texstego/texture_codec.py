"""Pack an Nx3 texture matrix into three square channel planes and back.

Each column (R, G, B) is zero-extended to the next square length side*side
with side = ceil(sqrt(N)), then reshaped column-wise: plane[r, c] holds
column entry c*side + r. Non-finite texture samples are replaced by zero
before reshaping so every plane is finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MetadataError, ShapeError


@dataclass
class ChannelPlaneSet:
    """Three side x side planes plus the metadata needed to invert packing."""

    side: int
    planes: np.ndarray  # (side, side, 3), float64
    pad_count: int
    original_rows: int

    def __post_init__(self):
        if self.side * self.side != self.original_rows + self.pad_count:
            raise MetadataError(
                f"side^2 = {self.side * self.side} != rows {self.original_rows} "
                f"+ pad {self.pad_count}"
            )


def plane_side(n_rows: int) -> int:
    """Smallest side with side*side >= n_rows."""
    return math.isqrt(n_rows - 1) + 1 if n_rows > 0 else 0


def pack_texture(texture) -> ChannelPlaneSet:
    texture = np.asarray(texture, dtype=np.float64)
    if texture.ndim != 2 or texture.shape[1] != 3:
        raise ShapeError(f"texture must be Nx3, got shape {texture.shape}")
    n = texture.shape[0]
    if n < 1:
        raise ShapeError("texture must have at least one row")
    side = plane_side(n)
    pad = side * side - n
    scrubbed = np.where(np.isfinite(texture), texture, 0.0)
    columns = np.vstack([scrubbed, np.zeros((pad, 3))])
    # column-wise fill: entry c*side + r lands at plane[r, c]
    planes = columns.reshape(side, side, 3, order="F").copy()
    return ChannelPlaneSet(side=side, planes=planes, pad_count=pad, original_rows=n)


def unpack_texture(plane_set: ChannelPlaneSet) -> np.ndarray:
    side = plane_set.side
    n = plane_set.original_rows
    if side * side < n:
        raise MetadataError(f"side {side} too small for {n} original rows")
    planes = np.asarray(plane_set.planes, dtype=np.float64)
    if planes.shape != (side, side, 3):
        raise ShapeError(f"planes must be ({side}, {side}, 3), got {planes.shape}")
    columns = planes.reshape(side * side, 3, order="F")
    return columns[:n].copy()
