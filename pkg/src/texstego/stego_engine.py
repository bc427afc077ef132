"""Embed a packed texture into a cover's diagonal-detail subband and extract it.

Embedding (per color channel i):

    (Uc, Sc, Vc) = svd(CD_i of the cover)
    (Ut, St, Vt) = svd(texture plane i)
    CDnew_i      = Uc diag(Sc + alpha * St) Vc'

and the stego image is the inverse wavelet transform with CDnew in place of
CD. Extraction recomputes the stego's CD singular values Se and recovers
St = (Se - Sc) / alpha. Two reconstruction modes exist:

* ``key``     (default): plane = Ut diag(St) Vt' with Ut, Vt stored in the
  key. This recovers the texture.
* ``literal``: plane = Ue diag(St) Ve' using the stego's own singular
  vectors Ue, Ve. Those approximate the *cover's* vectors, not the
  texture's, so this mode cannot recover general textures; it is kept
  selectable for comparison.

Both sides pair singular values by sorted index. Since Sc and St are each
non-increasing, Sc + alpha*St stays sorted, but re-decomposition pairs
reliably only when the embedding stays small against the cover's spectral
gaps; embed() attaches a warning when alpha*max(St) >= half the minimum
gap of Sc.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import cv2
import numpy as np

from .errors import KeyFieldError, NumericError, ParameterError, ShapeError
from .io_formats import MODE_KEY, MODE_LITERAL, ChannelKey, FloatImage, StegoKey
from .metrics import psnr
from .texture_codec import ChannelPlaneSet, pack_texture, unpack_texture
from .wavelet import SubbandSet, dwt2, idwt2

CHANNEL_NAMES = ("red", "green", "blue")
DEFAULT_ALPHA = 0.1


@dataclass
class SvdTriple:
    """Full SVD with a deterministic sign convention.

    The largest-magnitude entry of each column of U is made positive (ties
    broken by first index); paired columns of V are flipped to match.
    """

    u: np.ndarray  # (m, m)
    s: np.ndarray  # (min(m, n),) non-increasing, non-negative
    v: np.ndarray  # (n, n)

    def reconstruct(self) -> np.ndarray:
        m, n = self.u.shape[0], self.v.shape[0]
        sigma = np.zeros((m, n))
        k = self.s.size
        sigma[:k, :k] = np.diag(self.s)
        return self.u @ sigma @ self.v.T


@dataclass
class EmbedResult:
    stego: FloatImage
    key: StegoKey
    psnr_db: float
    warnings: list[str] = field(default_factory=list)


def svd(m) -> SvdTriple:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeError(f"svd expects a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError("svd input contains non-finite values")
    u, s, vt = np.linalg.svd(m, full_matrices=True)
    v = vt.T
    cols = np.arange(u.shape[1])
    signs = np.sign(u[np.argmax(np.abs(u), axis=0), cols])
    signs[signs == 0] = 1.0
    u = u * signs
    k = s.size  # columns beyond min(m, n) have no paired V column
    v[:, :k] = v[:, :k] * signs[:k]
    return SvdTriple(u=u, s=s, v=v)


def _rebuild(u: np.ndarray, sv: np.ndarray, v: np.ndarray) -> np.ndarray:
    return (u * sv) @ v.T


def _gap_margin(cover_sv: np.ndarray, texture_sv: np.ndarray, alpha: float):
    """(perturbation, half the minimum cover gap); dominant iff pert < margin."""
    perturbation = alpha * float(texture_sv[0]) if texture_sv.size else 0.0
    if cover_sv.size < 2:
        return perturbation, np.inf
    min_gap = float(np.min(cover_sv[:-1] - cover_sv[1:]))
    return perturbation, 0.5 * min_gap


def embed(cover: FloatImage, texture, alpha: float = DEFAULT_ALPHA,
          mode: str = "key", family: str = "haar") -> EmbedResult:
    """Hide an Nx3 texture in a cover of size (2*side) x (2*side) x 3.

    The caller is responsible for resizing the cover first (prepare_cover);
    a mismatch is an error, not an implicit resample.
    """
    if not alpha > 0:
        raise ParameterError(f"embedding strength must be > 0, got {alpha}")
    plane_set = pack_texture(texture)
    side = plane_set.side
    if cover.height != 2 * side or cover.width != 2 * side:
        raise ShapeError(
            f"cover must be {2 * side}x{2 * side} for a texture with "
            f"{plane_set.original_rows} rows, got {cover.height}x{cover.width}"
        )
    subbands = dwt2(cover, family=family)
    cd_new = np.empty_like(subbands.cd)
    channels = []
    warnings = []
    for i, name in enumerate(CHANNEL_NAMES):
        cover_svd = svd(subbands.cd[:, :, i])
        texture_svd = svd(plane_set.planes[:, :, i])
        cd_new[:, :, i] = _rebuild(
            cover_svd.u, cover_svd.s + alpha * texture_svd.s, cover_svd.v
        )
        channels.append(ChannelKey(
            cover_sv=cover_svd.s,
            texture_u=texture_svd.u,
            texture_v=texture_svd.v,
        ))
        perturbation, margin = _gap_margin(cover_svd.s, texture_svd.s, alpha)
        if not perturbation < margin:
            warnings.append(
                f"{name} channel: embedding perturbation {perturbation:.6g} is not "
                f"below half the minimum cover singular-value gap {margin:.6g}; "
                "extraction may pair singular values inexactly"
            )
    stego = idwt2(SubbandSet(
        ca=subbands.ca, ch=subbands.ch, cv=subbands.cv, cd=cd_new,
        family=family, peak=cover.peak,
    ))
    key = StegoKey(
        alpha=alpha,
        side=side,
        pad_count=plane_set.pad_count,
        peak=cover.peak,
        channels=channels,
        mode=mode,
        family=family,
    )
    return EmbedResult(stego=stego, key=key, psnr_db=psnr(cover, stego),
                       warnings=warnings)


def extract(stego: FloatImage, key: StegoKey, mode: str | None = None) -> np.ndarray:
    """Recover the hidden Nx3 texture from a stego image using its key."""
    if len(key.channels) != 3:
        raise KeyFieldError(f"key must carry 3 channel records, has {len(key.channels)}")
    mode = key.mode if mode is None else mode
    if mode not in (MODE_KEY, MODE_LITERAL):
        raise KeyFieldError(f"unknown extraction mode {mode!r}")
    if stego.height != 2 * key.side or stego.width != 2 * key.side:
        raise ShapeError(
            f"stego is {stego.height}x{stego.width} but key declares side "
            f"{key.side} (expects {2 * key.side}x{2 * key.side})"
        )
    subbands = dwt2(stego, family=key.family)
    planes = np.empty((key.side, key.side, 3))
    for i, ch in enumerate(key.channels):
        stego_svd = svd(subbands.cd[:, :, i])
        recovered_sv = np.maximum((stego_svd.s - ch.cover_sv) / key.alpha, 0.0)
        if mode == MODE_KEY:
            planes[:, :, i] = _rebuild(ch.texture_u, recovered_sv, ch.texture_v)
        else:
            planes[:, :, i] = _rebuild(stego_svd.u, recovered_sv, stego_svd.v)
    plane_set = ChannelPlaneSet(
        side=key.side,
        planes=planes,
        pad_count=key.pad_count,
        original_rows=key.original_rows,
    )
    return unpack_texture(plane_set)


def prepare_cover(img: FloatImage, side: int) -> FloatImage:
    """Bilinear-resample a cover to (2*side) x (2*side) x 3."""
    if side < 1:
        raise ParameterError(f"side must be >= 1, got {side}")
    if img.height < 1 or img.width < 1:
        raise ShapeError(f"degenerate source image {img.height}x{img.width}")
    target = 2 * side
    if img.height == target and img.width == target:
        return FloatImage(img.pixels.copy(), img.peak)
    resized = cv2.resize(img.pixels, (target, target), interpolation=cv2.INTER_LINEAR)
    return FloatImage(resized, img.peak)
