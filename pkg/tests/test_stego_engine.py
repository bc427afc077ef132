import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from texstego import (
    FloatImage,
    NumericError,
    ParameterError,
    ShapeError,
    SubbandSet,
    dwt2,
    embed,
    extract,
    idwt2,
    pack_texture,
    prepare_cover,
    svd,
)
from texstego.errors import KeyFieldError
from conftest import gap_dominant_cover, rand_image


# ---------------------------------------------------------------------------
# svd

def test_svd_identity():
    triple = svd(np.eye(2))
    assert np.allclose(triple.s, [1.0, 1.0])


def test_svd_sorts_diagonal():
    triple = svd(np.diag([3.0, 4.0]))
    assert np.allclose(triple.s, [4.0, 3.0])


def test_svd_reconstructs_random_square():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(5, 5))
    triple = svd(m)
    assert np.linalg.norm(triple.reconstruct() - m) <= 1e-10 * np.linalg.norm(m)


@settings(max_examples=40, deadline=None)
@given(
    rows=st.integers(1, 8),
    cols=st.integers(1, 8),
    seed=st.integers(0, 2**31),
)
def test_svd_contract_property(rows, cols, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(scale=10.0, size=(rows, cols))
    triple = svd(m)
    assert triple.u.shape == (rows, rows)
    assert triple.v.shape == (cols, cols)
    assert triple.s.shape == (min(rows, cols),)
    assert np.all(triple.s >= 0)
    assert np.all(np.diff(triple.s) <= 1e-12 * max(triple.s[0], 1.0))
    assert np.allclose(triple.u.T @ triple.u, np.eye(rows), atol=1e-9)
    assert np.allclose(triple.v.T @ triple.v, np.eye(cols), atol=1e-9)
    scale = max(float(np.linalg.norm(m)), 1e-12)
    assert np.linalg.norm(triple.reconstruct() - m) <= 1e-10 * scale
    # sign convention: dominant entry of every U column is positive
    for j in range(rows):
        col = triple.u[:, j]
        assert col[np.argmax(np.abs(col))] > 0


def test_svd_deterministic():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(6, 6))
    a, b = svd(m), svd(m.copy())
    assert np.array_equal(a.u, b.u)
    assert np.array_equal(a.s, b.s)
    assert np.array_equal(a.v, b.v)


def test_svd_rejects_non_finite():
    m = np.ones((3, 3))
    m[1, 1] = np.nan
    with pytest.raises(NumericError):
        svd(m)


def test_svd_rejects_non_matrix():
    with pytest.raises(ShapeError):
        svd(np.zeros((2, 2, 2)))


# ---------------------------------------------------------------------------
# embed

def _fixture(seed=0, side=16, n=250, alpha=0.1, texture_scale=255.0):
    rng = np.random.default_rng(seed)
    texture = rng.uniform(0, texture_scale, size=(n, 3))
    # min gap must dominate 2 * alpha * max(St); max(St) <~ mean * side
    min_gap = 4.0 * alpha * texture_scale * side
    cover = gap_dominant_cover(rng, side, min_gap)
    return cover, texture


def test_embed_zero_texture_is_neutral():
    rng = np.random.default_rng(2)
    cover = rand_image(rng, 32, 32)
    result = embed(cover, np.zeros((256, 3)), alpha=0.1)
    rel = np.linalg.norm(result.stego.pixels - cover.pixels)
    assert rel <= 1e-12 * np.linalg.norm(cover.pixels)


def test_embed_rejects_alpha_out_of_range():
    rng = np.random.default_rng(3)
    cover = rand_image(rng, 4, 4)
    with pytest.raises(ParameterError):
        embed(cover, np.zeros((4, 3)), alpha=0.0)
    with pytest.raises(ParameterError):
        embed(cover, np.zeros((4, 3)), alpha=-0.1)


def test_embed_rejects_mismatched_cover():
    rng = np.random.default_rng(4)
    cover = rand_image(rng, 30, 32)
    with pytest.raises(ShapeError):
        embed(cover, np.zeros((256, 3)))


def test_embed_psnr_matches_direct_pixel_computation():
    cover, texture = _fixture(seed=5)
    result = embed(cover, texture, alpha=0.1)
    diff = result.stego.pixels - cover.pixels
    direct_mse = float(np.mean(diff * diff))
    direct_psnr = -10.0 * np.log10(direct_mse / cover.peak**2)
    assert abs(result.psnr_db - direct_psnr) <= 1e-9


def test_embed_key_records_parameters():
    cover, texture = _fixture(seed=6)
    result = embed(cover, texture, alpha=0.25, mode="literal", family="haar")
    key = result.key
    assert key.alpha == 0.25
    assert key.mode == "literal"
    assert key.family == "haar"
    assert key.side == 16
    assert key.original_rows == 250
    assert key.pad_count == 6
    assert key.peak == cover.peak
    assert len(key.channels) == 3
    for ch in key.channels:
        assert np.all(np.diff(ch.cover_sv) <= 0)
        assert np.all(ch.cover_sv >= 0)


def test_embed_psnr_monotone_in_alpha():
    cover, texture = _fixture(seed=7)
    values = [embed(cover, texture, alpha=a).psnr_db
              for a in (0.01, 0.05, 0.1, 0.5)]
    assert all(x >= y for x, y in zip(values, values[1:]))


def test_embed_touches_only_cd():
    cover, texture = _fixture(seed=8)
    result = embed(cover, texture, alpha=0.1)
    sb_cover = dwt2(cover)
    sb_stego = dwt2(result.stego)
    patched = SubbandSet(ca=sb_stego.ca, ch=sb_stego.ch, cv=sb_stego.cv,
                         cd=sb_cover.cd, family="haar", peak=cover.peak)
    rebuilt = idwt2(patched)
    assert np.linalg.norm(rebuilt.pixels - cover.pixels) <= \
        1e-12 * np.linalg.norm(cover.pixels)


def test_embed_warns_when_gaps_do_not_dominate():
    rng = np.random.default_rng(9)
    cover = rand_image(rng, 32, 32)  # random cover: gaps are tiny
    texture = rng.uniform(0, 255, size=(256, 3))
    result = embed(cover, texture, alpha=0.1)
    assert len(result.warnings) == 3


def test_embed_no_warning_on_gap_dominant_fixture():
    cover, texture = _fixture(seed=10)
    assert embed(cover, texture, alpha=0.1).warnings == []


def test_embed_deterministic():
    cover, texture = _fixture(seed=11)
    a = embed(cover, texture, alpha=0.1)
    b = embed(cover, texture, alpha=0.1)
    assert np.array_equal(a.stego.pixels, b.stego.pixels)
    assert a.psnr_db == b.psnr_db


# ---------------------------------------------------------------------------
# extract

def test_roundtrip_key_mode_on_gap_dominant_fixture():
    cover, texture = _fixture(seed=12)
    result = embed(cover, texture, alpha=0.1)
    assert result.warnings == []
    recovered = extract(result.stego, result.key)
    orig_planes = pack_texture(texture).planes
    rec_planes = pack_texture(recovered).planes
    for c in range(3):
        num = np.linalg.norm(rec_planes[:, :, c] - orig_planes[:, :, c])
        den = np.linalg.norm(orig_planes[:, :, c])
        assert num <= 1e-8 * den


def test_roundtrip_zero_texture_extracts_near_zero():
    rng = np.random.default_rng(13)
    cover = rand_image(rng, 32, 32)
    result = embed(cover, np.zeros((256, 3)), alpha=0.1)
    recovered = extract(result.stego, result.key)
    assert recovered.shape == (256, 3)
    assert np.max(np.abs(recovered)) <= 1e-6


def test_literal_mode_runs_but_does_not_recover():
    cover, texture = _fixture(seed=14)
    result = embed(cover, texture, alpha=0.1, mode="literal")
    recovered = extract(result.stego, result.key)
    assert recovered.shape == texture.shape
    rel = np.linalg.norm(recovered - texture) / np.linalg.norm(texture)
    # fidelity reported, not asserted: literal mode rebuilds with the
    # stego's own singular vectors, which approximate the cover's
    print(f"literal-mode relative error: {rel:.3e}")


def test_extract_mode_override():
    cover, texture = _fixture(seed=15)
    result = embed(cover, texture, alpha=0.1, mode="literal")
    recovered = extract(result.stego, result.key, mode="key")
    rel = np.linalg.norm(recovered - texture) / np.linalg.norm(texture)
    assert rel <= 1e-8


def test_extract_rejects_side_mismatch():
    cover, texture = _fixture(seed=16)
    result = embed(cover, texture, alpha=0.1)
    rng = np.random.default_rng(17)
    wrong = rand_image(rng, 16, 16, peak=cover.peak)
    with pytest.raises(ShapeError):
        extract(wrong, result.key)


def test_extract_rejects_incomplete_key():
    cover, texture = _fixture(seed=18)
    result = embed(cover, texture, alpha=0.1)
    result.key.channels = result.key.channels[:2]
    with pytest.raises(KeyFieldError):
        extract(result.stego, result.key)


def test_extract_rejects_unknown_mode():
    cover, texture = _fixture(seed=19)
    result = embed(cover, texture, alpha=0.1)
    with pytest.raises(KeyFieldError):
        extract(result.stego, result.key, mode="guesswork")


def test_extract_deterministic():
    cover, texture = _fixture(seed=20)
    result = embed(cover, texture, alpha=0.1)
    a = extract(result.stego, result.key)
    b = extract(result.stego, result.key)
    assert np.array_equal(a, b)


def test_recovered_singular_values_clamped_non_negative():
    # quantize the stego to force small negative (Se - Sc) differences
    from texstego import quantize

    rng = np.random.default_rng(21)
    cover = rand_image(rng, 32, 32)
    texture = rng.uniform(0, 1, size=(256, 3))  # tiny payload
    result = embed(cover, texture, alpha=0.01)
    rounded = FloatImage(quantize(result.stego.pixels, 8).astype(np.float64),
                         result.stego.peak)
    recovered = extract(rounded, result.key)
    assert recovered.shape == (256, 3)
    assert np.all(np.isfinite(recovered))


# ---------------------------------------------------------------------------
# prepare_cover

def test_prepare_cover_identity():
    rng = np.random.default_rng(22)
    img = rand_image(rng, 464, 464)
    out = prepare_cover(img, 232)
    assert out.pixels.shape == (464, 464, 3)
    assert np.array_equal(out.pixels, img.pixels)
    assert out.pixels is not img.pixels


def test_prepare_cover_constant_downscale():
    img = FloatImage(np.full((928, 928, 3), 42.0), 255.0)
    out = prepare_cover(img, 232)
    assert out.pixels.shape == (464, 464, 3)
    assert np.allclose(out.pixels, 42.0, atol=1e-9)


def test_prepare_cover_reshapes_any_source():
    rng = np.random.default_rng(23)
    img = rand_image(rng, 100, 200)
    out = prepare_cover(img, 232)
    assert out.pixels.shape == (464, 464, 3)
    assert out.peak == img.peak


def test_prepare_cover_rejects_degenerate():
    img = FloatImage(np.zeros((0, 5, 3)), 255.0)
    with pytest.raises(ShapeError):
        prepare_cover(img, 4)
    rng = np.random.default_rng(24)
    with pytest.raises(ParameterError):
        prepare_cover(rand_image(rng, 4, 4), 0)
