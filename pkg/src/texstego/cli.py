"""Command-line front end.

One verb per invocation: embed, extract, combine, pca-fit, basis-build,
psnr, pack, synth. Machine-readable results and warnings go to stdout as
one JSON object per line; human-readable notes go to stderr unless --json
is set. Exit codes: 0 success, 1 usage error, 2 data/format error,
3 numeric error.

Image arguments ending in .png are read/written as PNG (quantized, hence
lossy for extraction); any other extension uses the lossless float
container. Matrices, keys and models always use their binary containers.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .config import load_config
from .errors import DataError, NumericError, UsageError
from .facemodel import build_basis, pca_fit, reexpress, combine_average, synth_dataset
from .io_formats import (
    FloatImage,
    export_png,
    import_png,
    load_key,
    load_matrix,
    load_stego,
    save_key,
    save_matrix,
    save_stego,
    save_basis,
    save_pca_model,
)
from .metrics import compare
from .stego_engine import DEFAULT_ALPHA, embed, extract, prepare_cover
from .texture_codec import pack_texture, plane_side

PROG = "texstego"


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as UsageError (exit code 1)."""

    def error(self, message):
        raise UsageError(f"{self.format_usage().rstrip()}\n{self.prog}: error: {message}")


def _emit(obj: dict):
    sys.stdout.write(json.dumps(obj) + "\n")


def _say(args, text: str):
    if not args.json:
        print(text, file=sys.stderr)


def _finite_or_str(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def _is_png(path: str) -> bool:
    return path.lower().endswith(".png")


def _load_image(path: str) -> FloatImage:
    return import_png(path) if _is_png(path) else load_stego(path)


def _save_image(img: FloatImage, path: str) -> bool:
    """Write an image; returns True when the write quantized the samples."""
    if _is_png(path):
        depth = 16 if img.peak > 255 else 8
        export_png(img, depth, path)
        return True
    save_stego(img, path)
    return False


# ---------------------------------------------------------------------------
# verb handlers

def _cmd_embed(args, cfg):
    cover = _load_image(args.cover)
    texture = load_matrix(args.texture)
    side = plane_side(texture.shape[0])
    target = 2 * side
    if cover.height != target or cover.width != target:
        _emit({
            "event": "warning", "kind": "cover-resized",
            "from": [cover.height, cover.width], "to": [target, target],
        })
        _say(args, f"resizing cover {cover.height}x{cover.width} -> {target}x{target}")
        cover = prepare_cover(cover, side)
    result = embed(cover, texture, alpha=args.alpha, mode=args.mode,
                   family=cfg.wavelet_family)
    for message in result.warnings:
        _emit({"event": "warning", "kind": "gap-dominance", "message": message})
    if _save_image(result.stego, args.out):
        _emit({"event": "warning", "kind": "png-quantized", "path": args.out})
    save_key(result.key, args.key)
    _emit({
        "event": "embed",
        "psnr_db": _finite_or_str(result.psnr_db),
        "alpha": args.alpha,
        "mode": args.mode,
        "family": cfg.wavelet_family,
        "rows": int(texture.shape[0]),
        "side": side,
        "pad_count": result.key.pad_count,
        "out": args.out,
        "key": args.key,
    })
    _say(args, f"embedded {texture.shape[0]}x3 texture into "
               f"{target}x{target} cover: PSNR {result.psnr_db:.2f} dB")
    return 0


def _cmd_extract(args, cfg):
    stego = _load_image(args.stego)
    key = load_key(args.key)
    texture = extract(stego, key, mode=args.mode)
    save_matrix(texture, args.out)
    used = args.mode if args.mode is not None else key.mode
    _emit({
        "event": "extract",
        "rows": int(texture.shape[0]),
        "cols": 3,
        "mode": used,
        "out": args.out,
    })
    _say(args, f"extracted {texture.shape[0]}x3 texture ({used} mode)")
    return 0


def _cmd_combine(args, cfg):
    def fit(path):
        return pca_fit(load_matrix(path), missing_policy=args.missing,
                       tol=cfg.als_tol, max_iter=cfg.als_max_iter)

    def blend(model_a, model_b):
        return combine_average(reexpress(model_a, model_b),
                               reexpress(model_b, model_b))

    if args.shape and not args.out_shape:
        raise UsageError("--shape requires --out-shape")
    texture_a, texture_b = fit(args.texture[0]), fit(args.texture[1])
    combined = blend(texture_a, texture_b)
    save_matrix(combined, args.out)
    event = {
        "event": "combine",
        "rows": int(combined.shape[0]),
        "missing": args.missing,
        "texture_out": args.out,
    }
    if args.shape:
        shape_a, shape_b = fit(args.shape[0]), fit(args.shape[1])
        save_matrix(blend(shape_a, shape_b), args.out_shape)
        event["shape_out"] = args.out_shape
    _emit(event)
    _say(args, f"combined {combined.shape[0]}x3 texture -> {args.out}"
               + (f", shape -> {args.out_shape}" if args.shape else ""))
    return 0


def _cmd_pca_fit(args, cfg):
    model = pca_fit(load_matrix(args.input), missing_policy=args.missing,
                    tol=cfg.als_tol, max_iter=cfg.als_max_iter)
    save_pca_model(model, args.out)
    _emit({
        "event": "pca-fit",
        "rows": model.n_rows,
        "missing": args.missing,
        "out": args.out,
    })
    _say(args, f"fitted 3-column PCA over {model.n_rows} rows -> {args.out}")
    return 0


def _cmd_basis_build(args, cfg):
    if len(args.inputs) < 2:
        raise UsageError("basis-build needs at least 2 input matrices")
    basis = build_basis([load_matrix(p) for p in args.inputs])
    save_basis(basis, args.out)
    _emit({
        "event": "basis-build",
        "samples": basis.n_samples,
        "components": len(basis.components),
        "singular_values": [float(x) for x in basis.singular_values],
        "out": args.out,
    })
    _say(args, f"basis with {len(basis.components)} components "
               f"from {basis.n_samples} samples -> {args.out}")
    return 0


def _cmd_psnr(args, cfg):
    report = compare(_load_image(args.a), _load_image(args.b))
    _emit({"event": "psnr", **report.to_dict()})
    _say(args, f"PSNR {report.psnr_db:.4f} dB (MSE {report.mse:.6g})")
    return 0


def _cmd_pack(args, cfg):
    plane_set = pack_texture(load_matrix(args.texture))
    event = {
        "event": "pack",
        "rows": plane_set.original_rows,
        "side": plane_set.side,
        "pad_count": plane_set.pad_count,
    }
    if args.out:
        top = float(np.max(plane_set.planes))
        _save_image(FloatImage(plane_set.planes, max(1.0, top)), args.out)
        event["out"] = args.out
    _emit(event)
    _say(args, f"packed {plane_set.original_rows}x3 into "
               f"{plane_set.side}x{plane_set.side}x3 "
               f"(+{plane_set.pad_count} pad rows)")
    return 0


def _cmd_synth(args, cfg):
    os.makedirs(args.out, exist_ok=True)
    pairs = synth_dataset(args.seed, n_vertices=args.vertices,
                          n_samples=args.samples)
    files = []
    for i, (shape, texture) in enumerate(pairs):
        shape_path = os.path.join(args.out, f"shape_{i:03d}.txm")
        texture_path = os.path.join(args.out, f"texture_{i:03d}.txm")
        save_matrix(shape, shape_path)
        save_matrix(texture, texture_path)
        files += [shape_path, texture_path]
    _emit({
        "event": "synth",
        "seed": args.seed,
        "vertices": args.vertices,
        "samples": args.samples,
        "files": files,
    })
    _say(args, f"wrote {len(files)} matrices to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# parser assembly

def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", default=None,
                        help="JSON config file (default: $TEXSTEGO_CONFIG)")
    common.add_argument("--json", action="store_true",
                        help="suppress human-readable stderr notes")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for synthetic data (default 0)")

    parser = _Parser(prog=PROG, description=__doc__.splitlines()[0])
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    p = verbs.add_parser("embed", parents=[common],
                         help="hide a texture matrix inside a cover image")
    p.add_argument("--cover", required=True, help="cover image (.png or .stg)")
    p.add_argument("--texture", required=True, help="texture matrix (.txm)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA,
                   help=f"embedding strength (default {DEFAULT_ALPHA})")
    p.add_argument("--mode", choices=["key", "literal"], default="key",
                   help="extraction mode recorded in the key (default key)")
    p.add_argument("--out", required=True, help="stego image output path")
    p.add_argument("--key", required=True, help="extraction key output path")
    p.set_defaults(handler=_cmd_embed)

    p = verbs.add_parser("extract", parents=[common],
                         help="recover a hidden texture from a stego image")
    p.add_argument("--stego", required=True, help="stego image (.png or .stg)")
    p.add_argument("--key", required=True, help="extraction key file")
    p.add_argument("--mode", choices=["key", "literal"], default=None,
                   help="override the mode recorded in the key")
    p.add_argument("--out", required=True, help="texture matrix output path")
    p.set_defaults(handler=_cmd_extract)

    p = verbs.add_parser("combine", parents=[common],
                         help="average two faces in a shared principal-axis frame")
    p.add_argument("--texture", nargs=2, required=True, metavar="TXM",
                   help="two texture matrices")
    p.add_argument("--shape", nargs=2, default=None, metavar="TXM",
                   help="two shape matrices (optional)")
    p.add_argument("--out", required=True, help="combined texture output path")
    p.add_argument("--out-shape", default=None, help="combined shape output path")
    p.add_argument("--missing", choices=["none", "als"], default="none",
                   help="missing-entry policy for the PCA fits")
    p.set_defaults(handler=_cmd_combine)

    p = verbs.add_parser("pca-fit", parents=[common],
                         help="fit a 3-column PCA model to one matrix")
    p.add_argument("--in", dest="input", required=True, help="input matrix")
    p.add_argument("--missing", choices=["none", "als"], default="none",
                   help="missing-entry policy")
    p.add_argument("--out", required=True, help="model output path")
    p.set_defaults(handler=_cmd_pca_fit)

    p = verbs.add_parser("basis-build", parents=[common],
                         help="build a mean-plus-components basis from samples")
    p.add_argument("--in", dest="inputs", nargs="+", required=True,
                   metavar="TXM", help="two or more sample matrices")
    p.add_argument("--out", required=True, help="basis output path")
    p.set_defaults(handler=_cmd_basis_build)

    p = verbs.add_parser("psnr", parents=[common],
                         help="compare two images (MSE and PSNR)")
    p.add_argument("--a", required=True, help="reference image")
    p.add_argument("--b", required=True, help="image under test")
    p.set_defaults(handler=_cmd_psnr)

    p = verbs.add_parser("pack", parents=[common],
                         help="fold an Nx3 matrix into square channel planes")
    p.add_argument("--texture", required=True, help="texture matrix (.txm)")
    p.add_argument("--out", default=None,
                   help="optional packed-plane image output path")
    p.set_defaults(handler=_cmd_pack)

    p = verbs.add_parser("synth", parents=[common],
                         help="generate a deterministic synthetic face dataset")
    p.add_argument("--vertices", type=int, default=53490,
                   help="vertex count per face (default 53490)")
    p.add_argument("--samples", type=int, default=2,
                   help="number of faces (default 2)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=_cmd_synth)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and argparse-internal exits
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        return args.handler(args, cfg)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
