"""Hide 3-D face texture matrices inside cover images (wavelet-domain
singular-value embedding) and build/combine PCA face models."""

from .config import ToolConfig, load_config
from .errors import (
    BadMagicError,
    ConvergenceError,
    DataError,
    DimensionError,
    FileAccessError,
    FormatError,
    KeyFieldError,
    MetadataError,
    NumericError,
    ParameterError,
    PeakMismatchError,
    ShapeError,
    TexstegoError,
    TruncatedFileError,
    UsageError,
)
from .facemodel import (
    BasisModel,
    PcaModel,
    build_basis,
    combine_average,
    compute_mean,
    linear_combine,
    pca_fit,
    reexpress,
    synth_dataset,
    synthesize,
)
from .io_formats import (
    ChannelKey,
    FloatImage,
    StegoKey,
    export_png,
    import_png,
    load_basis,
    load_key,
    load_matrix,
    load_pca_model,
    load_stego,
    quantize,
    save_basis,
    save_key,
    save_matrix,
    save_pca_model,
    save_stego,
)
from .metrics import QualityReport, compare, mse, psnr
from .stego_engine import (
    DEFAULT_ALPHA,
    EmbedResult,
    SvdTriple,
    embed,
    extract,
    prepare_cover,
    svd,
)
from .texture_codec import ChannelPlaneSet, pack_texture, plane_side, unpack_texture
from .wavelet import SubbandSet, dwt2, idwt2, register_family

__version__ = "0.1.0"

__all__ = [
    "BadMagicError",
    "BasisModel",
    "ChannelKey",
    "ChannelPlaneSet",
    "ConvergenceError",
    "DataError",
    "DEFAULT_ALPHA",
    "DimensionError",
    "EmbedResult",
    "FileAccessError",
    "FloatImage",
    "FormatError",
    "KeyFieldError",
    "MetadataError",
    "NumericError",
    "ParameterError",
    "PcaModel",
    "PeakMismatchError",
    "QualityReport",
    "ShapeError",
    "StegoKey",
    "SubbandSet",
    "SvdTriple",
    "TexstegoError",
    "ToolConfig",
    "TruncatedFileError",
    "UsageError",
    "build_basis",
    "combine_average",
    "compare",
    "compute_mean",
    "dwt2",
    "embed",
    "export_png",
    "extract",
    "idwt2",
    "import_png",
    "linear_combine",
    "load_basis",
    "load_config",
    "load_key",
    "load_matrix",
    "load_pca_model",
    "load_stego",
    "mse",
    "pack_texture",
    "pca_fit",
    "plane_side",
    "prepare_cover",
    "psnr",
    "quantize",
    "register_family",
    "reexpress",
    "save_basis",
    "save_key",
    "save_matrix",
    "save_pca_model",
    "save_stego",
    "svd",
    "synth_dataset",
    "synthesize",
    "unpack_texture",
    "__version__",
]
