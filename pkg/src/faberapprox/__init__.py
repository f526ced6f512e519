"""Faber-Schauder sparse-grid approximation, quantized coverings and parametric-manifold codes."""

from .budget import ParamBudget, ParamSelection, pipeline_error_bound, select_params
from .codec import CorruptCodeError, ManifoldCode, decode_eval, encode
from .corpus import CorpusError, FunctionSpec, make_function, norm_estimate, seminorm_estimate
from .covering import CoveringCode, build_covering, covering_error_bound
from .faber1d import DyadicIndex, UnivariateQuantizedCode, faber_coeff, quantize, truncate_univariate
from .measure import sup_error
from .suites import ErrorReport, SuiteConfig, run_suite
from .tensor import SparseFaberExpansion, TensorFaberIndex, smolyak_grid, sparse_truncate

__all__ = [
    "CorpusError",
    "CorruptCodeError",
    "CoveringCode",
    "DyadicIndex",
    "ErrorReport",
    "FunctionSpec",
    "ManifoldCode",
    "ParamBudget",
    "ParamSelection",
    "SparseFaberExpansion",
    "SuiteConfig",
    "TensorFaberIndex",
    "UnivariateQuantizedCode",
    "build_covering",
    "covering_error_bound",
    "decode_eval",
    "encode",
    "faber_coeff",
    "make_function",
    "norm_estimate",
    "pipeline_error_bound",
    "quantize",
    "run_suite",
    "select_params",
    "seminorm_estimate",
    "smolyak_grid",
    "sparse_truncate",
    "sup_error",
    "truncate_univariate",
]
