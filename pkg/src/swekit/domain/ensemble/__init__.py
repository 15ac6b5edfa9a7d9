"""
ensemble: weighted concatenation of several static embedding models.
"""

from .spec import EnsembleMember, EnsembleSpec, load_ensemble_spec, make_spec
from .combine import (
    EnsembleEncoded,
    EnsembleEncoder,
    PrecombinedEncoder,
    PrecombinedTable,
    combine_blocks,
    encode_precombined,
    ensemble_encode,
    precombine_tables,
)

__all__ = [
    "EnsembleMember",
    "EnsembleSpec",
    "load_ensemble_spec",
    "make_spec",
    "EnsembleEncoded",
    "EnsembleEncoder",
    "PrecombinedEncoder",
    "PrecombinedTable",
    "combine_blocks",
    "encode_precombined",
    "ensemble_encode",
    "precombine_tables",
]
