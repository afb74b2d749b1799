"""Mosaics of combinatorial designs as security functions for
classical-quantum wiretap channels, with numerical verification of the
associated leakage bounds."""

__version__ = "0.1.0"

from .designs import (  # noqa: F401
    ClassMatrix,
    DesignParams,
    IncidenceStructure,
    Mosaic,
    mosaic_from_function,
    verify_bibd,
    verify_gdd,
    verify_mosaic,
    verify_tactical,
)
from .field_mosaic import FieldMosaic, SeedValue, build_field_mosaic  # noqa: F401
from .gf import FieldCtx, FieldElement, Subspace, field_ctx  # noqa: F401
from .quantum import (  # noqa: F401
    DensityOperator,
    HermitianOperator,
    StateEnsemble,
    holevo,
    rel_entropy,
    renyi2,
    trace_distance,
    von_neumann_entropy,
)
from .wiretap import (  # noqa: F401
    Code,
    CommonRandomnessCode,
    CqChannel,
    LeakageReport,
    SeedBlockStates,
    WiretapPair,
    avg_error,
    build_modular_code,
    leakage_bound,
    max_error,
    max_leakage_search,
    pgm_decoder,
)
