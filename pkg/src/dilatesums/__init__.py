"""Exact toolkit for sums of dilated integer sets p*A + q*A."""
from __future__ import annotations

from .core import (
    AUTO_BITSET_SPAN_THRESHOLD,
    BACKENDS,
    AffineMap,
    DilationPair,
    IntSet,
    SetParseError,
    SpanOverflowError,
    affine_image,
    canonicalize,
    coprime_pairs,
    dilated_sumset,
    dilated_sumset_size,
    parse_set_literal,
    read_set_file,
    sumset,
    to_literal,
)

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundReport,
    BoundSet,
    BoundViolationError,
    PropBound,
    main_constant,
    theoretical_bounds,
    verify_bounds,
)
from .constructions import (  # noqa: E402
    ConstructionSpec,
    default_digit_params,
    digit_set,
    digit_sumset_size,
    interval,
    strided_block,
)
from .residues import (  # noqa: E402
    Cell,
    DichotomyRecord,
    DichotomyReport,
    ReductionStep,
    ReductionTrace,
    ResidueClass,
    ResiduePartition,
    check_cell_dichotomy,
    check_class_dichotomy,
    is_fully_distributed,
    is_reduced,
    partition,
    reduce,
    reduction_divisors,
)
from .search import (  # noqa: E402
    SearchResult,
    enumerate_canonical,
    min_dilated_sumset,
    tightness_table,
    universal_lower_bounds,
)

__all__ = [
    "__version__",
    # core
    "AUTO_BITSET_SPAN_THRESHOLD",
    "BACKENDS",
    "AffineMap",
    "DilationPair",
    "IntSet",
    "SetParseError",
    "SpanOverflowError",
    "affine_image",
    "canonicalize",
    "coprime_pairs",
    "dilated_sumset",
    "dilated_sumset_size",
    "parse_set_literal",
    "read_set_file",
    "sumset",
    "to_literal",
    # bounds
    "BoundReport",
    "BoundSet",
    "BoundViolationError",
    "PropBound",
    "main_constant",
    "theoretical_bounds",
    "verify_bounds",
    # constructions
    "ConstructionSpec",
    "default_digit_params",
    "digit_set",
    "digit_sumset_size",
    "interval",
    "strided_block",
    # residues
    "Cell",
    "DichotomyRecord",
    "DichotomyReport",
    "ReductionStep",
    "ReductionTrace",
    "ResidueClass",
    "ResiduePartition",
    "check_cell_dichotomy",
    "check_class_dichotomy",
    "is_fully_distributed",
    "is_reduced",
    "partition",
    "reduce",
    "reduction_divisors",
    # search
    "SearchResult",
    "enumerate_canonical",
    "min_dilated_sumset",
    "tightness_table",
    "universal_lower_bounds",
]
