"""Look-Knave sequences: run-length descriptions of what a bit string is not.

The core map sends each maximal run of a bit to the base-2 numeral of its
length followed by the complemented bit.  Around it: packed bit strings
with a prefix metric, orbit generation, certified fixed-point prefixes,
basin-of-attraction experiments, the classic decimal and binary look-say
steppers, and growth-constant estimation.
"""

from .bitcore import (
    BitString,
    Metric,
    Run,
    as_bitstring,
    compose_runs,
    decompose_runs,
    lcp,
    metric,
    numeral,
    numeral_value,
    parse,
    ribbit_extend,
)
from .dynamics import (
    AttractionReport,
    BasinResult,
    DEFAULT_CORPUS_SEED,
    ElementRow,
    ElementTableReport,
    RibbitBoundReport,
    check_attraction_corpus,
    check_element_table,
    check_ribbit_bounds,
    classify_basin,
    convergence_trace,
    leading_ribbit_descent,
)
from .errors import (
    CapExceededError,
    EmptyInputError,
    InputError,
    InsufficientDataError,
    IterationCapExceededError,
    LookKnaveError,
    MemoryCapExceededError,
    NonBinaryCharacterError,
    NonBinarySymbolError,
    NonDigitError,
    OutOfRangeError,
    RunTooLongError,
    ZeroOrNegativeError,
)
from .knave import (
    CACHE_ENV_VAR,
    DEFAULT_MAX_BITS,
    DEFAULT_MAX_ITERATIONS,
    FixedPointCertificate,
    OrbitRecord,
    OrbitResult,
    PARITY_SEEDS,
    certificate_from_line,
    certificate_to_line,
    fixed_point_prefix,
    iter_orbit,
    knave_step,
    knave_step_streaming,
    orbit,
    read_certificate_cache,
    resolve_cache_path,
    stable_prefix,
    write_certificate_cache,
)
from .variants import (
    GrowthEstimate,
    VARIANTS,
    estimate_lambda,
    growth_ratios,
    looksay_step_binary,
    looksay_step_decimal,
)

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "Metric",
    "Run",
    "as_bitstring",
    "compose_runs",
    "decompose_runs",
    "lcp",
    "metric",
    "numeral",
    "numeral_value",
    "parse",
    "ribbit_extend",
    "AttractionReport",
    "BasinResult",
    "DEFAULT_CORPUS_SEED",
    "ElementRow",
    "ElementTableReport",
    "RibbitBoundReport",
    "check_attraction_corpus",
    "check_element_table",
    "check_ribbit_bounds",
    "classify_basin",
    "convergence_trace",
    "leading_ribbit_descent",
    "CapExceededError",
    "EmptyInputError",
    "InputError",
    "InsufficientDataError",
    "IterationCapExceededError",
    "LookKnaveError",
    "MemoryCapExceededError",
    "NonBinaryCharacterError",
    "NonBinarySymbolError",
    "NonDigitError",
    "OutOfRangeError",
    "RunTooLongError",
    "ZeroOrNegativeError",
    "CACHE_ENV_VAR",
    "DEFAULT_MAX_BITS",
    "DEFAULT_MAX_ITERATIONS",
    "FixedPointCertificate",
    "OrbitRecord",
    "OrbitResult",
    "PARITY_SEEDS",
    "certificate_from_line",
    "certificate_to_line",
    "fixed_point_prefix",
    "iter_orbit",
    "knave_step",
    "knave_step_streaming",
    "orbit",
    "read_certificate_cache",
    "resolve_cache_path",
    "stable_prefix",
    "write_certificate_cache",
    "GrowthEstimate",
    "VARIANTS",
    "estimate_lambda",
    "growth_ratios",
    "looksay_step_binary",
    "looksay_step_decimal",
]
