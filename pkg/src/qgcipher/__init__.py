"""Quasigroup string transformations E and PE, with statistical analysis tools."""
from .codec import (
    bytes_to_symbols,
    parse_key,
    parse_symbol_text,
    sample_message,
    serialize_key,
    symbols_to_bytes,
)
from .quasigroup import (
    InvalidTableError,
    OperationTable,
    ParastropheSet,
    SymbolRangeError,
    apply_op,
    derive_parastrophe,
    parastrophe_set,
    random_quasigroup,
    reference_quasigroup,
    solve_right_operand,
    validate_table,
)
from .stats import (
    chi_square_uniformity,
    count_ngrams,
    detect_classes,
    distance_to_uniform,
    exact_output_distribution,
    expected_class_means,
)
from .transform import (
    BlockRecord,
    PEKey,
    RoundParams,
    e_chain,
    e_inverse,
    e_transform,
    pe_decrypt,
    pe_encrypt,
    pe_round_decrypt,
    pe_round_encrypt,
    pe_trace_schedule,
)

__version__ = "0.1.0"
