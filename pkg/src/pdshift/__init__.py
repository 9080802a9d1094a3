"""Exact combinatorics, invariant measure and recurrence quantification of the period-doubling subshift."""

from .errors import ConsistencyError
from .language import (
    DuplicatePair,
    LanguageTable,
    ScaleDecomposition,
    complexity,
    decompose,
    duplicate_pairs,
    enumerate_words,
    first_mismatch,
    locate,
    window,
)
from .measure import (
    CompositionMatrix,
    MeasureTable,
    block_substitution,
    class_count,
    composition_matrix,
    empirical_frequency,
    measure_by_index,
    measure_table,
    perron_measure_oracle,
)
from .recurrence import (
    bowen_correlation_sum,
    cint_bounds,
    correlation_integral,
    correlation_integral_from_measure,
    correlation_sum,
    determinism,
    determinism_is_one,
    dyadic,
    embedded_det,
    embedded_rr,
    m_epsilon,
    recurrence_rate,
    recurrence_rate_empirical,
    scale_match,
)
from .sequence import GeneratorMethod, Word, block, letter, prefix, substitution_image

__version__ = "0.1.0"
