from .params import (
    CaseTag,
    ClassLabel,
    ClassTable,
    CyclotomicTable,
    TwoPrimeParams,
    pair_problem,
)
from .reports import (
    ComplexityReport,
    ConjectureOutcome,
    GcdDecomposition,
    LemmaCheck,
    LemmaId,
    LemmaReport,
    ScanFilter,
    ScanRow,
)
from .sequence import QuaternarySequence

__all__ = [
    "CaseTag",
    "ClassLabel",
    "ClassTable",
    "CyclotomicTable",
    "TwoPrimeParams",
    "pair_problem",
    "ComplexityReport",
    "ConjectureOutcome",
    "GcdDecomposition",
    "LemmaCheck",
    "LemmaId",
    "LemmaReport",
    "ScanFilter",
    "ScanRow",
    "QuaternarySequence",
]
