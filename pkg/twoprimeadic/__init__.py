from .core.config import settings
from .ntheory.adic import (
    complexity_report,
    conjecture_check,
    madic_complexity,
    theorem_prediction,
)
from .ntheory.cyclotomy import build_class_table, calibrate, make_params
from .ntheory.sequence import generate, parse, reverse, serialize
from .ntheory.verify import verify_all

__version__ = "0.1.0"
__all__ = [
    "settings",
    "complexity_report",
    "conjecture_check",
    "madic_complexity",
    "theorem_prediction",
    "build_class_table",
    "calibrate",
    "make_params",
    "generate",
    "parse",
    "reverse",
    "serialize",
    "verify_all",
]
