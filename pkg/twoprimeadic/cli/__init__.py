from .main import build_parser, main
from .scan import enumerate_pairs, render_rows, run_scan, scan_pair

__all__ = [
    "build_parser",
    "main",
    "enumerate_pairs",
    "render_rows",
    "run_scan",
    "scan_pair",
]
