"""Minimum degree and nonlinearity of Boolean functions on affine subspaces."""

__version__ = "0.1.0"

from .analysis import AnalysisResult, BadFlatReport, Metric, alpha, bad_flat_count, exhaustive_g
from .anf_text import corpus, parse_anf, print_anf, thm22_witness
from .boolfun import Anf, TruthTable, anf_to_tt, degree, mobius, nonlinearity, parity_over, walsh
from .bounds import render_tables, resolve_bounds
from .flats import Flat, canonicalize, count_flats, enumerate_flats, enumerate_flats_through, flat_parity, restrict
from .search import SearchConfig, SearchOutcome, search

__all__ = [
    "AnalysisResult", "Anf", "BadFlatReport", "Flat", "Metric", "SearchConfig", "SearchOutcome",
    "TruthTable", "alpha", "anf_to_tt", "bad_flat_count", "canonicalize", "corpus", "count_flats",
    "degree", "enumerate_flats", "enumerate_flats_through", "exhaustive_g", "flat_parity", "mobius",
    "nonlinearity", "parity_over", "parse_anf", "print_anf", "render_tables", "resolve_bounds",
    "restrict", "search", "thm22_witness", "walsh",
]
