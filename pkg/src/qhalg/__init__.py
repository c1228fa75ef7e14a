"""Graded quasi-hereditary algebras from quiver presentations.

The package builds the algebra of a quiver with relations, its standard,
costandard and tilting modules, minimal resolutions, Ringel and Koszul duals,
and checks Koszulity and balancedness with explicit witnesses.
"""
from .scalars import RATIONALS, Field, Matrix
from .presentation import (
    Arrow,
    ParseError,
    PresentationError,
    QuiverPresentation,
    corpus,
    corpus_names,
    parse,
    render,
    validate,
)
from .algebra import (
    GradedAlgebra,
    build_algebra,
    combine,
    direct_sum,
    extract_presentation,
    grading_diagnostics,
    opposite,
    tensor,
    truncate,
)
from .modules import GradedModule, ModuleMap, decompose, hom_basis, hom_dim, is_isomorphic, shift
from .structural import catalog, is_quasi_hereditary, standard_filtration, tilting
from .homological import (
    ChainComplex,
    HomotopyHom,
    end_algebra_of_complexes,
    ext_dim,
    ext_dim_injective,
    homotopy_hom_dim,
    is_linear,
    min_resolution,
    reduce,
    tilting_complex_of_simple,
    tilting_resolution,
)
from .duality import graded_iso_check, is_balanced, koszul_dual, koszulity_checks, ringel_dual
from .report import AnalysisReport, analyze, verify_closure, verify_theorem1

__version__ = "0.1.0"
