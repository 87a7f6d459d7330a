"""
AC Census

Enumeration, filtering, order computation, genetic search and certificate
verification for the Andrews-Curtis conjecture on balanced two-generator
presentations of small total length.
"""

__version__ = "0.1.0"

# Free-group words and presentations
from .word import (
    Word, Letter, parse_word, format_word, multiply, invert, conjugate,
    cyclic_reduce, exponent_sum, cyclic_hamming,
)
from .presentation import (
    ACMove, MoveKind, Presentation, Certificate, parse_presentation, format_presentation,
    apply_move, replay, enumerate_neighbors, is_local_min, canonical_key,
    verify_certificate, read_certificate, write_certificate,
)

# Algebraic invariants
from .abelianization import IntMatrix, relation_matrix, smith_normal_form, invariant_factors, has_trivial_abelianization
from .whitehead import WhiteheadAut, generate_whitehead_auts, minimize_cyclic_length, is_primitive
from .toddcoxeter import CosetTable, EnumerationResult, enumerate_cosets

# Search
from .gasearch import GAConfig, SearchMode, SearchOutcome, evolve, evolve_islands, bfs_oracle

# Census pipeline and records
from .models import CensusRecord, StageName, ACStatus, RunMetadata
from .census import StageConfig, run_pipeline, sweep_stage6, convention_audit
from .library import library_certificate
from .reporting import Report, write_report

# Configuration and errors
from .config import AppSettings, load_settings
from .config_loader import ConfigLoader, load_config
from .error_handling import ACCensusError, ConfigurationError
