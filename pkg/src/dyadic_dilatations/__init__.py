"""Exact dilatation structures on the boundary of the dyadic tree."""

from .automata import FiniteOutput, Transducer, compose, eval_finite, eval_omega, invert, section
from .dilatation import (
    DilatationStructure,
    LeveledW,
    LevelTable,
    OutOfDomain,
    SelfSimilarW,
    combine,
    constant_w,
    delta_op,
    inv_op,
    restrict,
    sigma_op,
    stabilize,
)
from .report import CheckReport
from .textformat import parse_workspace
from .words import DyadicScale, OmegaWord, concat, distance, enumerate_cylinder_reps, prefix, shift

__version__ = "0.1.0"
