"""Exact strengthened Chvátal-Gomory cuts and closures over lattice sets."""
from .dominance import PointedContext, constants, dirichlet, reduce_multiplier, reduce_to_bounded
from .errors import (
    BoxTooLarge,
    DimensionCap,
    EmptySet,
    NotIntegral,
    NotSupporting,
    NotValid,
    ParseError,
    PreconditionRatio,
    SCGError,
    Unbounded,
    VerificationFailed,
)
from .fileformat import parse_problem, write_problem
from .mip import floor_mixed, mixed_closure_round, mixed_set, proj_x_s
from .ratpoly import Polyhedron, UnimodularMap, from_generators, lp_optimize, same_set, vrep
from .scg import EMPTY_SIDE, Cut, bounded_closure, ceil_s, closure_round, floor_s, scg_cut
from .sets import SSpec, build_s0
from .transforms import apply_tau, lineality_split, map_lineality, normalize_pointed, partition_pi, sign_flip

__all__ = [
    "BoxTooLarge", "Cut", "DimensionCap", "EMPTY_SIDE", "EmptySet", "NotIntegral", "NotSupporting",
    "NotValid", "ParseError", "PointedContext", "Polyhedron", "PreconditionRatio", "SCGError", "SSpec",
    "Unbounded", "UnimodularMap", "VerificationFailed", "apply_tau", "bounded_closure", "build_s0",
    "ceil_s", "closure_round", "constants", "dirichlet", "floor_mixed", "floor_s", "from_generators",
    "lineality_split", "lp_optimize", "map_lineality", "mixed_closure_round", "mixed_set",
    "normalize_pointed", "parse_problem", "partition_pi", "proj_x_s", "reduce_multiplier",
    "reduce_to_bounded", "same_set", "scg_cut", "sign_flip", "vrep", "write_problem",
]
