"""Combinatorial group theory for the squaring-conjugation formula x^y = x^2."""

from .affine import A_MAP, B_MAP, BS12, AffineDyadicMap, bs12_chain_check, evaluate
from .britton import (PATH_GROUP, BrittonConsistencyError, BrittonForm, HNNSetup, RewriteStep, base_value,
                      britton_reduce, in_A, in_B)
from .checks import britton_examples, chain_probe, enumeration_report, higman_probe, triangle_refutation_check
from .free_amalgam import (AdjacencyType, AmalgamPresentation, ConstructionError, FreeAmalgam,
                           adjacency_type_check, build_free_amalgam, central_pair, free_pair, sq_pair)
from .todd_coxeter import Closed, CosetTable, Overflow, todd_coxeter, verify_table
from .words import PRESETS, Presentation, PresentationError, Word, free_reduce, parse_word, preset, sq_relator

__all__ = [name for name in dir() if not name.startswith("_")]
