"""Satisfiability-preserving transformations of structures and formulas."""

from .common import Abstraction, omega_name, omega_names
from .embeddings import add_ge, embed_pad, embed_r3, minus_ge, relativize
from .radius1 import (
    abstract_r1, build_psi_wf, is_well_formed_r1, reconstruct_r1, reduce_r1, translate_r1,
)
from .radius2 import (
    abstract_r2, build_phi_wf, is_well_formed, reconstruct_r2, reduce_r2d2, translate_r2,
)

__all__ = [
    "Abstraction", "omega_name", "omega_names",
    "abstract_r2", "translate_r2", "build_phi_wf", "is_well_formed", "reconstruct_r2", "reduce_r2d2",
    "abstract_r1", "translate_r1", "build_psi_wf", "is_well_formed_r1", "reconstruct_r1", "reduce_r1",
    "add_ge", "minus_ge", "relativize", "embed_r3", "embed_pad",
]
