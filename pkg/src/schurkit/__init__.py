"""Schur rings over finite abelian groups: construction, isomorphism and
schurity searches, separability classification and witness certificates."""

__version__ = "0.1.0"

from .classify import Verdict, classify, prop31_decomposition, theorem1_family, theorem3_family
from .errors import BudgetExceeded, SchurkitError
from .groups import AbelianGroup, Subgroup, make_group, parse_group, subgroup_generated
from .morphisms import (
    AlgebraicIso,
    Status,
    algebraic_iso_from_map,
    find_algebraic_autos,
    find_algebraic_isos,
    find_inducing_iso,
    is_schurian,
    separability_report,
)
from .permgrp import PermutationGroup
from .sring import SRing, cyclotomic, fusion, group_ring, rank_two, sring_from_partition, wreath_product
from .witness import WitnessCertificate, build_prop31_sring, build_witness, lift_by_wreath, make_plan

__all__ = [
    "AbelianGroup",
    "AlgebraicIso",
    "BudgetExceeded",
    "PermutationGroup",
    "SRing",
    "SchurkitError",
    "Status",
    "Subgroup",
    "Verdict",
    "WitnessCertificate",
    "algebraic_iso_from_map",
    "build_prop31_sring",
    "build_witness",
    "classify",
    "cyclotomic",
    "find_algebraic_autos",
    "find_algebraic_isos",
    "find_inducing_iso",
    "fusion",
    "group_ring",
    "is_schurian",
    "lift_by_wreath",
    "make_group",
    "make_plan",
    "parse_group",
    "prop31_decomposition",
    "rank_two",
    "separability_report",
    "sring_from_partition",
    "subgroup_generated",
    "theorem1_family",
    "theorem3_family",
    "wreath_product",
]
