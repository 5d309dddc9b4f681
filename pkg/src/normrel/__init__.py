"""Norm relations in group algebras, their denominators, and multiquadratic unit groups."""

from .errors import (BadReductionError, BudgetExceededError, CapExceededError, CyclicGroupError,
                     InvalidInputError, NormrelError, NotAbelianError, VerificationError)
from .groups import (FiniteGroup, Subgroup, all_subgroups, alternating_group, cyclic_group,
                     dihedral_group, direct_product, group_from_abelian_invariants,
                     group_from_permutations, group_from_spec, has_noncyclic_pq_subgroup,
                     named_group, quaternion_group, symmetric_group)
from .algebra import QQ, ZZ, GF, AlgebraElement, norm_element, two_sided_ideal_basis
from .relations import (BrauerRelation, NormRelation, ScalarRelation, admits_norm_relation,
                        exists_relation_mod_p, find_norm_relation, find_scalar_relation,
                        minimal_relation_index, optimal_denominator, verify_relation)
from .abelian import funakura_relation, optimal_abelian_relation
from .modules import ZGModule, quotient_exponent, regular_exponent, regular_index
from .multiquadratic import MQElement, MQField, fundamental_unit, unit_group

__version__ = "0.1.0"

__all__ = [
    "NormrelError", "InvalidInputError", "CapExceededError", "NotAbelianError", "CyclicGroupError",
    "BudgetExceededError", "VerificationError", "BadReductionError",
    "FiniteGroup", "Subgroup", "all_subgroups", "alternating_group", "cyclic_group", "dihedral_group",
    "direct_product", "group_from_abelian_invariants", "group_from_permutations", "group_from_spec",
    "has_noncyclic_pq_subgroup", "named_group", "quaternion_group", "symmetric_group",
    "QQ", "ZZ", "GF", "AlgebraElement", "norm_element", "two_sided_ideal_basis",
    "BrauerRelation", "NormRelation", "ScalarRelation", "admits_norm_relation", "exists_relation_mod_p",
    "find_norm_relation", "find_scalar_relation", "minimal_relation_index", "optimal_denominator",
    "verify_relation", "funakura_relation", "optimal_abelian_relation",
    "ZGModule", "quotient_exponent", "regular_exponent", "regular_index",
    "MQElement", "MQField", "fundamental_unit", "unit_group",
]
