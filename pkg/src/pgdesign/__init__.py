"""Partial geometric difference sets, difference families and their designs.

Exact constructions over finite abelian groups, independent verification of
difference profiles, development into designs, and certification of the
associated directed strongly regular graphs.
"""

from pgdesign.groups import (
    DifferenceMultiset,
    GroupSpec,
    Subset,
    cosets,
    cyclic_subgroup,
    delta_family,
    delta_multiset,
    make_group,
)
from pgdesign.galois import FieldSpec, build_field, cyclotomic_classes
from pgdesign.constructions import ConstructedFamily, construct
from pgdesign.verify import (
    Design,
    a1_srg_check,
    develop,
    family_profile,
    index_profile,
    pg_check_matrix,
    pgds_verdict,
    s_counts,
)
from pgdesign.dsrg import antiflag_graph, dsrg_check, flag_graph

__version__ = "0.1.0"

__all__ = [
    "ConstructedFamily",
    "Design",
    "DifferenceMultiset",
    "FieldSpec",
    "GroupSpec",
    "Subset",
    "a1_srg_check",
    "antiflag_graph",
    "build_field",
    "construct",
    "cosets",
    "cyclic_subgroup",
    "cyclotomic_classes",
    "delta_family",
    "delta_multiset",
    "develop",
    "dsrg_check",
    "family_profile",
    "flag_graph",
    "index_profile",
    "make_group",
    "pg_check_matrix",
    "pgds_verdict",
    "s_counts",
]
