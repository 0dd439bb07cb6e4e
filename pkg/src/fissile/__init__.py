"""Exact-arithmetic calculus of fissile ensembles over finite universes."""

__version__ = "0.1.0"

from .ensembles import (
    Ensemble,
    SubgroupGenerators,
    augmentation,
    combining_product,
    map_ensemble,
    singleton,
    subgroup_membership,
)
from .fissilizer import fissilize, is_fissile, q_square
from .layouts import LayoutLattice, enumerate_layouts, layout_geq, layout_meet
from .posets import FinitePoset, lift_limit, nabla, nabla_inverse

__all__ = [
    "Ensemble",
    "SubgroupGenerators",
    "augmentation",
    "combining_product",
    "map_ensemble",
    "singleton",
    "subgroup_membership",
    "fissilize",
    "is_fissile",
    "q_square",
    "LayoutLattice",
    "enumerate_layouts",
    "layout_geq",
    "layout_meet",
    "FinitePoset",
    "lift_limit",
    "nabla",
    "nabla_inverse",
    "__version__",
]
