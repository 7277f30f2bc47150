"""Constructive realization of zero-sum partitions."""
from .assemble import PlanError, Pool, Region
from .constructions import (
    TEMPLATE_FIVES,
    TEMPLATE_MIXED,
    Product,
    instantiate_template,
    realize_1mod6,
    realize_3mod6,
    realize_5mod6,
    realize_odd,
    realize_quadruple,
    realize_two_group,
    skolem_r_route,
    split_index,
    t_rotation,
)
from .dispatch import (
    FOUR_ZSPP_ONLY_KNOWN,
    NO_ZSPP,
    THREE_ZSPP,
    TWO_ZSPP,
    ZsppClass,
    classify,
    realize,
)
from .fixtures import FixtureStore, base_fixtures
from .lift import lift_by_z2, lifted_group
from .trace import ConstructionTrace

__all__ = [
    "ConstructionTrace", "FixtureStore", "FOUR_ZSPP_ONLY_KNOWN", "NO_ZSPP", "PlanError", "Pool",
    "Product", "Region", "TEMPLATE_FIVES", "TEMPLATE_MIXED", "THREE_ZSPP", "TWO_ZSPP", "ZsppClass",
    "base_fixtures", "classify", "instantiate_template", "lift_by_z2", "lifted_group", "realize",
    "realize_1mod6", "realize_3mod6", "realize_5mod6", "realize_odd", "realize_quadruple",
    "realize_two_group", "skolem_r_route", "split_index", "t_rotation",
]
