"""Small worked instances used by the CLI, tests and documentation."""
from __future__ import annotations

from .core import ChoiceFunction, GroundSet, LinearOrder
from .rules import move_to_top, priority_max, reserves_rule, seq_prio_rivalry

STUDENT_GROUPS = {"5": "l", "1": "m", "4": "m", "2": "h", "3": "h"}


def lattice_example() -> ChoiceFunction:
    """On ``{a,b,c}``: the full set yields ``{a,b}``, every smaller set is chosen whole."""
    g = GroundSet(("a", "b", "c"))
    return ChoiceFunction.from_function(g, lambda S: {"a", "b"} if len(S) == 3 else S)


def student_orders(medium: str = "printed") -> tuple:
    """Base order and the low/medium lifted orders for the five-student example.

    ``medium="printed"`` ranks 4 above 1 in the medium order;
    ``medium="stable"`` keeps their base order (1 above 4). Both give the
    same choice from the full set.
    """
    base = LinearOrder(("1", "2", "3", "4", "5"))
    low = move_to_top(base, ["5"])
    if medium == "printed":
        mid = move_to_top(base, ["1", "4"], keep_group_order=False, group_ranking=["4", "1"])
    elif medium == "stable":
        mid = move_to_top(base, ["1", "4"])
    else:
        raise ValueError(f"unknown convention {medium!r}")
    return base, low, mid


def student_ground() -> GroundSet:
    return GroundSet(("1", "2", "3", "4", "5"))


def student_rivalry(medium: str = "printed") -> ChoiceFunction:
    return seq_prio_rivalry(3, student_orders(medium), student_ground())


def student_reserves() -> ChoiceFunction:
    base = student_orders()[0]
    return reserves_rule(3, STUDENT_GROUPS, {"l": 1, "m": 1, "h": 0}, base, student_ground())


def two_agent_priority():
    """Object ``a`` takes one of agents 1 and 2, preferring 1."""
    return priority_max(1, LinearOrder(("1", "2")), GroundSet(("1", "2")))
