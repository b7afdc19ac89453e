"""JSON file formats for choice instances, matching problems, matchings and demand data.

Option sets are written as comma-joined sorted labels (``""`` for the empty
set), rationals as ``"p/q"`` strings. Every ``*_to_doc`` builds a canonical
document, so load, dump and load again returns an equal object.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Mapping

from .core import ChoiceFunction, GroundSet, InputError, LinearOrder
from .demand import DemandObservation, PriceVector
from .matching import Matching, MatchingProblem
from .rules import MC, PriorityMax, Reserves, SeqPrioRivalry, TwoStage


class FormatError(InputError):
    """Malformed document; ``location`` is a dotted path into it."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location or '<root>'}: {message}")
        self.location = location


def _at(loc, key):
    if isinstance(key, int):
        return f"{loc}[{key}]"
    return f"{loc}.{key}" if loc else str(key)


def _get(doc, key, loc, kind=None):
    if not isinstance(doc, Mapping):
        raise FormatError(loc, "expected an object")
    if key not in doc:
        raise FormatError(loc, f"missing field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise FormatError(_at(loc, key), f"expected {getattr(kind, '__name__', kind)}")
    return value


def _labels(value, loc) -> list:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise FormatError(loc, "expected a list of strings")
    return value


def set_key(labels) -> str:
    return ",".join(sorted(map(str, labels)))


def parse_key(key: str) -> list:
    return key.split(",") if key else []


def _ground(labels, loc) -> GroundSet:
    for x in labels:
        if "," in x or not x:
            raise FormatError(loc, f"label {x!r} must be non-empty and free of commas")
    try:
        return GroundSet(tuple(labels))
    except InputError as e:
        raise FormatError(loc, str(e)) from None


def _order(value, ground: GroundSet, loc) -> LinearOrder:
    labels = _labels(value, loc)
    unknown = [x for x in labels if x not in ground]
    if unknown:
        raise FormatError(loc, f"unknown labels {unknown}")
    try:
        return LinearOrder(tuple(labels))
    except InputError as e:
        raise FormatError(loc, str(e)) from None


def _int(doc, key, loc) -> int:
    value = _get(doc, key, loc)
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(_at(loc, key), "expected an integer")
    return value


# ---------------------------------------------------------------- choice functions

def _table_from_doc(ground: GroundSet, doc, loc) -> ChoiceFunction:
    if not isinstance(doc, Mapping):
        raise FormatError(loc, "expected an object keyed by option sets")
    mapping = {}
    for key, chosen in doc.items():
        where = _at(loc, repr(key))
        S = parse_key(key)
        unknown = [x for x in S if x not in ground]
        if unknown:
            raise FormatError(where, f"unknown labels {unknown}")
        chosen = _labels(chosen, where)
        try:
            mask = ground.mask(S)
        except InputError as e:
            raise FormatError(where, str(e)) from None
        if mask in mapping:
            raise FormatError(where, "option set listed twice")
        if not set(chosen) <= set(S):
            raise FormatError(where, f"chosen {chosen} is not a subset of the option set")
        mapping[mask] = ground.mask(chosen)
    missing = [S for S in ground.masks() if S not in mapping]
    if missing:
        raise FormatError(loc, f"no entry for option set {set_key(ground.bundle(missing[0]))!r}")
    return ChoiceFunction.from_table(ground, {ground.bundle(S): ground.bundle(c) for S, c in mapping.items()})


def _rule_from_doc(ground: GroundSet, doc, loc):
    variant = _get(doc, "variant", loc, str)
    try:
        if variant == "priority_max":
            order = _order(_get(doc, "order", loc), ground, _at(loc, "order"))
            return ChoiceFunction(ground, rule=PriorityMax(_int(doc, "q", loc), order))
        if variant == "mc":
            orders = _get(doc, "orders", loc, list)
            return ChoiceFunction(ground, rule=MC(tuple(
                _order(o, ground, _at(_at(loc, "orders"), k)) for k, o in enumerate(orders))))
        if variant == "seq_prio_rivalry":
            orders = _get(doc, "orders", loc, list)
            return ChoiceFunction(ground, rule=SeqPrioRivalry(_int(doc, "q", loc), tuple(
                _order(o, ground, _at(_at(loc, "orders"), k)) for k, o in enumerate(orders))))
        if variant == "reserves":
            order = _order(_get(doc, "order", loc), ground, _at(loc, "order"))
            labeling = _get(doc, "labeling", loc, dict)
            reserves = _get(doc, "reserves", loc, dict)
            if any(not isinstance(r, int) for r in reserves.values()):
                raise FormatError(_at(loc, "reserves"), "reserves must be integers")
            rule = Reserves(_int(doc, "q", loc), labeling, reserves, order)
            rule.label_masks(ground)
            return ChoiceFunction(ground, rule=rule)
        if variant == "two_stage":
            first = choice_from_doc(ground, _get(doc, "first", loc), _at(loc, "first"))
            second = choice_from_doc(ground, _get(doc, "second", loc), _at(loc, "second"))
            return ChoiceFunction(ground, rule=TwoStage(first, second))
    except FormatError:
        raise
    except InputError as e:
        raise FormatError(loc, str(e)) from None
    raise FormatError(_at(loc, "variant"), f"unknown rule variant {variant!r}")


def choice_from_doc(ground: GroundSet, doc, loc="") -> ChoiceFunction:
    """A choice function from a document holding ``choice_table`` or ``rule``."""
    if not isinstance(doc, Mapping):
        raise FormatError(loc, "expected an object")
    has_table, has_rule = "choice_table" in doc, "rule" in doc
    if has_table == has_rule:
        raise FormatError(loc, "give exactly one of 'choice_table' or 'rule'")
    if has_table:
        return _table_from_doc(ground, doc["choice_table"], _at(loc, "choice_table"))
    C = _rule_from_doc(ground, doc["rule"], _at(loc, "rule"))
    try:
        C.table
    except InputError as e:
        raise FormatError(_at(loc, "rule"), str(e)) from None
    return C


def _rule_doc(rule) -> dict:
    if isinstance(rule, PriorityMax):
        return {"variant": "priority_max", "q": rule.q, "order": list(rule.order.ranking)}
    if isinstance(rule, MC):
        return {"variant": "mc", "orders": [list(o.ranking) for o in rule.orders]}
    if isinstance(rule, SeqPrioRivalry):
        return {"variant": "seq_prio_rivalry", "q": rule.q, "orders": [list(o.ranking) for o in rule.orders]}
    if isinstance(rule, Reserves):
        return {"variant": "reserves", "q": rule.q, "labeling": dict(rule.labeling),
                "reserves": dict(rule.reserves), "order": list(rule.order.ranking)}
    if isinstance(rule, TwoStage):
        return {"variant": "two_stage", "first": choice_to_doc(rule.first),
                "second": choice_to_doc(rule.second)}
    return None


def choice_to_doc(C: ChoiceFunction) -> dict:
    """``{"rule": ...}`` for known rule objects, otherwise ``{"choice_table": ...}``."""
    if C.rule is not None:
        spec = _rule_doc(C.rule)
        if spec is not None:
            return {"rule": spec}
    g = C.ground
    table = {}
    for S in sorted(g.masks(), key=lambda m: (bin(m).count("1"), set_key(g.bundle(m)))):
        table[set_key(g.bundle(S))] = sorted(map(str, g.bundle(C.eval_mask(S))))
    return {"choice_table": table}


def instance_from_doc(doc) -> ChoiceFunction:
    ground = _ground(_labels(_get(doc, "elements", ""), "elements"), "elements")
    return choice_from_doc(ground, doc)


def instance_to_doc(C: ChoiceFunction) -> dict:
    return {"elements": list(C.ground.elements), **choice_to_doc(C)}


# ---------------------------------------------------------------- matching

def problem_from_doc(doc) -> MatchingProblem:
    agents_doc = _get(doc, "agents", "", list)
    objects_doc = _get(doc, "objects", "", list)
    names, prefs = [], {}
    for k, a in enumerate(agents_doc):
        loc = _at("agents", k)
        name = _get(a, "name", loc, str)
        names.append(name)
        prefs[name] = tuple(_labels(a.get("ranking", []), _at(loc, "ranking")))
    ground = _ground(names, "agents")
    objects, choice = [], {}
    for k, o in enumerate(objects_doc):
        loc = _at("objects", k)
        name = _get(o, "name", loc, str)
        objects.append(name)
        choice[name] = choice_from_doc(ground, o, loc)
    try:
        return MatchingProblem(tuple(names), tuple(objects), prefs, choice)
    except InputError as e:
        raise FormatError("", str(e)) from None


def problem_to_doc(problem: MatchingProblem) -> dict:
    return {
        "agents": [{"name": i, "ranking": list(problem.prefs[i])} for i in problem.agents],
        "objects": [{"name": o, **choice_to_doc(problem.choice[o])} for o in problem.objects],
    }


def matching_from_doc(doc, problem: MatchingProblem) -> Matching:
    assign = _get(doc, "assignment", "", dict)
    for agent, obj in assign.items():
        loc = _at("assignment", agent)
        if agent not in problem.agents:
            raise FormatError(loc, "unknown agent")
        if obj is not None and obj not in problem.objects:
            raise FormatError(loc, f"unknown object {obj!r}")
    return Matching.of(problem, assign)


def matching_to_doc(mu: Matching) -> dict:
    return {"assignment": dict(mu.assignment)}


# ---------------------------------------------------------------- demand

def _fraction(value, loc) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise FormatError(loc, "expected a rational as 'p/q' or an integer")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise FormatError(loc, f"not a rational: {value!r}") from None


def fraction_text(x: Fraction) -> str:
    return str(Fraction(x))


def demand_from_doc(doc) -> list:
    ground = _ground(_labels(_get(doc, "elements", ""), "elements"), "elements")
    out = []
    for k, ob in enumerate(_get(doc, "observations", "", list)):
        loc = _at("observations", k)
        prices = _get(ob, "prices", loc, dict)
        vals = {}
        for e in ground.elements:
            if e not in prices:
                raise FormatError(_at(loc, "prices"), f"no price for {e!r}")
            vals[e] = _fraction(prices[e], _at(_at(loc, "prices"), e))
        extra = set(prices) - set(ground.elements)
        if extra:
            raise FormatError(_at(loc, "prices"), f"unknown labels {sorted(extra)}")
        demanded = []
        for j, b in enumerate(_get(ob, "demanded", loc, list)):
            where = _at(_at(loc, "demanded"), j)
            b = _labels(b, where)
            if not set(b) <= set(ground.elements):
                raise FormatError(where, "unknown labels")
            demanded.append(frozenset(b))
        try:
            out.append(DemandObservation(PriceVector.of(ground, vals), frozenset(demanded)))
        except InputError as e:
            raise FormatError(loc, str(e)) from None
    if not out:
        raise FormatError("observations", "need at least one observation")
    return out


def demand_to_doc(obs) -> dict:
    g = obs[0].price.ground
    return {
        "elements": list(g.elements),
        "observations": [
            {"prices": {e: fraction_text(o.price[e]) for e in g.elements},
             "demanded": sorted((sorted(b) for b in o.demanded), key=lambda b: (len(b), b))}
            for o in obs
        ],
    }


def valuation_to_doc(v) -> dict:
    g = v.ground
    keys = sorted(g.masks(), key=lambda m: (bin(m).count("1"), set_key(g.bundle(m))))
    return {set_key(g.bundle(m)): fraction_text(v.values[m]) for m in keys}


# ---------------------------------------------------------------- files

def read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"line {e.lineno} column {e.colno}", e.msg) from None
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


_FLAT_LIST = re.compile(r"\[\n\s+([^\[\]{}]*?)\n\s*\]")


def dumps(doc) -> str:
    """Indented JSON with short scalar lists kept on one line."""
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    text = _FLAT_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",\n")) + "]", text)
    return text + "\n"


def load_instance(path: str) -> ChoiceFunction:
    return instance_from_doc(read_json(path))


def load_problem(path: str) -> MatchingProblem:
    return problem_from_doc(read_json(path))


def load_demand(path: str) -> list:
    return demand_from_doc(read_json(path))
