"""One-to-many matching: deferred acceptance engines and stability notions.

Agents rank acceptable objects; each object owns a choice function over the
set of agents. Both engines follow the same simultaneous-proposal loop and
differ only in what an object keeps between rounds: choice-keeping (CK)
remembers only the agents it chose, applicant-keeping (AK) remembers every
agent that ever proposed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .core import ChoiceFunction, GroundSet, InputError, ScaleError, iter_bits

CK, AK = "ck", "ak"
MAX_ENUM_AGENTS = 6
MAX_ENUM_OBJECTS = 4


@dataclass(frozen=True, eq=False)
class MatchingProblem:
    agents: tuple
    objects: tuple
    prefs: Mapping          # agent -> tuple of acceptable objects, best first
    choice: Mapping         # object -> ChoiceFunction over the agents

    def __post_init__(self):
        agents = tuple(self.agents)
        objects = tuple(self.objects)
        if len(set(agents)) != len(agents) or len(set(objects)) != len(objects):
            raise InputError("agent and object names must be unique")
        prefs = {}
        for i in agents:
            ranking = tuple(self.prefs.get(i, ()))
            if len(set(ranking)) != len(ranking):
                raise InputError(f"agent {i} ranks an object twice")
            unknown = set(ranking) - set(objects)
            if unknown:
                raise InputError(f"agent {i} ranks unknown objects {sorted(unknown)}")
            prefs[i] = ranking
        extra = set(self.prefs) - set(agents)
        if extra:
            raise InputError(f"preferences given for unknown agents {sorted(map(str, extra))}")
        choice = {}
        for o in objects:
            try:
                C = self.choice[o]
            except KeyError:
                raise InputError(f"object {o} has no choice function") from None
            if C.ground.elements != agents:
                raise InputError(f"choice function of {o} must be over the agents in order {agents}")
            choice[o] = C
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "prefs", prefs)
        object.__setattr__(self, "choice", choice)

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.agents)

    def rank(self, agent, obj) -> int:
        """Position of ``obj`` in the agent's list; ``None`` (unmatched) ranks just after it."""
        ranking = self.prefs[agent]
        if obj is None:
            return len(ranking)
        try:
            return ranking.index(obj)
        except ValueError:
            return len(ranking) + 1

    def prefers(self, agent, a, b) -> bool:
        """Strict preference of ``agent`` for ``a`` over ``b`` (either may be ``None``)."""
        return self.rank(agent, a) < self.rank(agent, b)

    def reordered(self, objects: Sequence) -> "MatchingProblem":
        return MatchingProblem(self.agents, tuple(objects), self.prefs, self.choice)


@dataclass(frozen=True)
class Matching:
    assignment: tuple   # (agent, object or None) in agent order

    @classmethod
    def of(cls, problem: MatchingProblem, assign: Mapping) -> "Matching":
        return cls(tuple((i, assign.get(i)) for i in problem.agents))

    def __getitem__(self, agent):
        return dict(self.assignment)[agent]

    def as_dict(self) -> dict:
        return dict(self.assignment)

    def holders(self, obj) -> frozenset:
        return frozenset(i for i, o in self.assignment if o == obj)


@dataclass(frozen=True)
class InfeasibleReport:
    """Agents held by more than one object at termination."""

    offenders: tuple   # (agent, tuple of objects holding them)


@dataclass(frozen=True)
class DaOutcome:
    variant: str
    result: object          # Matching or InfeasibleReport
    trace: tuple            # per round: tuple of (object, frozenset of held agents)
    held: tuple             # final (object, frozenset) pairs

    @property
    def feasible(self) -> bool:
        return isinstance(self.result, Matching)

    @property
    def matching(self) -> Optional[Matching]:
        return self.result if self.feasible else None

    def trace_lines(self) -> list:
        lines = []
        for k, rnd in enumerate(self.trace, start=1):
            for o, agents in rnd:
                members = ",".join(sorted(map(str, agents)))
                lines.append(f"round {k}: {o} <- {{{members}}}")
        return lines


def run_da(problem: MatchingProblem, variant: str) -> DaOutcome:
    """Deferred acceptance with simultaneous proposals.

    Each round every active agent proposes to its best object not yet
    rejecting it. Every object chooses from its proposers plus its kept pool,
    rejects the proposers and previously held agents it did not choose, and
    holds the chosen ones. Rejected agents with objects left stay active. The
    loop ends when no agent is active.
    """
    if variant not in (CK, AK):
        raise InputError(f"unknown DA variant {variant!r}")
    g = problem.ground
    bit = {i: 1 << k for k, i in enumerate(problem.agents)}
    available = {i: list(problem.prefs[i]) for i in problem.agents}
    active = {i for i in problem.agents if available[i]}
    held = {o: 0 for o in problem.objects}
    pool = {o: 0 for o in problem.objects}
    trace = []
    while active:
        proposers = {o: 0 for o in problem.objects}
        for i in problem.agents:
            if i in active:
                proposers[available[i][0]] |= bit[i]
        rejected_now = set()
        for o in problem.objects:
            considered = proposers[o] | pool[o]
            chosen = problem.choice[o].eval_mask(considered)
            rejected = (proposers[o] | held[o]) & ~chosen
            for k in iter_bits(rejected):
                i = problem.agents[k]
                if o in available[i]:
                    available[i].remove(o)
                rejected_now.add(i)
            held[o] = chosen
            pool[o] = chosen if variant == CK else considered
        active = {i for i in rejected_now if available[i]}
        trace.append(tuple((o, g.bundle(held[o])) for o in problem.objects))

    holders = {i: [] for i in problem.agents}
    for o in problem.objects:
        for k in iter_bits(held[o]):
            holders[problem.agents[k]].append(o)
    final = tuple((o, g.bundle(held[o])) for o in problem.objects)
    offenders = tuple((i, tuple(os)) for i, os in holders.items() if len(os) > 1)
    if offenders:
        return DaOutcome(variant, InfeasibleReport(offenders), tuple(trace), final)
    matching = Matching(tuple((i, holders[i][0] if holders[i] else None) for i in problem.agents))
    return DaOutcome(variant, matching, tuple(trace), final)


def run_ck_da(problem: MatchingProblem) -> DaOutcome:
    return run_da(problem, CK)


def run_ak_da(problem: MatchingProblem) -> DaOutcome:
    return run_da(problem, AK)


@dataclass(frozen=True)
class StabilityReport:
    individually_stable: bool
    alpha: bool
    beta: bool
    group: bool
    witnesses: dict = field(default_factory=dict)

    def holds(self, notion: str) -> bool:
        return {"individual": self.individually_stable, "alpha": self.alpha,
                "beta": self.beta, "group": self.group}[notion]


NOTIONS = ("individual", "alpha", "beta", "group")


def check_stability(problem: MatchingProblem, mu: Matching) -> StabilityReport:
    """Individual, alpha, beta and group stability of ``mu``.

    Alpha, beta and group stability include individual stability, so a
    matching that fails it fails all four. Witnesses are the first blocking
    ``(agent, object)`` or ``(coalition, object)`` in declaration order.
    """
    g = problem.ground
    assign = mu.as_dict()
    witnesses = {}
    individual = True
    for i in problem.agents:
        o = assign.get(i)
        if o is not None and o not in problem.prefs[i]:
            individual = False
            witnesses["individual"] = {"agent": i, "object": o}
            break
    if individual:
        for o in problem.objects:
            held = g.mask(mu.holders(o))
            if problem.choice[o].eval_mask(held) != held:
                individual = False
                witnesses["individual"] = {"object": o, "held": g.bundle(held)}
                break

    alpha = beta = group = individual
    for o in problem.objects:
        C = problem.choice[o]
        held = g.mask(mu.holders(o))
        eager = [i for i in problem.agents if problem.prefers(i, o, assign.get(i))]
        for i in eager:
            with_i = C.eval_mask(held | g.mask([i]))
            if alpha and with_i & g.mask([i]):
                alpha = False
                witnesses["alpha"] = {"agent": i, "object": o}
            if beta and with_i != held:
                beta = False
                witnesses["beta"] = {"agent": i, "object": o}
        if group and eager:
            eager_mask = g.mask(eager)
            sub = 0
            while True:
                sub = (sub - eager_mask) & eager_mask
                if sub == 0:
                    break
                if C.eval_mask(held | sub) & sub == sub:
                    group = False
                    witnesses["group"] = {"agents": g.bundle(sub), "object": o}
                    break
    if not individual:
        for notion in ("alpha", "beta", "group"):
            witnesses.setdefault(notion, witnesses["individual"])
    return StabilityReport(individual, alpha, beta, group, witnesses)


def all_matchings(problem: MatchingProblem):
    """Every assignment of agents to objects or nothing, in lexicographic order."""
    n, m = len(problem.agents), len(problem.objects)
    if n > MAX_ENUM_AGENTS or m > MAX_ENUM_OBJECTS:
        raise ScaleError(f"enumeration covers at most {MAX_ENUM_AGENTS} agents and {MAX_ENUM_OBJECTS} objects")
    options = (None,) + problem.objects
    for combo in itertools.product(options, repeat=n):
        yield Matching(tuple(zip(problem.agents, combo)))


def enumerate_stable(problem: MatchingProblem, notion: str = "alpha") -> list:
    if notion not in NOTIONS:
        raise InputError(f"unknown stability notion {notion!r}")
    return [mu for mu in all_matchings(problem) if check_stability(problem, mu).holds(notion)]


@dataclass(frozen=True)
class ImplicationReport:
    matchings: int
    beta_implies_alpha: bool
    alpha_iff_beta: Optional[bool]      # None when some rule fails IRE
    alpha_iff_group: Optional[bool]     # None when some rule fails substitutability
    counterexamples: dict = field(default_factory=dict)


def check_stability_implications(problem: MatchingProblem) -> ImplicationReport:
    """Check the stability implications over every matching of a small problem.

    Beta implies alpha is checked always; alpha iff beta only when every rule
    satisfies IRE, alpha iff group only when every rule is substitutable.
    """
    from .axioms import check_ire, check_substitutability

    all_ire = all(check_ire(C).holds for C in problem.choice.values())
    all_subs = all(check_substitutability(C).holds for C in problem.choice.values())
    b_a = True
    a_b = True if all_ire else None
    a_g = True if all_subs else None
    bad = {}
    count = 0
    for mu in all_matchings(problem):
        count += 1
        r = check_stability(problem, mu)
        if r.beta and not r.alpha and b_a:
            b_a = False
            bad["beta_implies_alpha"] = mu
        if a_b and r.alpha != r.beta:
            a_b = False
            bad["alpha_iff_beta"] = mu
        if a_g and r.alpha != r.group:
            a_g = False
            bad["alpha_iff_group"] = mu
    return ImplicationReport(count, b_a, a_b, a_g, bad)
