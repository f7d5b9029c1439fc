"""Sequential reference evaluator for the calculus, used as ground truth.

Implements all four reduction rules (communication, substitution, collect,
interaction) one step at a time with a pluggable seeded strategy. Uniform
confluence makes the normal form independent of the strategy, which is what
the differential tests lean on. Deliberately unoptimized.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Union

from .core import (
    Agent,
    Configuration,
    Equation,
    FreshIdAllocator,
    RuleSet,
    Term,
    Var,
    instantiate,
    validate,
)
from .errors import InapplicableStep, InetError, NoRuleForPair, StepCapExceeded


@dataclass(frozen=True, slots=True)
class ComStep:
    var: int
    eq_a: int
    eq_b: int


@dataclass(frozen=True, slots=True)
class SubStep:
    var: int
    src: int  # equation providing x=t
    dst: int  # equation whose non-variable side contains x


@dataclass(frozen=True, slots=True)
class ColStep:
    var: int
    src: int


@dataclass(frozen=True, slots=True)
class IntStep:
    eq: int
    pair: tuple[str, str]


Step = Union[ComStep, SubStep, ColStep, IntStep]


class Strategy:
    """Seeded deterministic chooser among applicable steps."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def choose(self, steps: list[Step]) -> Step:
        return steps[self._rng.randrange(len(steps))]


def _var_side_entries(config: Configuration) -> dict[int, list[int]]:
    """Map var id -> indices of equations having it as a whole side."""
    entries: dict[int, list[int]] = {}
    for i, eq in enumerate(config.equations):
        seen = set()
        for side in eq.sides():
            if type(side) is Var and side.id not in seen:
                entries.setdefault(side.id, []).append(i)
                seen.add(side.id)
    return entries


def _term_contains(term: Term, var_id: int) -> bool:
    stack = [term]
    while stack:
        t = stack.pop()
        if type(t) is Var:
            if t.id == var_id:
                return True
        else:
            stack.extend(t.children)
    return False


def _inner_occurrence(eq: Equation, var_id: int) -> bool:
    """True iff var occurs inside an agent side of the equation."""
    for side in eq.sides():
        if type(side) is Agent and _term_contains(side, var_id):
            return True
    return False


def applicable_steps(config: Configuration, rules: RuleSet) -> list[Step]:
    """Enumerate every applicable com, sub, col, and int step, in a fixed order.

    Active pairs without a matching rule are simply not applicable here;
    normalize treats them as an error.
    """
    steps: list[Step] = []
    var_sides = _var_side_entries(config)
    for x, eq_ids in sorted(var_sides.items()):
        if len(eq_ids) == 2:
            steps.append(ComStep(x, eq_ids[0], eq_ids[1]))
            continue  # both occurrences are variable sides
        src = eq_ids[0]
        for j, other in enumerate(config.equations):
            if j != src and _inner_occurrence(other, x):
                steps.append(SubStep(x, src, j))
        if any(_term_contains(t, x) for t in config.interface):
            steps.append(ColStep(x, src))
    for i, eq in enumerate(config.equations):
        if type(eq.lhs) is Agent and type(eq.rhs) is Agent:
            if rules.lookup(eq.lhs.sym.name, eq.rhs.sym.name) is not None:
                steps.append(IntStep(i, (eq.lhs.sym.name, eq.rhs.sym.name)))
    return steps


def _other_side(eq: Equation, var_id: int) -> Term:
    if type(eq.lhs) is Var and eq.lhs.id == var_id:
        return eq.rhs
    if type(eq.rhs) is Var and eq.rhs.id == var_id:
        return eq.lhs
    raise InapplicableStep(f"variable {var_id} is not a side of the equation")


def _subst_var(term: Term, var_id: int, replacement: Term) -> Term:
    if type(term) is Var:
        return replacement if term.id == var_id else term
    return Agent(
        term.sym, tuple(_subst_var(c, var_id, replacement) for c in term.children)
    )


def step(
    config: Configuration,
    s: Step,
    fresh: FreshIdAllocator,
    rules: Optional[RuleSet] = None,
) -> Configuration:
    """Apply one step enumerated for exactly this configuration."""
    eqs = list(config.equations)
    interface = list(config.interface)
    if isinstance(s, ComStep):
        if s.eq_a >= len(eqs) or s.eq_b >= len(eqs) or s.eq_a == s.eq_b:
            raise InapplicableStep("bad communication operands")
        t = _other_side(eqs[s.eq_a], s.var)
        u = _other_side(eqs[s.eq_b], s.var)
        keep = [eq for i, eq in enumerate(eqs) if i not in (s.eq_a, s.eq_b)]
        keep.append(Equation(t, u))
        return Configuration(tuple(interface), tuple(keep))
    if isinstance(s, SubStep):
        t = _other_side(eqs[s.src], s.var)
        target = eqs[s.dst]
        if not _inner_occurrence(target, s.var):
            raise InapplicableStep("substitution target does not contain the variable")
        new_target = Equation(
            _subst_var(target.lhs, s.var, t), _subst_var(target.rhs, s.var, t)
        )
        keep = [
            new_target if i == s.dst else eq
            for i, eq in enumerate(eqs)
            if i != s.src
        ]
        return Configuration(tuple(interface), tuple(keep))
    if isinstance(s, ColStep):
        t = _other_side(eqs[s.src], s.var)
        if not any(_term_contains(x, s.var) for x in interface):
            raise InapplicableStep("collect variable does not occur in the interface")
        interface = [_subst_var(x, s.var, t) for x in interface]
        keep = [eq for i, eq in enumerate(eqs) if i != s.src]
        return Configuration(tuple(interface), tuple(keep))
    if isinstance(s, IntStep):
        if rules is None:
            raise InapplicableStep("interaction step needs the rule set")
        eq = eqs[s.eq]
        rule = rules.lookup(eq.lhs.sym.name, eq.rhs.sym.name)
        if rule is None:
            raise NoRuleForPair(eq.lhs.sym.name, eq.rhs.sym.name)
        body = instantiate(rule, eq, fresh)
        keep = eqs[: s.eq] + body + eqs[s.eq + 1 :]
        return Configuration(tuple(interface), tuple(keep))
    raise InapplicableStep(f"unknown step {s!r}")


@dataclass(slots=True)
class NormalizeResult:
    final: Configuration
    step_counts: Counter


def normalize_trace(
    config: Configuration,
    rules: RuleSet,
    strategy: Optional[Strategy] = None,
    max_steps: int = 10_000_000,
    check: bool = False,
) -> NormalizeResult:
    """Reduce to a configuration with no applicable steps, counting step kinds.

    ``check`` re-validates the configuration after every step (slow; used by
    property tests).
    """
    fresh = FreshIdAllocator(config.max_var_id() + 1)
    counts: Counter = Counter()
    done = 0
    while True:
        steps = applicable_steps(config, rules)
        if not steps:
            for eq in config.equations:
                if type(eq.lhs) is Agent and type(eq.rhs) is Agent:
                    raise NoRuleForPair(eq.lhs.sym.name, eq.rhs.sym.name)
            return NormalizeResult(config, counts)
        chosen = strategy.choose(steps) if strategy is not None else steps[0]
        config = step(config, chosen, fresh, rules)
        if check:
            problems = validate(config, rules)
            if problems:
                raise InetError(f"invariant broken after {chosen!r}: {problems}")
        counts[type(chosen).__name__] += 1
        done += 1
        if done >= max_steps:
            raise StepCapExceeded(max_steps)


def normalize(
    config: Configuration,
    rules: RuleSet,
    strategy: Optional[Strategy] = None,
    max_steps: int = 10_000_000,
) -> Configuration:
    """Normal form of the configuration; strategy-independent up to renaming."""
    return normalize_trace(config, rules, strategy, max_steps).final


def check_diamond(config: Configuration, rules: RuleSet) -> bool:
    """One-step diamond property over interaction steps.

    For every pair of distinct single-interaction reducts P, Q there must be
    single-interaction reducts of P and Q that coincide up to renaming.
    """
    from .core import alpha_equal

    def int_reducts(c: Configuration) -> list[Configuration]:
        fresh_base = c.max_var_id() + 1
        out = []
        for s in applicable_steps(c, rules):
            if isinstance(s, IntStep):
                out.append(step(c, s, FreshIdAllocator(fresh_base), rules))
        return out

    firsts = int_reducts(config)
    for i in range(len(firsts)):
        for j in range(i + 1, len(firsts)):
            p, q = firsts[i], firsts[j]
            if alpha_equal(p, q):
                continue
            ps = int_reducts(p)
            qs = int_reducts(q)
            if not any(alpha_equal(a, b) for a in ps for b in qs):
                return False
    return True
