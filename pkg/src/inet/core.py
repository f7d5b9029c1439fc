"""Domain model for the lightweight interaction calculus.

Terms are stored as trees with variables at the leaves. Variables are
identified purely by an integer id; surface names only exist in the parser.
A configuration is an interface (a list of terms) plus a multiset of
equations, with the invariant that every variable id occurs at most twice
across the whole configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union

from .errors import NoRuleForPair, RuleShapeError, SymbolMismatch


@dataclass(frozen=True, slots=True)
class Symbol:
    """An agent label with a fixed number of auxiliary ports."""

    name: str
    arity: int

    def __post_init__(self):
        if not self.name or not self.name[0].isupper():
            raise ValueError(f"agent name must start upper-case: {self.name!r}")
        if self.arity < 0:
            raise ValueError("arity must be non-negative")


class Var:
    """A variable leaf, identified by id only."""

    __slots__ = ("id",)

    def __init__(self, id: int):
        self.id = id

    def __repr__(self):
        return f"Var({self.id})"

    def __eq__(self, other):
        return type(other) is Var and other.id == self.id

    def __hash__(self):
        return hash(("var", self.id))


class Agent:
    """An agent term: a symbol applied to exactly arity-many subterms."""

    __slots__ = ("sym", "children")

    def __init__(self, sym: Symbol, children: tuple = ()):
        if len(children) != sym.arity:
            raise ValueError(
                f"{sym.name} has arity {sym.arity}, got {len(children)} children"
            )
        self.sym = sym
        self.children = children

    def __repr__(self):
        return f"Agent({self.sym.name}, {self.children!r})"

    def __eq__(self, other):
        if type(other) is not Agent:
            return False
        return terms_equal(self, other)

    def __hash__(self):
        return hash(("agent", self.sym, self.children))


Term = Union[Var, Agent]


def terms_equal(a: Term, b: Term) -> bool:
    """Structural equality, iterative so deep towers do not overflow."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if type(x) is not type(y):
            return False
        if type(x) is Var:
            if x.id != y.id:
                return False
        else:
            if x.sym != y.sym:
                return False
            stack.extend(zip(x.children, y.children))
    return True


def iter_vars(term: Term) -> Iterator[int]:
    """Yield every variable id in the term, preorder, iteratively."""
    stack = [term]
    while stack:
        t = stack.pop()
        if type(t) is Var:
            yield t.id
        else:
            stack.extend(reversed(t.children))


@dataclass(slots=True)
class Equation:
    """A connection between two terms; semantically unordered."""

    lhs: Term
    rhs: Term

    def sides(self) -> tuple[Term, Term]:
        return (self.lhs, self.rhs)


class EqClass(Enum):
    ACTIVE = "active"
    VAR_HEADED = "var-headed"
    VAR_VAR = "var-var"


def classify(eq: Equation) -> EqClass:
    """Active: both sides agents. VarVar: both variables. Else VarHeaded."""
    lv = type(eq.lhs) is Var
    rv = type(eq.rhs) is Var
    if lv and rv:
        return EqClass.VAR_VAR
    if lv or rv:
        return EqClass.VAR_HEADED
    return EqClass.ACTIVE


@dataclass(slots=True)
class Configuration:
    """An interface term list plus a multiset of equations."""

    interface: tuple[Term, ...]
    equations: tuple[Equation, ...]

    def max_var_id(self) -> int:
        """Largest variable id present, or -1 for a variable-free net."""
        top = -1
        for t in self._all_terms():
            for v in iter_vars(t):
                if v > top:
                    top = v
        return top

    def _all_terms(self) -> Iterator[Term]:
        yield from self.interface
        for eq in self.equations:
            yield eq.lhs
            yield eq.rhs


@dataclass(slots=True)
class Rule:
    """An interaction rule for one unordered active pair.

    Pattern variables live in a rule-local id space: ``a_vars``/``b_vars``
    list the ids bound to the auxiliary ports of the two pattern agents,
    and every other id occurring in ``rhs`` is a bound rule variable that
    gets a fresh id at instantiation time.
    """

    lhs_a: Symbol
    a_vars: tuple[int, ...]
    lhs_b: Symbol
    b_vars: tuple[int, ...]
    rhs: tuple[Equation, ...]
    bound_vars: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if len(self.a_vars) != self.lhs_a.arity or len(self.b_vars) != self.lhs_b.arity:
            raise RuleShapeError("pattern variable count must match arity")
        pattern = self.a_vars + self.b_vars
        if len(set(pattern)) != len(pattern):
            raise RuleShapeError("pattern variables must be pairwise distinct")
        counts: dict[int, int] = {}
        order: list[int] = []
        for eq in self.rhs:
            for side in eq.sides():
                for v in iter_vars(side):
                    if v not in counts:
                        order.append(v)
                    counts[v] = counts.get(v, 0) + 1
        pattern_set = set(pattern)
        for v in pattern:
            if counts.get(v, 0) != 1:
                raise RuleShapeError(
                    f"pattern variable {v} must occur exactly once in the rhs"
                )
        bound = []
        for v in order:
            if v in pattern_set:
                continue
            if counts[v] != 2:
                raise RuleShapeError(
                    f"bound rule variable {v} must occur exactly twice in the rhs"
                )
            bound.append(v)
        self.bound_vars = tuple(bound)

    @property
    def pair(self) -> tuple[str, str]:
        return (self.lhs_a.name, self.lhs_b.name)


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


class RuleSet:
    """Declared symbols plus at most one rule per unordered symbol pair."""

    def __init__(self):
        self.symbols: dict[str, Symbol] = {}
        self.rules: dict[tuple[str, str], Rule] = {}

    def declare(self, sym: Symbol) -> Symbol:
        known = self.symbols.get(sym.name)
        if known is None:
            self.symbols[sym.name] = sym
            return sym
        if known.arity != sym.arity:
            raise RuleShapeError(
                f"symbol {sym.name} used with arities {known.arity} and {sym.arity}"
            )
        return known

    def add(self, rule: Rule) -> None:
        self.declare(rule.lhs_a)
        self.declare(rule.lhs_b)
        key = _pair_key(rule.lhs_a.name, rule.lhs_b.name)
        if key in self.rules:
            raise RuleShapeError(f"duplicate rule for pair {key[0]} >< {key[1]}")
        self.rules[key] = rule

    def lookup(self, a: str, b: str) -> Optional[Rule]:
        return self.rules.get(_pair_key(a, b))

    @property
    def max_rhs_size(self) -> int:
        return max((len(r.rhs) for r in self.rules.values()), default=0)

    @property
    def max_fresh(self) -> int:
        """Largest bound-variable count over all rules."""
        return max((len(r.bound_vars) for r in self.rules.values()), default=0)


class FreshIdAllocator:
    """Hands out never-before-used variable ids.

    The engine reserves disjoint blocks up front so parallel work items can
    draw fresh ids without coordination.
    """

    def __init__(self, start: int = 0):
        self.next_id = start

    def fresh(self) -> int:
        v = self.next_id
        self.next_id += 1
        return v

    def reserve(self, count: int) -> int:
        base = self.next_id
        self.next_id += count
        return base


def _subst(term: Term, env: dict[int, Term]) -> Term:
    if type(term) is Var:
        return env.get(term.id, term)
    return Agent(term.sym, tuple(_subst(c, env) for c in term.children))


def instantiate(rule: Rule, eq: Equation, fresh: FreshIdAllocator) -> list[Equation]:
    """Apply ``rule`` to an active equation, freshening bound variables.

    The equation may match the rule in either orientation; for a rule whose
    two pattern symbols coincide, the stored orientation is used as-is.
    """
    lhs, rhs = eq.lhs, eq.rhs
    if type(lhs) is not Agent or type(rhs) is not Agent:
        raise SymbolMismatch("equation is not an active pair")
    if lhs.sym.name == rule.lhs_a.name and rhs.sym.name == rule.lhs_b.name:
        a_args, b_args = lhs.children, rhs.children
    elif lhs.sym.name == rule.lhs_b.name and rhs.sym.name == rule.lhs_a.name:
        a_args, b_args = rhs.children, lhs.children
    else:
        raise SymbolMismatch(
            f"equation {lhs.sym.name} >< {rhs.sym.name} does not match rule "
            f"{rule.lhs_a.name} >< {rule.lhs_b.name}"
        )
    env: dict[int, Term] = {}
    env.update(zip(rule.a_vars, a_args))
    env.update(zip(rule.b_vars, b_args))
    for v in rule.bound_vars:
        env[v] = Var(fresh.fresh())
    return [Equation(_subst(e.lhs, env), _subst(e.rhs, env)) for e in rule.rhs]


def find_rule(rules: RuleSet, eq: Equation) -> Rule:
    """Look up the rule for an active equation or raise NoRuleForPair."""
    rule = rules.lookup(eq.lhs.sym.name, eq.rhs.sym.name)
    if rule is None:
        raise NoRuleForPair(eq.lhs.sym.name, eq.rhs.sym.name)
    return rule


# ---------------------------------------------------------------------------
# Alpha equivalence


def _match_terms(a: Term, b: Term, fwd: dict, bwd: dict, trail: list) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if type(x) is Var:
            if type(y) is not Var:
                return False
            mx, my = fwd.get(x.id), bwd.get(y.id)
            if mx is None and my is None:
                fwd[x.id] = y.id
                bwd[y.id] = x.id
                trail.append((x.id, y.id))
            elif mx != y.id or my != x.id:
                return False
        else:
            if type(y) is not Agent or x.sym != y.sym:
                return False
            stack.extend(zip(x.children, y.children))
    return True


def _rollback(fwd: dict, bwd: dict, trail: list, mark: int) -> None:
    while len(trail) > mark:
        xid, yid = trail.pop()
        del fwd[xid]
        del bwd[yid]


def _skeleton(term: Term) -> str:
    out = []
    stack = [term]
    while stack:
        t = stack.pop()
        if t is None:
            out.append(")")
        elif type(t) is Var:
            out.append("?")
        else:
            out.append(t.sym.name + "(")
            stack.append(None)
            stack.extend(reversed(t.children))
    return "".join(out)


def _eq_shape(eq: Equation) -> tuple[str, str]:
    a, b = _skeleton(eq.lhs), _skeleton(eq.rhs)
    return (a, b) if a <= b else (b, a)


def _match_equations(
    eqs_a: list[Equation], eqs_b: list[Equation], fwd: dict, bwd: dict, trail: list
) -> bool:
    if not eqs_a:
        return True
    ea = eqs_a[0]
    rest_a = eqs_a[1:]
    shape = _eq_shape(ea)
    for i, eb in enumerate(eqs_b):
        if _eq_shape(eb) != shape:
            continue
        for l, r in ((eb.lhs, eb.rhs), (eb.rhs, eb.lhs)):
            mark = len(trail)
            if (
                _match_terms(ea.lhs, l, fwd, bwd, trail)
                and _match_terms(ea.rhs, r, fwd, bwd, trail)
                and _match_equations(rest_a, eqs_b[:i] + eqs_b[i + 1 :], fwd, bwd, trail)
            ):
                return True
            _rollback(fwd, bwd, trail, mark)
    return False


def alpha_equal(a: Configuration, b: Configuration) -> bool:
    """True iff some variable-id bijection makes the configurations identical
    up to equation multiset order and per-equation orientation."""
    if len(a.interface) != len(b.interface) or len(a.equations) != len(b.equations):
        return False
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}
    trail: list = []
    for ta, tb in zip(a.interface, b.interface):
        if not _match_terms(ta, tb, fwd, bwd, trail):
            return False
    return _match_equations(list(a.equations), list(b.equations), fwd, bwd, trail)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True, slots=True)
class Violation:
    kind: str
    subject: str
    message: str


NAME_OCCURS_THRICE = "name-occurs-thrice"
ARITY_MISMATCH = "arity-mismatch"
UNKNOWN_SYMBOL = "unknown-symbol"


def validate(config: Configuration, rules: RuleSet) -> list[Violation]:
    """Check the at-most-twice name invariant and symbol declarations.

    Violations are accumulated rather than raised so a caller can report
    every problem in one pass.
    """
    violations: list[Violation] = []
    counts: dict[int, int] = {}
    seen_syms: dict[str, int] = {}
    for t in config._all_terms():
        stack = [t]
        while stack:
            node = stack.pop()
            if type(node) is Var:
                counts[node.id] = counts.get(node.id, 0) + 1
            else:
                name = node.sym.name
                if name not in seen_syms:
                    seen_syms[name] = node.sym.arity
                    known = rules.symbols.get(name)
                    if known is None:
                        violations.append(
                            Violation(UNKNOWN_SYMBOL, name, f"symbol {name} is not declared")
                        )
                    elif known.arity != node.sym.arity:
                        violations.append(
                            Violation(
                                ARITY_MISMATCH,
                                name,
                                f"{name} declared with arity {known.arity}, "
                                f"used with {node.sym.arity}",
                            )
                        )
                elif seen_syms[name] != node.sym.arity:
                    violations.append(
                        Violation(
                            ARITY_MISMATCH,
                            name,
                            f"{name} used with arities {seen_syms[name]} "
                            f"and {node.sym.arity}",
                        )
                    )
                stack.extend(node.children)
    for vid, n in counts.items():
        if n > 2:
            violations.append(
                Violation(
                    NAME_OCCURS_THRICE, str(vid), f"variable {vid} occurs {n} times"
                )
            )
    return violations
