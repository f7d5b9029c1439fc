"""Benchmark programs with independent value oracles.

Each benchmark bundles a rule set (shipped as a ``programs/*.inet`` file),
a net builder for arbitrary parameters, and an expected-value function that
is computed by plain recursion or string rewriting, never by the net
machinery itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .core import Agent, Configuration, Equation, RuleSet, Symbol, Term, Var
from .errors import MalformedNat, UnknownProgram
from .lang import parse_program

SYM_Z = Symbol("Z", 0)
SYM_S = Symbol("S", 1)

PROGRAM_NAMES = ("addition", "ackermann", "fibonacci", "lsystem")


def program_text(name: str) -> str:
    """Source text of a shipped .inet file."""
    path = resources.files("inet").joinpath("programs", f"{name}.inet")
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UnknownProgram(name) from None


def load_rules(name: str) -> RuleSet:
    return parse_program(program_text(name)).rules


def build_nat(k: int) -> Term:
    """S applied k times to Z."""
    if k < 0:
        raise ValueError("natural numbers only")
    t: Term = Agent(SYM_Z)
    for _ in range(k):
        t = Agent(SYM_S, (t,))
    return t


def nat_value(t: Term) -> int:
    """Height of a pure successor tower; raises MalformedNat otherwise."""
    n = 0
    while True:
        if type(t) is Var:
            raise MalformedNat("unresolved variable in a natural number")
        if t.sym.name == "Z":
            return n
        if t.sym.name != "S":
            raise MalformedNat(f"unexpected agent {t.sym.name} in a natural number")
        n += 1
        t = t.children[0]


def census(t: Term) -> dict[str, int]:
    """Count agents by symbol name; raises MalformedNat on variables."""
    counts: dict[str, int] = {}
    stack = [t]
    while stack:
        node = stack.pop()
        if type(node) is Var:
            raise MalformedNat("unresolved variable in result term")
        counts[node.sym.name] = counts.get(node.sym.name, 0) + 1
        stack.extend(node.children)
    return counts


# -- independent oracles


def ackermann_value(m: int, n: int) -> int:
    """Two-argument Ackermann by explicit stack (no deep recursion)."""
    stack = [m]
    while stack:
        m = stack.pop()
        if m == 0:
            n += 1
        elif n == 0:
            n = 1
            stack.append(m - 1)
        else:
            n -= 1
            stack.append(m - 1)
            stack.append(m)
    return n


def fibonacci_value(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def lsystem_string(generations: int) -> str:
    """Algae string after the given number of rewrites of the axiom A."""
    s = "A"
    for _ in range(generations):
        s = "".join("AB" if c == "A" else "A" for c in s)
    return s


def lsystem_census(n: int) -> dict[str, int]:
    """Expected cell counts for the benchmark's iteration count n.

    The counter treats the axiom as the first iteration, so n corresponds to
    n - 1 string rewrites.
    """
    s = lsystem_string(n - 1)
    return {"Ca": s.count("A"), "Cb": s.count("B"), "Nil": 1}


@dataclass(slots=True)
class BenchProgram:
    name: str
    rules: RuleSet
    default_params: tuple[int, ...]
    build_input: Callable[..., Configuration]
    expected: Callable[..., object]
    verify: Callable[..., bool]


def _addition() -> BenchProgram:
    rules = load_rules("addition")

    def build(a: int, b: int) -> Configuration:
        # computes a + b; the first operand sits on Add's principal port
        r = Var(0)
        eq_add = Agent(rules.symbols["Add"], (r, build_nat(b)))
        return Configuration((r,), (Equation(eq_add, build_nat(a)),))

    def verify(final: Configuration, a: int, b: int) -> bool:
        return nat_value(final.interface[0]) == a + b

    return BenchProgram("addition", rules, (1, 2), build, lambda a, b: a + b, verify)


def _ackermann() -> BenchProgram:
    rules = load_rules("ackermann")

    def build(m: int, n: int) -> Configuration:
        r = Var(0)
        call = Agent(rules.symbols["Ack"], (build_nat(n), r))
        return Configuration((r,), (Equation(call, build_nat(m)),))

    def verify(final: Configuration, m: int, n: int) -> bool:
        return nat_value(final.interface[0]) == ackermann_value(m, n)

    return BenchProgram("ackermann", rules, (2, 3), build, ackermann_value, verify)


def _fibonacci() -> BenchProgram:
    rules = load_rules("fibonacci")

    def build(n: int) -> Configuration:
        r = Var(0)
        call = Agent(rules.symbols["Fib"], (r,))
        return Configuration((r,), (Equation(call, build_nat(n)),))

    def verify(final: Configuration, n: int) -> bool:
        return nat_value(final.interface[0]) == fibonacci_value(n)

    return BenchProgram("fibonacci", rules, (15,), build, fibonacci_value, verify)


def _lsystem() -> BenchProgram:
    rules = load_rules("lsystem")

    def build(n: int) -> Configuration:
        if n < 1:
            raise ValueError("iteration count must be at least 1")
        r = Var(0)
        call = Agent(rules.symbols["Ga"], (r, Agent(rules.symbols["Nil"])))
        return Configuration((r,), (Equation(call, build_nat(n - 1)),))

    def verify(final: Configuration, n: int) -> bool:
        return census(final.interface[0]) == lsystem_census(n)

    return BenchProgram("lsystem", rules, (20,), build, lsystem_census, verify)


_BUILDERS = {
    "addition": _addition,
    "ackermann": _ackermann,
    "fibonacci": _fibonacci,
    "lsystem": _lsystem,
}


def program(name: str) -> BenchProgram:
    """A validated benchmark program by name."""
    builder = _BUILDERS.get(name)
    if builder is None:
        raise UnknownProgram(f"unknown benchmark {name!r}; pick from {PROGRAM_NAMES}")
    return builder()
