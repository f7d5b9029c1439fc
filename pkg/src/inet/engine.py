"""Bulk-synchronous two-phase evaluator.

Each main-loop iteration runs an interaction phase (every active equation is
replaced by its rule's right-hand side, written into fixed-size slot groups
and then compacted) followed by a communication phase (a keyed adjacent merge
over variable-left equations). The loop ends when an iteration performs no
interaction and no merge; a final sequential cleanup resolves the remaining
variable plumbing into a readable normal form.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, TypeVar

from .core import (
    Agent,
    Configuration,
    Equation,
    FreshIdAllocator,
    RuleSet,
    Term,
    Var,
    find_rule,
    instantiate,
)
from .errors import LoopCapExceeded, NameDisciplineError, SlotOverflow
from .profile import LoopStats

T = TypeVar("T")


@dataclass(slots=True)
class EngineConfig:
    """Evaluator knobs.

    ``slot_count`` is the fixed number of result slots per equation; ``None``
    means "use the rule set's maximum rhs length". A value smaller than that
    maximum is rejected when evaluation starts.
    """

    slot_count: Optional[int] = None
    max_loops: int = 1_000_000
    worker_hint: int = 1
    collect_stats: bool = True
    validate_phases: bool = False


@dataclass(slots=True)
class EvalResult:
    final: Configuration
    loops: list[LoopStats]
    total_interactions: int
    total_communications: int


def reduce_by_key(items: Sequence[T], key: Callable[[T], object], merge: Callable[[T, T], T]) -> list[T]:
    """Fold adjacent items whose keys are equal; all others pass through.

    On ``[2,0,3,3,3,7,5,5]`` with the identity key and addition this yields
    ``[2,0,9,7,10]``.
    """
    out: list[T] = []
    last_key: object = object()
    for x in items:
        k = key(x)
        if out and k == last_key:
            out[-1] = merge(out[-1], x)
        else:
            out.append(x)
            last_key = k
    return out


def _fill_slots(
    eqs: Sequence[Equation],
    lo: int,
    hi: int,
    slots: list,
    n: int,
    rules: RuleSet,
    base: int,
    max_fresh: int,
) -> int:
    """Reduce equations in [lo, hi); returns the number of interactions."""
    interactions = 0
    for i in range(lo, hi):
        eq = eqs[i]
        if type(eq.lhs) is Agent and type(eq.rhs) is Agent:
            rule = find_rule(rules, eq)
            out = instantiate(rule, eq, FreshIdAllocator(base + i * max_fresh))
            if len(out) > n:
                raise SlotOverflow(
                    f"rule for {rule.lhs_a.name} >< {rule.lhs_b.name} produces "
                    f"{len(out)} equations but slot_count is {n}"
                )
            slots[i * n : i * n + len(out)] = out
            interactions += 1
        else:
            slots[i * n] = eq
    return interactions


def interaction_phase(
    eqs: Sequence[Equation],
    rules: RuleSet,
    cfg: EngineConfig,
    fresh: FreshIdAllocator,
    pool: Optional[ThreadPoolExecutor] = None,
) -> tuple[list[Equation], int]:
    """Reduce every active equation in parallel; pass everything else through.

    Each input equation owns a fixed group of ``slot_count`` result slots;
    unused slots stay dummy and are removed by a stable compaction, so the
    output multiset is independent of traversal order and worker count.
    """
    n = cfg.slot_count if cfg.slot_count is not None else max(rules.max_rhs_size, 1)
    n = max(n, 1)
    max_fresh = rules.max_fresh
    base = fresh.reserve(len(eqs) * max_fresh)
    slots: list = [None] * (len(eqs) * n)
    if pool is None or len(eqs) < 2:
        interactions = _fill_slots(eqs, 0, len(eqs), slots, n, rules, base, max_fresh)
    else:
        workers = pool._max_workers
        chunk = -(-len(eqs) // workers)
        futures = [
            pool.submit(_fill_slots, eqs, lo, min(lo + chunk, len(eqs)), slots, n, rules, base, max_fresh)
            for lo in range(0, len(eqs), chunk)
        ]
        interactions = sum(f.result() for f in futures)
    return [s for s in slots if s is not None], interactions


def communication_phase(eqs: Sequence[Equation]) -> tuple[list[Equation], int]:
    """Merge pairs of equations that share a variable on their variable side.

    Variable-headed equations are normalized variable-left (for a
    variable-variable equation, the smaller id goes left), sorted by left id
    with ties stable by input position, and adjacent equations with the same
    left id are merged: {x=t, x=u} becomes t=u. Active equations pass through.
    """
    passthrough: list[Equation] = []
    eligible: list[Equation] = []
    for eq in eqs:
        lv = type(eq.lhs) is Var
        rv = type(eq.rhs) is Var
        if lv and rv:
            if eq.rhs.id < eq.lhs.id:
                eq = Equation(eq.rhs, eq.lhs)
            eligible.append(eq)
        elif lv:
            eligible.append(eq)
        elif rv:
            eligible.append(Equation(eq.rhs, eq.lhs))
        else:
            passthrough.append(eq)
    eligible.sort(key=lambda e: e.lhs.id)
    merged = reduce_by_key(
        eligible,
        key=lambda e: e.lhs.id,
        merge=lambda a, b: Equation(a.rhs, b.rhs),
    )
    return passthrough + merged, len(eligible) - len(merged)


def check_name_discipline(interface: Sequence[Term], eqs: Sequence[Equation]) -> None:
    """Raise NameDisciplineError if any variable id occurs more than twice."""
    from .core import iter_vars

    counts: dict[int, int] = {}
    terms: list[Term] = list(interface)
    for eq in eqs:
        terms.append(eq.lhs)
        terms.append(eq.rhs)
    for t in terms:
        for v in iter_vars(t):
            c = counts.get(v, 0) + 1
            if c > 2:
                raise NameDisciplineError(f"variable {v} occurs more than twice")
            counts[v] = c


def evaluate(
    config: Configuration, rules: RuleSet, cfg: Optional[EngineConfig] = None
) -> EvalResult:
    """Run the two-phase loop to a fixed point, then clean up sequentially."""
    cfg = cfg if cfg is not None else EngineConfig()
    if cfg.slot_count is not None and cfg.slot_count < rules.max_rhs_size:
        raise SlotOverflow(
            f"slot_count {cfg.slot_count} is smaller than the largest rule "
            f"rhs ({rules.max_rhs_size})"
        )
    fresh = FreshIdAllocator(config.max_var_id() + 1)
    eqs: list[Equation] = list(config.equations)
    stats: list[LoopStats] = []
    total_int = 0
    total_com = 0
    pool = ThreadPoolExecutor(cfg.worker_hint) if cfg.worker_hint > 1 else None
    try:
        loop = 0
        while True:
            loop += 1
            if loop > cfg.max_loops:
                raise LoopCapExceeded(cfg.max_loops)
            t0 = time.perf_counter_ns()
            eqs, interactions = interaction_phase(eqs, rules, cfg, fresh, pool)
            if cfg.validate_phases:
                check_name_discipline(config.interface, eqs)
            eqs, communications = communication_phase(eqs)
            if cfg.validate_phases:
                check_name_discipline(config.interface, eqs)
            elapsed_us = (time.perf_counter_ns() - t0) // 1000
            total_int += interactions
            total_com += communications
            if cfg.collect_stats:
                stats.append(
                    LoopStats(loop, interactions, communications, len(eqs), elapsed_us)
                )
            if interactions == 0 and communications == 0:
                break
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    final = finalize(eqs, config.interface)
    return EvalResult(final, stats, total_int, total_com)


# ---------------------------------------------------------------------------
# Final cleanup (substitution / collect / leftover variable chains)


class _MAgent:
    __slots__ = ("sym", "children")

    def __init__(self, sym, children):
        self.sym = sym
        self.children = children


def _to_mutable(term: Term, container: list, index: int, occ: dict) -> None:
    stack = [(term, container, index)]
    while stack:
        t, cont, i = stack.pop()
        if type(t) is Var:
            cont[i] = t
            occ.setdefault(t.id, []).append((cont, i))
        else:
            m = _MAgent(t.sym, [None] * len(t.children))
            cont[i] = m
            for j, c in enumerate(t.children):
                stack.append((c, m.children, j))


def _to_immutable(node) -> Term:
    # post-order conversion with an explicit stack
    out: dict[int, Term] = {}
    stack = [(node, False)]
    while stack:
        n, done = stack.pop()
        if type(n) is Var:
            out[id(n)] = n
            continue
        if done:
            out[id(n)] = Agent(n.sym, tuple(out[id(c)] for c in n.children))
        else:
            stack.append((n, True))
            for c in n.children:
                stack.append((c, False))
    return out[id(node)]


def _contains_var(node, var_id: int) -> bool:
    stack = [node]
    while stack:
        n = stack.pop()
        if type(n) is Var:
            if n.id == var_id:
                return True
        else:
            stack.extend(n.children)
    return False


def finalize(eqs: Sequence[Equation], interface: Sequence[Term]) -> Configuration:
    """Exhaustively apply substitution, collect, and leftover chain merges.

    Precondition: no active equations remain and the communication phase is
    at a fixed point. Runs sequentially; every elimination removes one
    equation, splicing its term into the single other occurrence of the
    eliminated variable, so this is linear in the size of the net.
    """
    occ: dict[int, list] = {}
    mut_iface: list = [None] * len(interface)
    for i, t in enumerate(interface):
        _to_mutable(t, mut_iface, i, occ)
    mut_eqs: list = []
    alive: list[bool] = []
    for eq in eqs:
        holder = [None, None]
        _to_mutable(eq.lhs, holder, 0, occ)
        _to_mutable(eq.rhs, holder, 1, occ)
        mut_eqs.append(holder)
        alive.append(True)
    dead_containers: set[int] = set()
    eq_of_container = {id(h): idx for idx, h in enumerate(mut_eqs)}

    from collections import deque

    queue = deque(range(len(mut_eqs)))
    while queue:
        idx = queue.popleft()
        if not alive[idx]:
            continue
        holder = mut_eqs[idx]
        for side in (0, 1):
            v = holder[side]
            if type(v) is not Var:
                continue
            target = None
            for slot in occ.get(v.id, []):
                cont, j = slot
                if cont is holder and j == side:
                    continue
                if id(cont) in dead_containers:
                    continue
                owner = eq_of_container.get(id(cont))
                if owner is not None and not alive[owner]:
                    continue  # stale top-level slot of a consumed equation
                target = slot
                break
            if target is None:
                continue
            # the other occurrence must not be inside this very equation
            if target[0] is holder or _contains_var(holder[1 - side], v.id):
                continue
            # consume this equation: splice the other side into the target
            replacement = holder[1 - side]
            alive[idx] = False
            dead_containers.add(id(holder))
            tcont, tj = target
            tcont[tj] = replacement
            if type(replacement) is Var:
                slots = occ[replacement.id]
                for k, s in enumerate(slots):
                    if s[0] is holder and s[1] == 1 - side:
                        slots[k] = target
                        break
            occ.pop(v.id, None)
            towner = eq_of_container.get(id(tcont))
            if towner is not None and alive[towner]:
                queue.append(towner)
            break
    final_iface = tuple(_to_immutable(t) for t in mut_iface)
    final_eqs = tuple(
        Equation(_to_immutable(h[0]), _to_immutable(h[1]))
        for idx, h in enumerate(mut_eqs)
        if alive[idx]
    )
    return Configuration(final_iface, final_eqs)
