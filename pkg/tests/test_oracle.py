"""Tests for the sequential reference evaluator."""

import random

import pytest

from inet.core import (
    Agent,
    Configuration,
    Equation,
    FreshIdAllocator,
    Symbol,
    Var,
    alpha_equal,
)
from inet.errors import InapplicableStep, NoRuleForPair, StepCapExceeded
from inet.lang import parse_program, print_configuration
from inet.oracle import (
    ColStep,
    ComStep,
    IntStep,
    Strategy,
    SubStep,
    applicable_steps,
    check_diamond,
    normalize,
    normalize_trace,
    step,
)

from netgen import arith_rules, random_config, random_two_active
from test_core import ADD_RULES, S, Z, add_ruleset


def addition_net(source: str):
    return parse_program(ADD_RULES + source)


class TestApplicableSteps:
    def test_single_interaction(self):
        program = addition_net("net r : Add(r, Z) = S(Z);")
        steps = applicable_steps(program.net, program.rules)
        assert len(steps) == 1
        assert isinstance(steps[0], IntStep)
        assert set(steps[0].pair) == {"Add", "S"}

    def test_single_collect(self):
        # interface S(x) with x = Z pending
        config = Configuration(
            (Agent(S, (Var(0),)),), (Equation(Var(0), Agent(Z)),)
        )
        steps = applicable_steps(config, add_ruleset())
        assert steps == [ColStep(var=0, src=0)]

    def test_empty_net(self):
        assert applicable_steps(Configuration((), ()), add_ruleset()) == []

    def test_communication(self):
        config = Configuration(
            (),
            (Equation(Var(0), Agent(Z)), Equation(Var(0), Agent(S, (Agent(Z),)))),
        )
        steps = applicable_steps(config, add_ruleset())
        assert steps == [ComStep(var=0, eq_a=0, eq_b=1)]

    def test_substitution(self):
        # x = Z alongside S(x) = y: x occurs inside an agent side
        config = Configuration(
            (Var(1),),
            (Equation(Var(0), Agent(Z)), Equation(Agent(S, (Var(0),)), Var(1))),
        )
        steps = applicable_steps(config, add_ruleset())
        subs = [s for s in steps if isinstance(s, SubStep)]
        assert subs == [SubStep(var=0, src=0, dst=1)]
        # the interface variable y is collectable as well
        assert any(isinstance(s, ColStep) and s.var == 1 for s in steps)

    def test_active_pair_without_rule_is_not_enumerated(self):
        config = Configuration((), (Equation(Agent(Z), Agent(Z)),))
        assert applicable_steps(config, add_ruleset()) == []


class TestStep:
    def test_com(self):
        t, u = Agent(Z), Agent(S, (Agent(Z),))
        config = Configuration((), (Equation(Var(0), t), Equation(Var(0), u)))
        out = step(config, ComStep(0, 0, 1), FreshIdAllocator(1))
        assert out.equations == (Equation(t, u),)

    def test_sub(self):
        config = Configuration(
            (Var(1),),
            (Equation(Var(0), Agent(Z)), Equation(Agent(S, (Var(0),)), Var(1))),
        )
        out = step(config, SubStep(0, 0, 1), FreshIdAllocator(2))
        assert out.equations == (Equation(Agent(S, (Agent(Z),)), Var(1)),)

    def test_col(self):
        config = Configuration(
            (Agent(S, (Var(0),)),), (Equation(Var(0), Agent(Z)),)
        )
        out = step(config, ColStep(0, 0), FreshIdAllocator(1))
        assert out == Configuration((Agent(S, (Agent(Z),)),), ())

    def test_int(self):
        program = addition_net("net r : Add(r, y) = Z, y = Z;")
        rules = program.rules
        config = program.net
        s = next(
            s for s in applicable_steps(config, rules) if isinstance(s, IntStep)
        )
        out = step(config, s, FreshIdAllocator(config.max_var_id() + 1), rules)
        # rule for Add >< Z rewrites the active pair to r = y
        assert any(
            type(e.lhs) is Var and type(e.rhs) is Var for e in out.equations
        )

    def test_inapplicable(self):
        config = Configuration((), (Equation(Var(0), Agent(Z)),))
        with pytest.raises(InapplicableStep):
            step(config, ComStep(0, 0, 0), FreshIdAllocator(1))
        with pytest.raises(InapplicableStep):
            step(config, ColStep(0, 0), FreshIdAllocator(1))

    def test_int_requires_rules(self):
        program = addition_net("net r : Add(r, Z) = S(Z);")
        s = applicable_steps(program.net, program.rules)[0]
        with pytest.raises(InapplicableStep):
            step(program.net, s, FreshIdAllocator(10), None)


class TestNormalize:
    def test_one_plus_zero(self):
        program = addition_net("net r : Add(r, Z) = S(Z);")
        final = normalize(program.net, program.rules, Strategy(0))
        assert print_configuration(final) == "net S(Z) : ;"

    def test_one_plus_zero_plus_one(self):
        program = addition_net("net r : Add(r, w) = S(Z), Add(w, S(Z)) = Z;")
        for seed in range(5):
            final = normalize(program.net, program.rules, Strategy(seed))
            assert print_configuration(final) == "net S(S(Z)) : ;"

    def test_already_normal(self):
        config = Configuration((Var(0),), ())
        assert normalize(config, add_ruleset()) == config

    def test_stuck_active_pair_raises(self):
        config = Configuration((), (Equation(Agent(Z), Agent(Z)),))
        with pytest.raises(NoRuleForPair):
            normalize(config, add_ruleset())

    def test_step_cap(self):
        program = addition_net("net r : Add(r, S(S(Z))) = S(S(Z));")
        with pytest.raises(StepCapExceeded):
            normalize(program.net, program.rules, Strategy(0), max_steps=2)

    def test_strategy_independence_with_step_counts(self):
        rules = arith_rules()
        for seed in range(10):
            config = random_config(random.Random(seed), rules)
            runs = [
                normalize_trace(config, rules, Strategy(s)) for s in range(5)
            ]
            for other in runs[1:]:
                assert alpha_equal(runs[0].final, other.final)
                assert (
                    runs[0].step_counts["IntStep"] == other.step_counts["IntStep"]
                )

    def test_invariants_hold_after_every_step(self):
        rules = arith_rules()
        config = random_config(random.Random(3), rules, max_agents=20)
        normalize_trace(config, rules, Strategy(1), check=True)


class TestCheckDiamond:
    def test_two_active_pairs_from_nested_addition(self):
        program = addition_net("net r : Add(r, w) = S(Z), Add(w, S(Z)) = Z;")
        assert check_diamond(program.net, program.rules)

    def test_vacuous_with_at_most_one_active_pair(self):
        program = addition_net("net r : Add(r, Z) = S(Z);")
        assert check_diamond(program.net, program.rules)
        assert check_diamond(Configuration((), ()), add_ruleset())

    def test_random_two_active_nets(self):
        rules = arith_rules()
        for seed in range(20):
            config = random_two_active(random.Random(seed), rules)
            assert check_diamond(config, rules), f"seed {seed}"
