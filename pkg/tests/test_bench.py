"""Tests for the benchmark programs and their independent value oracles."""

import pytest

from inet.bench import (
    PROGRAM_NAMES,
    ackermann_value,
    build_nat,
    census,
    fibonacci_value,
    load_rules,
    lsystem_census,
    lsystem_string,
    nat_value,
    program,
    program_text,
)
from inet.core import Agent, Symbol, Var, alpha_equal, validate
from inet.engine import evaluate
from inet.errors import MalformedNat, UnknownProgram
from inet.lang import parse_program
from inet.oracle import Strategy, normalize


class TestNatEncoding:
    def test_build_nat(self):
        z = Symbol("Z", 0)
        s = Symbol("S", 1)
        assert build_nat(0) == Agent(z)
        assert build_nat(2) == Agent(s, (Agent(s, (Agent(z),)),))
        assert nat_value(build_nat(5)) == 5

    def test_build_nat_rejects_negatives(self):
        with pytest.raises(ValueError):
            build_nat(-1)

    def test_nat_value_examples(self):
        assert nat_value(build_nat(2)) == 2
        assert nat_value(build_nat(0)) == 0

    def test_nat_value_rejects_variables(self):
        s = Symbol("S", 1)
        with pytest.raises(MalformedNat):
            nat_value(Agent(s, (Var(0),)))

    def test_nat_value_rejects_foreign_agents(self):
        with pytest.raises(MalformedNat):
            nat_value(Agent(Symbol("A", 0)))

    def test_census(self):
        s = Symbol("S", 1)
        assert census(Agent(s, (build_nat(1),))) == {"S": 2, "Z": 1}
        with pytest.raises(MalformedNat):
            census(Var(0))


class TestValueOracles:
    def test_ackermann(self):
        assert ackermann_value(0, 0) == 1
        assert ackermann_value(1, 1) == 3
        assert ackermann_value(2, 3) == 9
        assert ackermann_value(3, 5) == 253

    def test_fibonacci(self):
        assert [fibonacci_value(n) for n in range(8)] == [0, 1, 1, 2, 3, 5, 8, 13]
        assert fibonacci_value(15) == 610

    def test_lsystem_string(self):
        assert lsystem_string(0) == "A"
        assert lsystem_string(1) == "AB"
        assert lsystem_string(2) == "ABA"
        assert lsystem_string(3) == "ABAAB"

    def test_lsystem_census_counts_the_axiom_as_iteration_one(self):
        assert lsystem_census(1) == {"Ca": 1, "Cb": 0, "Nil": 1}
        assert lsystem_census(5) == {"Ca": 5, "Cb": 3, "Nil": 1}

    def test_lsystem_populations_follow_fibonacci(self):
        for n in range(1, 12):
            c = lsystem_census(n)
            assert c["Ca"] == fibonacci_value(n)
            assert c["Cb"] == fibonacci_value(n - 1)


class TestProgramCatalog:
    def test_names(self):
        assert set(PROGRAM_NAMES) == {"addition", "ackermann", "fibonacci", "lsystem"}
        for name in PROGRAM_NAMES:
            assert program(name).name == name

    def test_unknown_program(self):
        with pytest.raises(UnknownProgram):
            program("quicksort")
        with pytest.raises(UnknownProgram):
            program_text("quicksort")

    @pytest.mark.parametrize("name", list(PROGRAM_NAMES) + ["arith"])
    def test_shipped_rule_files_parse_and_validate(self, name):
        source = parse_program(program_text(name))
        assert validate(source.net, source.rules) == []
        for rule in source.rules.rules.values():
            # linearity: every pattern variable is consumed exactly once
            assert len(set(rule.a_vars + rule.b_vars)) == len(
                rule.a_vars + rule.b_vars
            )

    def test_default_desk_nets_run(self):
        for name in PROGRAM_NAMES:
            source = parse_program(program_text(name))
            result = evaluate(source.net, source.rules)
            assert result.final.equations == ()


class TestBenchmarksAgainstOracles:
    def test_addition(self):
        prog = program("addition")
        for a, b in [(1, 0), (0, 0), (3, 4)]:
            result = evaluate(prog.build_input(a, b), prog.rules)
            assert nat_value(result.final.interface[0]) == a + b
            assert prog.verify(result.final, a, b)

    def test_addition_one_plus_zero_interaction_count(self):
        prog = program("addition")
        result = evaluate(prog.build_input(1, 0), prog.rules)
        assert nat_value(result.final.interface[0]) == 1
        assert result.total_interactions == 2

    def test_ackermann_small(self):
        prog = program("ackermann")
        result = evaluate(prog.build_input(2, 3), prog.rules)
        assert nat_value(result.final.interface[0]) == 9
        assert prog.verify(result.final, 2, 3)

    def test_fibonacci_small(self):
        prog = program("fibonacci")
        result = evaluate(prog.build_input(10, ), prog.rules)
        assert nat_value(result.final.interface[0]) == 55

    def test_lsystem_small(self):
        prog = program("lsystem")
        result = evaluate(prog.build_input(5), prog.rules)
        assert census(result.final.interface[0]) == lsystem_census(5)
        assert prog.verify(result.final, 5)

    def test_lsystem_rejects_zero_iterations(self):
        with pytest.raises(ValueError):
            program("lsystem").build_input(0)

    def test_engine_and_oracle_agree_on_small_benchmarks(self):
        cases = [
            ("addition", (2, 2)),
            ("ackermann", (2, 2)),
            ("fibonacci", (7,)),
            ("lsystem", (4,)),
        ]
        for name, params in cases:
            prog = program(name)
            config = prog.build_input(*params)
            engine_final = evaluate(config, prog.rules).final
            oracle_final = normalize(config, prog.rules, Strategy(0))
            assert alpha_equal(engine_final, oracle_final), name

    def test_rules_loadable_standalone(self):
        rules = load_rules("addition")
        assert rules.lookup("Add", "S") is not None
        assert rules.lookup("Add", "Z") is not None
