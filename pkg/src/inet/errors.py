"""Exception types shared across the package."""


class InetError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(InetError):
    """A problem in a source program, with a source location."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class InetSyntaxError(ParseError):
    pass


class ArityError(ParseError):
    """A symbol was used with two different arities."""


class DuplicateRuleError(ParseError):
    """Two rules were declared for the same unordered symbol pair."""


class NameOccurrenceError(ParseError):
    """A name occurs more often than its scope allows."""


class UnknownSymbolError(ParseError):
    pass


class RuleShapeError(InetError):
    """A rule violates linearity or pattern-variable constraints."""


class SymbolMismatch(InetError):
    """An equation was instantiated against a rule for a different pair."""


class NoRuleForPair(InetError):
    def __init__(self, a: str, b: str):
        super().__init__(f"no rule for active pair {a} >< {b}")
        self.pair = (a, b)


class SlotOverflow(InetError):
    """A rule right-hand side exceeds the configured slot count."""


class LoopCapExceeded(InetError):
    def __init__(self, max_loops: int):
        super().__init__(f"evaluation exceeded {max_loops} loops")
        self.max_loops = max_loops


class StepCapExceeded(InetError):
    def __init__(self, max_steps: int):
        super().__init__(f"reduction exceeded {max_steps} steps")
        self.max_steps = max_steps


class InapplicableStep(InetError):
    pass


class NameDisciplineError(InetError):
    """A variable occurs more than twice; indicates an engine bug."""


class MalformedNat(InetError):
    """A term is not a pure successor tower over zero."""


class UnknownProgram(InetError):
    pass


class VerificationFailed(InetError):
    """A benchmark result disagrees with its independent oracle."""
