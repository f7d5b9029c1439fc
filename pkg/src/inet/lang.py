"""Concrete syntax for rule sets and nets (``.inet`` files).

Grammar (EBNF, LF or CRLF, ``#`` comments to end of line)::

    program   = { rule | net } ;
    rule      = pattern "><" pattern "=>" [ eqs ] ";" ;
    pattern   = AGENT [ "(" var { "," var } ")" ] ;
    net       = "net" [ terms ] ":" [ eqs ] ";" ;
    terms     = term { "," term } ;
    eqs       = eq { "," eq } ;
    eq        = term "=" term ;
    term      = var | AGENT [ "(" terms ")" ] ;

A token starting with an upper-case letter is an agent name, lower-case is a
variable. Arities are inferred from first use and checked on every later use.
A rule body is one naming scope; the net declaration is another, in which
each name may occur at most twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    Agent,
    Configuration,
    Equation,
    Rule,
    RuleSet,
    Symbol,
    Term,
    Var,
    iter_vars,
)
from .errors import (
    ArityError,
    DuplicateRuleError,
    InetSyntaxError,
    NameOccurrenceError,
    RuleShapeError,
)

_PUNCT = {"(": "lparen", ")": "rparen", ",": "comma", ";": "semi", ":": "colon"}


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # upper | lower | punct kinds | activepair | arrow | eq | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\r":
            i += 1
            continue
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("><", i):
            tokens.append(Token("activepair", "><", line, col))
            i += 2
            col += 2
            continue
        if text.startswith("=>", i):
            tokens.append(Token("arrow", "=>", line, col))
            i += 2
            col += 2
            continue
        if c == "=":
            tokens.append(Token("eq", "=", line, col))
            i += 1
            col += 1
            continue
        if c in _PUNCT:
            tokens.append(Token(_PUNCT[c], c, line, col))
            i += 1
            col += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "upper" if word[0].isupper() else "lower"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise InetSyntaxError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(slots=True)
class SourceProgram:
    rules: RuleSet
    net: Configuration
    interface_names: list[str]
    var_names: dict[int, str] = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.rules = RuleSet()
        self.net: Configuration | None = None
        self.interface_names: list[str] = []
        self.net_var_names: dict[int, str] = {}
        self._next_net_id = 0

    # -- token helpers

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self, kind: str) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != kind:
            raise InetSyntaxError(
                f"expected {kind}, found {tok.text!r}", tok.line, tok.col
            )
        self.pos += 1
        return tok

    # -- symbol table

    def symbol(self, tok: Token, arity: int) -> Symbol:
        known = self.rules.symbols.get(tok.text)
        if known is not None:
            if known.arity != arity:
                raise ArityError(
                    f"{tok.text} previously used with arity {known.arity}, "
                    f"here with {arity}",
                    tok.line,
                    tok.col,
                )
            return known
        return self.rules.declare(Symbol(tok.text, arity))

    # -- grammar

    def parse(self) -> SourceProgram:
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                break
            if tok.kind == "lower" and tok.text == "net":
                self.parse_net()
            elif tok.kind == "upper":
                self.parse_rule()
            else:
                raise InetSyntaxError(
                    f"expected a rule or a net declaration, found {tok.text!r}",
                    tok.line,
                    tok.col,
                )
        if self.net is None:
            end = self.peek()
            raise InetSyntaxError("program has no net declaration", end.line, end.col)
        return SourceProgram(
            self.rules, self.net, self.interface_names, self.net_var_names
        )

    def parse_rule(self) -> None:
        start = self.peek()
        scope: dict[str, int] = {}
        occurrences: dict[str, list[Token]] = {}
        sym_a, vars_a = self.parse_pattern(scope, occurrences)
        self.take("activepair")
        sym_b, vars_b = self.parse_pattern(scope, occurrences)
        self.take("arrow")
        rhs = self.parse_eq_list(scope, occurrences, limit=None)
        self.take("semi")
        # Linearity: a pattern variable occurs once in the pattern and once in
        # the rhs, a bound variable twice in the rhs - two occurrences either way.
        for name, toks in occurrences.items():
            if len(toks) != 2:
                tok = toks[-1]
                raise NameOccurrenceError(
                    f"variable {name} occurs {len(toks)} time(s) in the rule; "
                    f"pattern variables must be used exactly once in the "
                    f"right-hand side, bound variables exactly twice",
                    tok.line,
                    tok.col,
                )
        if self.rules.lookup(sym_a.name, sym_b.name) is not None:
            raise DuplicateRuleError(
                f"duplicate rule for pair {sym_a.name} >< {sym_b.name}",
                start.line,
                start.col,
            )
        try:
            self.rules.add(Rule(sym_a, vars_a, sym_b, vars_b, tuple(rhs)))
        except RuleShapeError as exc:
            raise NameOccurrenceError(str(exc), start.line, start.col) from exc

    def parse_pattern(
        self, scope: dict[str, int], occurrences: dict[str, list[Token]]
    ) -> tuple[Symbol, tuple[int, ...]]:
        head = self.take("upper")
        names: list[Token] = []
        if self.peek().kind == "lparen":
            self.take("lparen")
            names.append(self.take("lower"))
            while self.peek().kind == "comma":
                self.take("comma")
                names.append(self.take("lower"))
            self.take("rparen")
        sym = self.symbol(head, len(names))
        ids = []
        for tok in names:
            if tok.text in scope:
                raise NameOccurrenceError(
                    f"pattern variable {tok.text} is not distinct", tok.line, tok.col
                )
            scope[tok.text] = len(scope)
            occurrences.setdefault(tok.text, []).append(tok)
            ids.append(scope[tok.text])
        return sym, tuple(ids)

    def parse_net(self) -> None:
        kw = self.take("lower")  # 'net'
        if self.net is not None:
            raise InetSyntaxError("duplicate net declaration", kw.line, kw.col)
        scope: dict[str, int] = {}
        occurrences: dict[str, list[Token]] = {}
        interface: list[Term] = []
        if self.peek().kind != "colon":
            interface.append(self.parse_term(scope, occurrences, net_scope=True))
            while self.peek().kind == "comma":
                self.take("comma")
                interface.append(self.parse_term(scope, occurrences, net_scope=True))
        self.take("colon")
        eqs = self.parse_eq_list(scope, occurrences, limit=2)
        self.take("semi")
        self.net = Configuration(tuple(interface), tuple(eqs))
        self.interface_names = [
            self.net_var_names[t.id] if type(t) is Var else "" for t in interface
        ]

    def parse_eq_list(
        self,
        scope: dict[str, int],
        occurrences: dict[str, list[Token]],
        limit: int | None,
    ) -> list[Equation]:
        eqs: list[Equation] = []
        if self.peek().kind == "semi":
            return eqs
        net_scope = limit is not None
        eqs.append(self.parse_eq(scope, occurrences, net_scope))
        while self.peek().kind == "comma":
            self.take("comma")
            eqs.append(self.parse_eq(scope, occurrences, net_scope))
        if limit is not None:
            for name, toks in occurrences.items():
                if len(toks) > limit:
                    tok = toks[limit]
                    raise NameOccurrenceError(
                        f"name {name} occurs more than {limit} times", tok.line, tok.col
                    )
        return eqs

    def parse_eq(
        self, scope: dict[str, int], occurrences: dict[str, list[Token]], net_scope: bool
    ) -> Equation:
        lhs = self.parse_term(scope, occurrences, net_scope)
        self.take("eq")
        rhs = self.parse_term(scope, occurrences, net_scope)
        return Equation(lhs, rhs)

    def parse_term(
        self, scope: dict[str, int], occurrences: dict[str, list[Token]], net_scope: bool
    ) -> Term:
        tok = self.peek()
        if tok.kind == "lower":
            self.take("lower")
            if tok.text == "net":
                raise InetSyntaxError("'net' is a reserved word", tok.line, tok.col)
            if tok.text not in scope:
                if net_scope:
                    scope[tok.text] = self._next_net_id
                    self.net_var_names[self._next_net_id] = tok.text
                    self._next_net_id += 1
                else:
                    scope[tok.text] = len(scope)
            occurrences.setdefault(tok.text, []).append(tok)
            return Var(scope[tok.text])
        if tok.kind == "upper":
            self.take("upper")
            children: list[Term] = []
            if self.peek().kind == "lparen":
                self.take("lparen")
                children.append(self.parse_term(scope, occurrences, net_scope))
                while self.peek().kind == "comma":
                    self.take("comma")
                    children.append(self.parse_term(scope, occurrences, net_scope))
                self.take("rparen")
            sym = self.symbol(tok, len(children))
            return Agent(sym, tuple(children))
        raise InetSyntaxError(f"expected a term, found {tok.text!r}", tok.line, tok.col)


def parse_program(text: str) -> SourceProgram:
    """Parse a source program; raises ParseError subclasses with locations."""
    return _Parser(text).parse()


def parse_rules(text: str) -> RuleSet:
    """Parse a rules-only fragment (a program without a net declaration)."""
    parser = _Parser(text + "\nnet : ;")
    return parser.parse().rules


# ---------------------------------------------------------------------------
# Printing


def print_term(term: Term, names: dict[int, str]) -> str:
    out: list[str] = []
    stack: list = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, str):
            out.append(t)
        elif type(t) is Var:
            out.append(names[t.id])
        elif not t.children:
            out.append(t.sym.name)
        else:
            out.append(t.sym.name + "(")
            stack.append(")")
            for i, c in enumerate(reversed(t.children)):
                stack.append(c)
                if i != len(t.children) - 1:
                    stack.append(",")
    return "".join(out)


def _canonical_parts(config: Configuration) -> tuple[list[Term], list[Equation]]:
    from .core import _eq_shape, _skeleton

    oriented = []
    for eq in config.equations:
        if _skeleton(eq.lhs) <= _skeleton(eq.rhs):
            oriented.append(eq)
        else:
            oriented.append(Equation(eq.rhs, eq.lhs))
    oriented.sort(key=_eq_shape)
    return list(config.interface), oriented


def print_configuration(config: Configuration) -> str:
    """Deterministic canonical text for a configuration.

    Equations are orientation-normalized and sorted by structure, and
    variables renamed in first-occurrence order, so configurations that are
    alpha-equal with the same equation shapes print identically.
    """
    interface, eqs = _canonical_parts(config)
    names: dict[int, str] = {}

    def assign(term: Term) -> None:
        for vid in iter_vars(term):
            if vid not in names:
                names[vid] = f"x{len(names)}"

    for t in interface:
        assign(t)
    for eq in eqs:
        assign(eq.lhs)
        assign(eq.rhs)
    iface_txt = ", ".join(print_term(t, names) for t in interface)
    eq_txt = ", ".join(
        f"{print_term(e.lhs, names)} = {print_term(e.rhs, names)}" for e in eqs
    )
    head = f"net {iface_txt}".rstrip()
    return f"{head} : {eq_txt};" if eq_txt else f"{head} : ;"


def print_rule(rule: Rule) -> str:
    names = {v: f"x{v}" for v in rule.a_vars + rule.b_vars + rule.bound_vars}

    def pattern(sym: Symbol, ids: tuple[int, ...]) -> str:
        if not ids:
            return sym.name
        return sym.name + "(" + ",".join(names[v] for v in ids) + ")"

    body = ", ".join(
        f"{print_term(e.lhs, names)} = {print_term(e.rhs, names)}" for e in rule.rhs
    )
    lhs = f"{pattern(rule.lhs_a, rule.a_vars)} >< {pattern(rule.lhs_b, rule.b_vars)}"
    return f"{lhs} => {body};" if body else f"{lhs} => ;"


def print_program(program: SourceProgram) -> str:
    lines = [print_rule(r) for r in program.rules.rules.values()]
    lines.append(print_configuration(program.net))
    return "\n".join(lines) + "\n"
