"""The mfcalc input language: tokenizer, recursive-descent parser, AST, pretty-printer.

    script  := stmt+
    stmt    := (ring | potential | mfdef | cmd) ";"
    ring    := "ring" IDENT ("," IDENT)* ["weights" INT ("," INT)* "degree" INT]
    potential := "potential" IDENT "=" poly
    mfdef   := "mf" IDENT "=" expr
    expr    := IDENT
             | "koszul" "(" plist "," plist ")"
             | "factorization" "(" matrix "," matrix ")"
             | ("tensor" | "sum") "(" expr "," expr ")"
             | ("dual" | "shift") "(" expr ")"
    cmd     := ("print" | "check") NAME "(" [arg ("," arg)*] ")"
    arg     := IDENT | INT
    plist   := "[" poly ("," poly)* "]"
    matrix  := "[" plist ("," plist)* "]"
    poly    := ["-"] term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := atom ["^" INT]
    atom    := INT ["/" INT] | IDENT | "(" poly ")"

Command names may contain hyphens (``exp-equiv``).  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .poly import Polynomial


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int, expected: Sequence[str] = ()):
        self.line, self.col, self.expected = line, col, tuple(expected)
        tail = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{line}:{col}: {msg}{tail}")


class SemanticError(ValueError):
    def __init__(self, msg: str, index: int):
        self.index = index
        super().__init__(f"statement {index + 1}: {msg}")


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Paren:
    body: "Sum"


@dataclass(frozen=True)
class Power:
    base: Union[Num, Var, Paren]
    exp: Optional[int]


@dataclass(frozen=True)
class Product:
    factors: Tuple[Power, ...]


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Tuple[int, Product], ...]  # (sign, product)


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Koszul:
    a: Tuple[Sum, ...]
    b: Tuple[Sum, ...]


@dataclass(frozen=True)
class Factorization:
    d1: Tuple[Tuple[Sum, ...], ...]
    d0: Tuple[Tuple[Sum, ...], ...]


@dataclass(frozen=True)
class Binary:
    op: str  # tensor | sum
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Unary:
    op: str  # dual | shift
    arg: "Expr"


Expr = Union[Ref, Koszul, Factorization, Binary, Unary]


@dataclass(frozen=True)
class RingDecl:
    names: Tuple[str, ...]
    weights: Optional[Tuple[int, ...]]
    degree: Optional[int]


@dataclass(frozen=True)
class PotentialDecl:
    name: str
    poly: Sum


@dataclass(frozen=True)
class MfDef:
    name: str
    expr: Expr


@dataclass(frozen=True)
class Command:
    kind: str  # print | check
    name: str
    args: Tuple[Union[str, int], ...]


Statement = Union[RingDecl, PotentialDecl, MfDef, Command]


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...]

    @property
    def ring(self) -> Optional[RingDecl]:
        for s in self.statements:
            if isinstance(s, RingDecl):
                return s
        return None


PRINT_COMMANDS = {"chern": 1, "bb": 2, "euler": 2, "ext": 2, "milnor": 0, "classes": 1}
CHECK_COMMANDS = {"valid": 1, "exp-equiv": 1, "closed": 1, "gauge": 1, "rrh": 2, "additivity": 2, "shift": 1, "homogeneity": 1}
CONSTRUCTORS = {"koszul", "factorization", "tensor", "sum", "dual", "shift"}
KEYWORDS = {"ring", "weights", "degree", "potential", "mf", "print", "check"}

# -- tokenizer ----------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[(),;=\[\]+\-*/^])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # int | ident | op | eof
    text: str
    line: int
    col: int


def tokenize(src: str) -> List[Token]:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in ("int", "ident", "op"):
                out.append(Token(kind, text, line, col))
            col += len(text)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, expected=()):
        t = self.tok
        found = t.text or "end of input"
        raise ParseError(f"{msg}, found {found!r}", t.line, t.col, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def _adjacent(self) -> bool:
        a, b, c = self.toks[self.i - 1], self.toks[self.i], self.toks[self.i + 1]
        return a.line == b.line == c.line and a.col + len(a.text) == b.col and b.col + 1 == c.col

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error("syntax error", [text])
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            self.error("syntax error", ["identifier"])
        t = self.tok
        self.i += 1
        return t.text

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.error("syntax error", ["integer"])
        t = self.tok
        self.i += 1
        return int(t.text)

    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
            self.expect(";")
        if not stmts:
            self.error("empty script", ["ring", "potential", "mf", "print", "check"])
        return Script(tuple(stmts))

    def statement(self) -> Statement:
        if self.at("ring"):
            self.i += 1
            names = [self.ident()]
            while self.at(","):
                self.i += 1
                names.append(self.ident())
            weights = degree = None
            if self.at("weights"):
                self.i += 1
                weights = [self.integer()]
                while self.at(","):
                    self.i += 1
                    weights.append(self.integer())
                self.expect("degree")
                degree = self.integer()
                weights = tuple(weights)
            return RingDecl(tuple(names), weights, degree)
        if self.at("potential"):
            self.i += 1
            name = self.ident()
            self.expect("=")
            return PotentialDecl(name, self.poly())
        if self.at("mf"):
            self.i += 1
            name = self.ident()
            self.expect("=")
            return MfDef(name, self.expr())
        if self.at("print") or self.at("check"):
            kind = self.tok.text
            self.i += 1
            if self.tok.kind != "ident":
                self.error("syntax error", ["command name"])
            name = self.tok.text
            self.i += 1
            # hyphenated command names such as exp-equiv, written without spaces
            while self.at("-") and self._adjacent() and self.toks[self.i + 1].kind == "ident":
                name += "-" + self.toks[self.i + 1].text
                self.i += 2
            self.expect("(")
            args = []
            if not self.at(")"):
                args.append(self.arg())
                while self.at(","):
                    self.i += 1
                    args.append(self.arg())
            self.expect(")")
            return Command(kind, name, tuple(args))
        self.error("syntax error", ["ring", "potential", "mf", "print", "check"])

    def arg(self):
        if self.tok.kind == "int":
            return self.integer()
        return self.ident()

    def expr(self) -> Expr:
        if self.tok.kind != "ident":
            self.error("syntax error", ["constructor or identifier"])
        name = self.tok.text
        if name not in CONSTRUCTORS:
            return Ref(self.ident())
        self.i += 1
        self.expect("(")
        if name == "koszul":
            a = self.plist()
            self.expect(",")
            b = self.plist()
            node = Koszul(a, b)
        elif name == "factorization":
            d1 = self.matrix()
            self.expect(",")
            d0 = self.matrix()
            node = Factorization(d1, d0)
        elif name in ("tensor", "sum"):
            left = self.expr()
            self.expect(",")
            node = Binary(name, left, self.expr())
        else:
            node = Unary(name, self.expr())
        self.expect(")")
        return node

    def plist(self) -> Tuple[Sum, ...]:
        self.expect("[")
        out = [self.poly()]
        while self.at(","):
            self.i += 1
            out.append(self.poly())
        self.expect("]")
        return tuple(out)

    def matrix(self):
        self.expect("[")
        rows = [self.plist()]
        while self.at(","):
            self.i += 1
            rows.append(self.plist())
        self.expect("]")
        return tuple(rows)

    def poly(self) -> Sum:
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        terms = [(sign, self.term())]
        while self.at("+") or self.at("-"):
            s = 1 if self.tok.text == "+" else -1
            self.i += 1
            terms.append((s, self.term()))
        return Sum(tuple(terms))

    def term(self) -> Product:
        factors = [self.factor()]
        while self.at("*"):
            self.i += 1
            factors.append(self.factor())
        return Product(tuple(factors))

    def factor(self) -> Power:
        base = self.atom()
        exp = None
        if self.at("^"):
            self.i += 1
            exp = self.integer()
        return Power(base, exp)

    def atom(self):
        if self.tok.kind == "int":
            num = self.integer()
            if self.at("/"):
                self.i += 1
                den = self.integer()
                if den == 0:
                    self.i -= 1
                    self.error("division by zero")
                return Num(Fraction(num, den))
            return Num(Fraction(num))
        if self.at("("):
            self.i += 1
            body = self.poly()
            self.expect(")")
            return Paren(body)
        if self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
            return Var(self.ident())
        self.error("syntax error", ["number", "variable", "("])


def _poly_vars(p: Sum, acc: set):
    for _, prod in p.terms:
        for f in prod.factors:
            if isinstance(f.base, Var):
                acc.add(f.base.name)
            elif isinstance(f.base, Paren):
                _poly_vars(f.base.body, acc)


def _expr_polys(e: Expr):
    if isinstance(e, Koszul):
        yield from e.a
        yield from e.b
    elif isinstance(e, Factorization):
        for row in e.d1 + e.d0:
            yield from row
    elif isinstance(e, Binary):
        yield from _expr_polys(e.left)
        yield from _expr_polys(e.right)
    elif isinstance(e, Unary):
        yield from _expr_polys(e.arg)


def _expr_refs(e: Expr):
    if isinstance(e, Ref):
        yield e.name
    elif isinstance(e, Binary):
        yield from _expr_refs(e.left)
        yield from _expr_refs(e.right)
    elif isinstance(e, Unary):
        yield from _expr_refs(e.arg)


def check_semantics(script: Script) -> None:
    ring = None
    potential = None
    mfs = set()
    for idx, st in enumerate(script.statements):
        if isinstance(st, RingDecl):
            if ring is not None:
                raise SemanticError("only one ring declaration is allowed", idx)
            if len(set(st.names)) != len(st.names):
                raise SemanticError("repeated variable name in ring", idx)
            if st.weights is not None and len(st.weights) != len(st.names):
                raise SemanticError("number of weights differs from number of variables", idx)
            ring = st
        elif isinstance(st, PotentialDecl):
            if ring is None:
                raise SemanticError("ring undeclared", idx)
            if potential is not None:
                raise SemanticError("only one potential declaration is allowed", idx)
            _check_vars(st.poly, ring, idx)
            potential = st.name
        elif isinstance(st, MfDef):
            if potential is None:
                raise SemanticError("potential undeclared", idx)
            for p in _expr_polys(st.expr):
                _check_vars(p, ring, idx)
            for r in _expr_refs(st.expr):
                if r not in mfs:
                    raise SemanticError(f"undefined identifier {r}", idx)
            mfs.add(st.name)
        else:
            table = PRINT_COMMANDS if st.kind == "print" else CHECK_COMMANDS
            if st.name not in table:
                raise SemanticError(f"unknown {st.kind} command {st.name}", idx)
            if len(st.args) != table[st.name]:
                raise SemanticError(f"{st.name} takes {table[st.name]} argument(s)", idx)
            if potential is None:
                raise SemanticError("potential undeclared", idx)
            for k, a in enumerate(st.args):
                if st.name == "bb" and k == 1:
                    if not isinstance(a, int):
                        raise SemanticError("bb takes a cocycle index", idx)
                    continue
                if not isinstance(a, str):
                    raise SemanticError(f"{st.name} expects factorization names", idx)
                if a not in mfs:
                    raise SemanticError(f"undefined identifier {a}", idx)


def _check_vars(p: Sum, ring: RingDecl, idx: int):
    used = set()
    _poly_vars(p, used)
    for v in sorted(used):
        if v not in ring.names:
            raise SemanticError(f"undefined identifier {v}", idx)


def parse(source: str) -> Script:
    script = _Parser(source).script()
    check_semantics(script)
    return script


# -- evaluation of polynomial literals -------------------------------------------


def eval_poly(p: Sum, names: Sequence[str]) -> Polynomial:
    n = len(names)
    index = {v: i for i, v in enumerate(names)}
    total = Polynomial.zero(n)
    for sign, prod in p.terms:
        t = Polynomial.const(n, sign)
        for f in prod.factors:
            if isinstance(f.base, Num):
                b = Polynomial.const(n, f.base.value)
            elif isinstance(f.base, Var):
                b = Polynomial.var(n, index[f.base.name])
            else:
                b = eval_poly(f.base.body, names)
            t = t * (b ** f.exp if f.exp is not None else b)
        total = total + t
    return total


# -- pretty printing -----------------------------------------------------------


def _fmt_num(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def pretty_poly(p: Sum) -> str:
    out = []
    for k, (sign, prod) in enumerate(p.terms):
        body = "*".join(_pretty_power(f) for f in prod.factors)
        if k == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append((" - " if sign < 0 else " + ") + body)
    return "".join(out)


def _pretty_power(f: Power) -> str:
    if isinstance(f.base, Num):
        s = _fmt_num(f.base.value)
    elif isinstance(f.base, Var):
        s = f.base.name
    else:
        s = f"({pretty_poly(f.base.body)})"
    return s if f.exp is None else f"{s}^{f.exp}"


def pretty_expr(e: Expr) -> str:
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Koszul):
        return f"koszul([{', '.join(map(pretty_poly, e.a))}], [{', '.join(map(pretty_poly, e.b))}])"
    if isinstance(e, Factorization):
        def mat(m):
            return "[" + ", ".join("[" + ", ".join(map(pretty_poly, r)) + "]" for r in m) + "]"

        return f"factorization({mat(e.d1)}, {mat(e.d0)})"
    if isinstance(e, Binary):
        return f"{e.op}({pretty_expr(e.left)}, {pretty_expr(e.right)})"
    return f"{e.op}({pretty_expr(e.arg)})"


def pretty_statement(st: Statement) -> str:
    if isinstance(st, RingDecl):
        s = "ring " + ", ".join(st.names)
        if st.weights is not None:
            s += " weights " + ", ".join(map(str, st.weights)) + f" degree {st.degree}"
        return s + ";"
    if isinstance(st, PotentialDecl):
        return f"potential {st.name} = {pretty_poly(st.poly)};"
    if isinstance(st, MfDef):
        return f"mf {st.name} = {pretty_expr(st.expr)};"
    return f"{st.kind} {st.name}({', '.join(map(str, st.args))});"


def pretty(script: Script) -> str:
    return "\n".join(pretty_statement(s) for s in script.statements) + "\n"
