"""Line-oriented script language over the engine.

One statement per line; # starts a comment.  A small script:

    chart M { x:0, y:0 }
    vf X on M = x * d/dy
    lift X lambda=1 r=1 as X1
    check poisson L

Statement forms:

    chart NAME { var:WEIGHT, ... }        WEIGHT = INT or (INT, INT, ...)
    fn|vf|form NAME on CHART = expr
    tensor(q,p) [antisym|sym] NAME on CHART = expr
    dist NAME on CHART = span(expr, ...)
    connection NAME on CHART { G up lo lo = expr, ... }
    lift NAME lambda=INT r=INT [as NAME]        (distributions: r only)
    prolong CHART r=INT [as NAME]
    lift-connection NAME r=INT [as NAME]
    bracket lie|schouten|fn|nr NAME NAME [as NAME]
    d NAME [as NAME]
    liederiv NAME NAME [as NAME]
    covd NAME NAME NAME [as NAME]
    degree NAME [component=INT]
    eval NAME at (var=RAT, ...)
    check KIND args                   (see _CHECKS for the kinds)
    oracle lift NAME lambda=INT r=INT
    oracle concomitant NAME NAME NAME NAME
    oracle spotcheck NAME NAME
    print NAME

Expressions are polynomials over the chart variables extended with the
basis symbols d/dx (vector) and dx (covector) and the operators + - * ^
ox (tensor product) and ^^ (wedge, binding tighter than ox).  The
Unicode forms of the two product signs are accepted on input only; all
output is ASCII.  Rendered tensor text parses back to an equal tensor.

execute() is deterministic for a given script and seed: JSON payloads
never contain timing, and all sampling is seeded.  Exit status mapping:
0 success, 1 at least one failed check, 2 parse (lexical, syntax, name)
error, 3 semantic error.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .calculus import (concomitant, exterior_derivative, fn_bracket,
                       lie_bracket, lie_derivative, nr_bracket,
                       schouten_bracket)
from .charts import Chart, make_chart
from .checkers import (Distribution, is_almost_complex, is_almost_product,
                       is_almost_tangent, is_involutive, is_nijenhuis,
                       is_poisson, is_weighted_contact,
                       is_weighted_distribution, is_weighted_nijenhuis,
                       is_weighted_poisson, is_weighted_pn,
                       is_weighted_tensor)
from .errors import DslError, GradcalcError
from .lifts import (LiftContext, LinearConnection, covariant_derivative,
                    lift_distribution, lift_function, lift_linear_connection,
                    lift_tensor, tangent_connection)
from .oracle import (SamplePlan, identity_spot_check,
                     koszul_concomitant_oracle, taylor_lift_oracle)
from .poly import ANY_DEGREE, Poly
from .render import chart_to_json, render_poly, render_tensor, tensor_to_json
from .tensor import (TensorField, coordinate_one_form,
                     coordinate_vector_field, degree_of_tensor, insert_form,
                     scalar_field, tagged, tensor_product, wedge)

__all__ = ["parse", "execute", "run_text", "Script", "OutputRecord"]

SCHEMA = 1

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<basisvf>d/d[A-Za-z_][A-Za-z_0-9]*)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<int>[0-9]+)
  | (?P<wedge>\^\^|∧)
  | (?P<op>[{}(),=:+\-*/^])
  | (?P<ox>⊗)
""", re.VERBOSE)

_OPS = {"{": "lbrace", "}": "rbrace", "(": "lparen", ")": "rparen",
        ",": "comma", "=": "equals", ":": "colon", "+": "plus",
        "-": "minus", "*": "star", "/": "slash", "^": "caret"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def _lex_line(text: str, line_no: int) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", "lexical",
                           line_no, pos + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind == "comment":
            break
        if kind != "ws":
            if kind == "op":
                kind = _OPS[tok]
            elif kind == "basisvf":
                tok = tok[3:]
            elif kind == "ox" or (kind == "ident" and tok == "ox"):
                kind, tok = "ox", "ox"
            out.append(Token(kind, tok, line_no, m.start() + 1))
        pos = m.end()
    return out


# -- statement AST -------------------------------------------------------------

@dataclass(frozen=True)
class ChartStmt:
    name: str
    entries: tuple          # ((var, (w, ...)), ...)
    line: int
    src: str


@dataclass(frozen=True)
class DeclStmt:
    kind: str               # fn | vf | form | tensor
    q: int
    p: int
    tag: str                # none | antisym | sym
    name: str
    chart: str
    expr: tuple
    line: int
    src: str


@dataclass(frozen=True)
class DistStmt:
    name: str
    chart: str
    exprs: tuple
    line: int
    src: str


@dataclass(frozen=True)
class ConnStmt:
    name: str
    chart: str
    entries: tuple          # ((up, lo1, lo2, expr), ...)
    line: int
    src: str


@dataclass(frozen=True)
class CmdStmt:
    op: str
    args: dict
    line: int
    src: str


@dataclass(frozen=True)
class Script:
    statements: tuple


class _Parser:
    """Recursive descent over one line's tokens."""

    def __init__(self, tokens: list, line_no: int, src: str):
        self.toks = tokens
        self.i = 0
        self.line = line_no
        self.src = src

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise DslError("unexpected end of line", "syntax", self.line,
                           len(self.src) + 1)
        self.i += 1
        return t

    def expect(self, kind: str, what: str = "") -> Token:
        t = self.next()
        if t.kind != kind:
            raise DslError(f"expected {what or kind}, got {t.text!r}",
                           "syntax", t.line, t.col)
        return t

    def expect_word(self, word: str) -> Token:
        t = self.next()
        if t.kind != "ident" or t.text != word:
            raise DslError(f"expected {word!r}, got {t.text!r}", "syntax",
                           t.line, t.col)
        return t

    def done(self) -> None:
        t = self.peek()
        if t is not None:
            raise DslError(f"trailing input {t.text!r}", "syntax", t.line, t.col)

    # small helpers

    def _int(self) -> int:
        neg = False
        t = self.next()
        if t.kind == "minus":
            neg = True
            t = self.next()
        if t.kind != "int":
            raise DslError(f"expected integer, got {t.text!r}", "syntax",
                           t.line, t.col)
        v = int(t.text)
        return -v if neg else v

    def _rational(self) -> Fraction:
        num = self._int()
        if self.peek() and self.peek().kind == "slash":
            self.next()
            den = self.expect("int", "denominator")
            return Fraction(num, int(den.text))
        return Fraction(num)

    def _kv(self, key: str) -> int:
        self.expect_word(key)
        self.expect("equals")
        return self._int()

    def _opt_kv(self, key: str, default: int) -> int:
        t = self.peek()
        if t is not None and t.kind == "ident" and t.text == key:
            return self._kv(key)
        return default

    def _opt_as(self) -> str | None:
        t = self.peek()
        if t is not None and t.kind == "ident" and t.text == "as":
            self.next()
            return self.expect("ident", "name").text
        return None

    # expressions

    def expr(self) -> tuple:
        node = self.tensor_term()
        while self.peek() and self.peek().kind in ("plus", "minus"):
            op = self.next().kind
            rhs = self.tensor_term()
            node = ("add" if op == "plus" else "sub", node, rhs)
        return node

    def tensor_term(self) -> tuple:
        node = self.wedge_term()
        while self.peek() and self.peek().kind == "ox":
            self.next()
            node = ("ox", node, self.wedge_term())
        return node

    def wedge_term(self) -> tuple:
        node = self.product()
        while self.peek() and self.peek().kind == "wedge":
            self.next()
            node = ("wedge", node, self.product())
        return node

    def product(self) -> tuple:
        node = self.unary()
        while self.peek() and self.peek().kind == "star":
            self.next()
            node = ("mul", node, self.unary())
        return node

    def unary(self) -> tuple:
        t = self.peek()
        if t is not None and t.kind == "minus":
            self.next()
            return ("neg", self.unary())
        return self.power()

    def power(self) -> tuple:
        node = self.atom()
        if self.peek() and self.peek().kind == "caret":
            self.next()
            n = self.expect("int", "exponent")
            node = ("pow", node, int(n.text))
        return node

    def atom(self) -> tuple:
        t = self.next()
        if t.kind == "int":
            if self.peek() and self.peek().kind == "slash":
                self.next()
                den = self.expect("int", "denominator")
                return ("num", Fraction(int(t.text), int(den.text)))
            return ("num", Fraction(int(t.text)))
        if t.kind == "basisvf":
            return ("dvf", t.text, t.line, t.col)
        if t.kind == "ident":
            return ("var", t.text, t.line, t.col)
        if t.kind == "lparen":
            node = self.expr()
            self.expect("rparen", "')'")
            return node
        raise DslError(f"unexpected {t.text!r} in expression", "syntax",
                       t.line, t.col)


_BRACKET_KINDS = ("lie", "schouten", "fn", "nr")
_CHECKS = ("poisson", "weighted", "nijenhuis", "weighted-poisson",
           "weighted-nijenhuis", "almost-complex", "almost-product",
           "almost-tangent", "pn", "involutive", "weighted-distribution",
           "contact")


def _parse_statement(tokens: list, line_no: int, src: str):
    p = _Parser(tokens, line_no, src)
    head = p.expect("ident", "statement keyword")
    word = head.text

    if word == "chart":
        name = p.expect("ident", "chart name").text
        p.expect("lbrace", "'{'")
        entries = []
        while True:
            t = p.peek()
            if t is None:
                raise DslError("unterminated chart block", "syntax", line_no,
                               len(src) + 1)
            if t.kind == "rbrace":
                p.next()
                break
            if t.kind == "comma":
                p.next()
                continue
            var = p.expect("ident", "variable name").text
            p.expect("colon", "':'")
            t = p.peek()
            if t is not None and t.kind == "lparen":
                p.next()
                ws = [p._int()]
                while p.peek() and p.peek().kind == "comma":
                    p.next()
                    ws.append(p._int())
                p.expect("rparen", "')'")
                entries.append((var, tuple(ws)))
            else:
                entries.append((var, (p._int(),)))
        p.done()
        if not entries:
            raise DslError("chart declares no variables", "syntax", line_no, 1)
        return ChartStmt(name, tuple(entries), line_no, src)

    if word in ("fn", "vf", "form", "tensor"):
        q = p_val = -1
        tag = "none"
        if word == "tensor":
            p.expect("lparen", "'('")
            q = p._int()
            p.expect("comma", "','")
            p_val = p._int()
            p.expect("rparen", "')'")
            t = p.peek()
            if t is not None and t.kind == "ident" and t.text in ("antisym", "sym"):
                tag = p.next().text
            if q < 0 or p_val < 0:
                raise DslError("tensor valence must be non-negative", "syntax",
                               line_no, head.col)
        name = p.expect("ident", "name").text
        p.expect_word("on")
        chart = p.expect("ident", "chart name").text
        p.expect("equals")
        expr = p.expr()
        p.done()
        return DeclStmt(word, q, p_val, tag, name, chart, expr, line_no, src)

    if word == "dist":
        name = p.expect("ident", "name").text
        p.expect_word("on")
        chart = p.expect("ident", "chart name").text
        p.expect("equals")
        p.expect_word("span")
        p.expect("lparen", "'('")
        exprs = [p.expr()]
        while p.peek() and p.peek().kind == "comma":
            p.next()
            exprs.append(p.expr())
        p.expect("rparen", "')'")
        p.done()
        return DistStmt(name, chart, tuple(exprs), line_no, src)

    if word == "connection":
        name = p.expect("ident", "name").text
        p.expect_word("on")
        chart = p.expect("ident", "chart name").text
        p.expect("lbrace", "'{'")
        entries = []
        while True:
            t = p.peek()
            if t is None:
                raise DslError("unterminated connection block", "syntax",
                               line_no, len(src) + 1)
            if t.kind == "rbrace":
                p.next()
                break
            if t.kind == "comma":
                p.next()
                continue
            p.expect_word("G")
            up = p.expect("ident", "upper index").text
            lo1 = p.expect("ident", "lower index").text
            lo2 = p.expect("ident", "lower index").text
            p.expect("equals")
            entries.append((up, lo1, lo2, p.expr()))
        p.done()
        return ConnStmt(name, chart, tuple(entries), line_no, src)

    if word == "lift":
        t = p.peek()
        if t is not None and t.kind == "minus":
            p.next()
            p.expect_word("connection")
            name = p.expect("ident", "connection name").text
            r = p._kv("r")
            alias = p._opt_as()
            p.done()
            return CmdStmt("lift-connection", {"name": name, "r": r,
                                               "as": alias}, line_no, src)
        name = p.expect("ident", "name").text
        lam = None
        t = p.peek()
        if t is not None and t.kind == "ident" and t.text == "lambda":
            lam = p._kv("lambda")
        r = p._kv("r")
        alias = p._opt_as()
        p.done()
        return CmdStmt("lift", {"name": name, "lambda": lam, "r": r,
                                "as": alias}, line_no, src)

    if word == "prolong":
        name = p.expect("ident", "chart name").text
        r = p._kv("r")
        alias = p._opt_as()
        p.done()
        return CmdStmt("prolong", {"name": name, "r": r, "as": alias},
                       line_no, src)

    if word == "bracket":
        kind = p.expect("ident", "bracket kind").text
        if kind not in _BRACKET_KINDS:
            raise DslError(f"unknown bracket kind {kind!r}", "syntax",
                           line_no, head.col)
        a = p.expect("ident", "name").text
        b = p.expect("ident", "name").text
        alias = p._opt_as()
        p.done()
        return CmdStmt("bracket", {"kind": kind, "a": a, "b": b,
                                   "as": alias}, line_no, src)

    if word == "d":
        name = p.expect("ident", "name").text
        alias = p._opt_as()
        p.done()
        return CmdStmt("d", {"name": name, "as": alias}, line_no, src)

    if word == "liederiv":
        x = p.expect("ident", "vector field").text
        k = p.expect("ident", "tensor").text
        alias = p._opt_as()
        p.done()
        return CmdStmt("liederiv", {"x": x, "k": k, "as": alias}, line_no, src)

    if word == "covd":
        c = p.expect("ident", "connection").text
        x = p.expect("ident", "vector field").text
        y = p.expect("ident", "vector field").text
        alias = p._opt_as()
        p.done()
        return CmdStmt("covd", {"conn": c, "x": x, "y": y, "as": alias},
                       line_no, src)

    if word == "degree":
        name = p.expect("ident", "name").text
        comp = p._opt_kv("component", 0)
        p.done()
        return CmdStmt("degree", {"name": name, "component": comp},
                       line_no, src)

    if word == "eval":
        name = p.expect("ident", "name").text
        p.expect_word("at")
        p.expect("lparen", "'('")
        point = []
        var = p.expect("ident", "variable").text
        p.expect("equals")
        point.append((var, p._rational()))
        while p.peek() and p.peek().kind == "comma":
            p.next()
            var = p.expect("ident", "variable").text
            p.expect("equals")
            point.append((var, p._rational()))
        p.expect("rparen", "')'")
        p.done()
        return CmdStmt("eval", {"name": name, "point": tuple(point)},
                       line_no, src)

    if word == "check":
        kind = p.expect("ident", "check kind").text
        while p.peek() and p.peek().kind == "minus":
            p.next()
            kind += "-" + p.expect("ident", "check kind").text
        if kind not in _CHECKS:
            raise DslError(f"unknown check kind {kind!r}", "syntax",
                           line_no, head.col)
        args = {"kind": kind}
        if kind == "pn":
            args["a"] = p.expect("ident", "name").text
            args["b"] = p.expect("ident", "name").text
        else:
            args["a"] = p.expect("ident", "name").text
        if kind in ("weighted", "weighted-poisson", "pn", "contact"):
            args["k"] = p._kv("k")
        if kind == "contact":
            args["n"] = p._kv("n")
        args["component"] = p._opt_kv("component", 0)
        p.done()
        return CmdStmt("check", args, line_no, src)

    if word == "oracle":
        sub = p.expect("ident", "oracle kind").text
        if sub == "lift":
            name = p.expect("ident", "function name").text
            lam = p._kv("lambda")
            r = p._kv("r")
            p.done()
            return CmdStmt("oracle", {"sub": "lift", "name": name,
                                      "lambda": lam, "r": r}, line_no, src)
        if sub == "concomitant":
            names = [p.expect("ident", "name").text for _ in range(4)]
            p.done()
            return CmdStmt("oracle", {"sub": "concomitant", "names": tuple(names)},
                           line_no, src)
        if sub == "spotcheck":
            a = p.expect("ident", "name").text
            b = p.expect("ident", "name").text
            p.done()
            return CmdStmt("oracle", {"sub": "spotcheck", "a": a, "b": b},
                           line_no, src)
        raise DslError(f"unknown oracle form {sub!r}", "syntax", line_no,
                       head.col)

    if word == "print":
        name = p.expect("ident", "name").text
        p.done()
        return CmdStmt("print", {"name": name}, line_no, src)

    raise DslError(f"unknown statement {word!r}", "syntax", line_no, head.col)


# -- static name resolution ----------------------------------------------------

def _expr_names(node: tuple):
    op = node[0]
    if op in ("var", "dvf"):
        yield node
    elif op in ("add", "sub", "mul", "ox", "wedge"):
        yield from _expr_names(node[1])
        yield from _expr_names(node[2])
    elif op == "neg":
        yield from _expr_names(node[1])
    elif op == "pow":
        yield from _expr_names(node[1])


def _resolve(script: Script) -> None:
    """Check chart references, expression variables, and object names."""
    kinds: dict = {}

    def need(name: str, want: tuple, line: int) -> None:
        k = kinds.get(name)
        if k is None:
            raise DslError(f"{name!r} is not defined", "name", line)
        if k not in want:
            raise DslError(f"{name!r} is a {k}, expected {' or '.join(want)}",
                           "name", line)

    def define(name: str, kind: str, line: int) -> None:
        if name in kinds:
            raise DslError(f"{name!r} is already defined", "name", line)
        kinds[name] = kind

    def check_expr(node: tuple, chart_vars: set, chart_name: str) -> None:
        for ref in _expr_names(node):
            if ref[0] == "dvf":
                if ref[1] not in chart_vars:
                    raise DslError(f"{ref[1]} not in {chart_name}", "name",
                                   ref[2], ref[3])
            else:
                nm = ref[1]
                if nm in chart_vars:
                    continue
                if nm.startswith("d") and nm[1:] in chart_vars:
                    continue
                raise DslError(f"{nm} not in {chart_name}", "name",
                               ref[2], ref[3])

    chart_vars: dict = {}
    for st in script.statements:
        if isinstance(st, ChartStmt):
            define(st.name, "chart", st.line)
            chart_vars[st.name] = {v for v, _ in st.entries}
        elif isinstance(st, DeclStmt):
            need(st.chart, ("chart",), st.line)
            check_expr(st.expr, chart_vars[st.chart], st.chart)
            define(st.name, "tensor", st.line)
        elif isinstance(st, DistStmt):
            need(st.chart, ("chart",), st.line)
            for e in st.exprs:
                check_expr(e, chart_vars[st.chart], st.chart)
            define(st.name, "dist", st.line)
        elif isinstance(st, ConnStmt):
            need(st.chart, ("chart",), st.line)
            vars_ = chart_vars[st.chart]
            for up, lo1, lo2, e in st.entries:
                for v in (up, lo1, lo2):
                    if v not in vars_:
                        raise DslError(f"{v} not in {st.chart}", "name", st.line)
                check_expr(e, vars_, st.chart)
            define(st.name, "connection", st.line)
        else:
            a = st.args
            op = st.op
            if op == "lift":
                need(a["name"], ("tensor", "dist"), st.line)
            elif op == "prolong":
                need(a["name"], ("chart",), st.line)
            elif op == "lift-connection":
                need(a["name"], ("connection",), st.line)
            elif op == "bracket":
                need(a["a"], ("tensor",), st.line)
                need(a["b"], ("tensor",), st.line)
            elif op == "d":
                need(a["name"], ("tensor",), st.line)
            elif op == "liederiv":
                need(a["x"], ("tensor",), st.line)
                need(a["k"], ("tensor",), st.line)
            elif op == "covd":
                need(a["conn"], ("connection",), st.line)
                need(a["x"], ("tensor",), st.line)
                need(a["y"], ("tensor",), st.line)
            elif op in ("degree", "eval"):
                need(a["name"], ("tensor",), st.line)
            elif op == "check":
                want = ("dist",) if a["kind"] in ("involutive",
                                                  "weighted-distribution") else ("tensor",)
                need(a["a"], want, st.line)
                if "b" in a:
                    need(a["b"], ("tensor",), st.line)
            elif op == "oracle":
                if a["sub"] == "lift":
                    need(a["name"], ("tensor",), st.line)
                elif a["sub"] == "concomitant":
                    for nm in a["names"]:
                        need(nm, ("tensor",), st.line)
                else:
                    need(a["a"], ("tensor",), st.line)
                    need(a["b"], ("tensor",), st.line)
            elif op == "print":
                need(a["name"], ("chart", "tensor", "dist", "connection"),
                     st.line)
            alias = a.get("as")
            if alias:
                new_kind = {"lift": None, "prolong": "chart",
                            "lift-connection": "connection"}.get(op, "tensor")
                if new_kind is None:
                    new_kind = kinds[a["name"]]
                define(alias, new_kind, st.line)


def parse(text: str) -> Script:
    """Parse script text, or raise DslError with a line/column diagnostic."""
    statements = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _lex_line(raw, line_no)
        if not tokens:
            continue
        src = raw.split("#", 1)[0].strip()
        statements.append(_parse_statement(tokens, line_no, src))
    script = Script(tuple(statements))
    _resolve(script)
    return script


# -- execution -----------------------------------------------------------------

@dataclass
class OutputRecord:
    stmt: str
    kind: str
    ok: bool
    payload: dict = field(default_factory=dict)
    text: list = field(default_factory=list)
    ms: float = 0.0
    is_check: bool = False

    def to_json(self) -> dict:
        out = {"stmt": self.stmt, "kind": self.kind, "ok": self.ok}
        out.update(self.payload)
        return out


def _deg_json(d):
    if d is ANY_DEGREE:
        return "any"
    return d


class _Env:
    """Execution state: named charts, tensors, distributions, connections."""

    def __init__(self, seed: int, samples: int):
        self.seed = seed
        self.samples = samples
        self.charts: dict = {}
        self.tensors: dict = {}
        self.dists: dict = {}
        self.conns: dict = {}       # name -> (LinearConnection, base Chart)
        self._contexts: dict = {}

    def context(self, chart: Chart, r: int) -> LiftContext:
        key = (id(chart), r)
        ctx = self._contexts.get(key)
        if ctx is None:
            ctx = LiftContext(chart, r)
            self._contexts[key] = ctx
        return ctx

    def bind(self, name: str | None, kind: str, value) -> None:
        if not name:
            return
        store = {"tensor": self.tensors, "chart": self.charts,
                 "dist": self.dists, "connection": self.conns}[kind]
        store[name] = value


def _eval_expr(node: tuple, chart: Chart) -> TensorField:
    op = node[0]
    if op == "num":
        return scalar_field(chart, node[1])
    if op == "var":
        nm = node[1]
        if nm in chart.names:
            return scalar_field(chart, Poly.variable(chart, chart.index(nm)))
        return coordinate_one_form(chart, nm[1:])
    if op == "dvf":
        return coordinate_vector_field(chart, node[1])
    if op == "add":
        return _eval_expr(node[1], chart) + _eval_expr(node[2], chart)
    if op == "sub":
        return _eval_expr(node[1], chart) - _eval_expr(node[2], chart)
    if op == "neg":
        return -_eval_expr(node[1], chart)
    if op == "mul":
        a = _eval_expr(node[1], chart)
        b = _eval_expr(node[2], chart)
        if a.q == a.p == 0:
            return b * a.scalar_part()
        if b.q == b.p == 0:
            return a * b.scalar_part()
        raise GradcalcError("* multiplies by scalars; use ox or ^^ for tensors")
    if op == "ox":
        return tensor_product(_eval_expr(node[1], chart),
                              _eval_expr(node[2], chart))
    if op == "wedge":
        return wedge(_eval_expr(node[1], chart), _eval_expr(node[2], chart))
    if op == "pow":
        a = _eval_expr(node[1], chart)
        if a.q or a.p:
            raise GradcalcError("^ takes scalar bases; tensor powers are not defined")
        return scalar_field(chart, a.scalar_part() ** node[2])
    raise GradcalcError(f"unknown expression node {op!r}")


def _tensor_record(st, env: _Env, t: TensorField, alias: str | None) -> OutputRecord:
    env.bind(alias, "tensor", t)
    text = render_tensor(t)
    return OutputRecord(st.src, st.op if isinstance(st, CmdStmt) else "decl",
                        True,
                        {"result": tensor_to_json(t)},
                        [text])


def _run_decl(st: DeclStmt, env: _Env) -> OutputRecord:
    chart = env.charts[st.chart]
    t = _eval_expr(st.expr, chart)
    if st.kind == "fn":
        want = (0, 0)
    elif st.kind == "vf":
        want = (1, 0)
    elif st.kind == "form":
        if t.q != 0 or t.p < 1:
            raise GradcalcError(f"form {st.name} has valence ({t.q},{t.p})")
        want = (0, t.p)
    else:
        want = (st.q, st.p)
    if (t.q, t.p) != want:
        if t.is_zero():
            # a zero scalar stands for the zero tensor of any valence
            t = TensorField.from_components(chart, want[0], want[1], {})
        else:
            raise GradcalcError(
                f"{st.name} evaluates to valence ({t.q},{t.p}), declared {want}")
    if st.kind == "form" and t.p >= 2 and t.cov_sym != "antisym":
        t = tagged(t, cov_sym="antisym")
    if st.kind == "tensor" and st.tag != "none":
        cs = st.tag if t.q >= 2 else "none"
        ps = st.tag if t.p >= 2 else "none"
        if (t.contra_sym, t.cov_sym) != (cs, ps):
            t = tagged(t, contra_sym=cs, cov_sym=ps)
    env.bind(st.name, "tensor", t)
    return OutputRecord(st.src, "decl", True,
                        {"name": st.name, "result": tensor_to_json(t)},
                        [f"{st.name} = {render_tensor(t)}"])


def _run_chart(st: ChartStmt, env: _Env) -> OutputRecord:
    names = [v for v, _ in st.entries]
    weights = [w for _, w in st.entries]
    d = len(weights[0])
    if any(len(w) != d for w in weights):
        raise GradcalcError("inconsistent weight vector lengths")
    chart = make_chart(names, weights, label=st.name)
    env.bind(st.name, "chart", chart)
    return OutputRecord(st.src, "chart", True,
                        {"name": st.name, "result": chart_to_json(chart)},
                        [f"chart {st.name}: " + ", ".join(
                            f"{n}:{list(w) if d > 1 else w[0]}"
                            for n, w in st.entries)])


def _run_dist(st: DistStmt, env: _Env) -> OutputRecord:
    chart = env.charts[st.chart]
    gens = tuple(_eval_expr(e, chart) for e in st.exprs)
    d = Distribution(chart, gens)
    env.bind(st.name, "dist", d)
    return OutputRecord(st.src, "dist", True,
                        {"name": st.name,
                         "generators": [tensor_to_json(g) for g in gens]},
                        [f"{st.name} = span of {len(gens)} fields"])


def _run_conn(st: ConnStmt, env: _Env) -> OutputRecord:
    chart = env.charts[st.chart]
    gamma = {}
    for up, lo1, lo2, e in st.entries:
        v = _eval_expr(e, chart)
        if v.q or v.p:
            raise GradcalcError("Christoffel symbols must be scalar")
        key = (chart.index(lo1), chart.index(up), chart.index(lo2))
        prev = gamma.get(key)
        sym = v.scalar_part()
        gamma[key] = sym if prev is None else prev + sym
    conn = tangent_connection(chart, gamma)
    env.bind(st.name, "connection", (conn, chart))
    return OutputRecord(st.src, "connection", True,
                        {"name": st.name, "symbols": len(conn.gamma)},
                        [f"{st.name}: connection with {len(st.entries)} symbols"])


def _lookup_tensor(env: _Env, name: str) -> TensorField:
    t = env.tensors.get(name)
    if t is None:
        raise GradcalcError(f"{name!r} is not a tensor")
    return t


def _run_cmd(st: CmdStmt, env: _Env) -> OutputRecord:
    op = st.op
    a = st.args

    if op == "lift":
        if a["name"] in env.dists:
            if a["lambda"] is not None:
                raise GradcalcError("distributions lift wholesale: drop lambda=")
            d = env.dists[a["name"]]
            ctx = env.context(d.chart, a["r"])
            lifted = lift_distribution(d, ctx)
            env.bind(a.get("as"), "dist", lifted)
            return OutputRecord(st.src, "lift", True,
                                {"generators": [tensor_to_json(g)
                                                for g in lifted.generators]},
                                [f"lifted distribution with {len(lifted.generators)} generators"])
        t = _lookup_tensor(env, a["name"])
        if a["lambda"] is None:
            raise GradcalcError("tensor lifts need lambda=")
        ctx = env.context(t.chart, a["r"])
        out = lift_tensor(t, a["lambda"], ctx)
        return _tensor_record(st, env, out, a.get("as"))

    if op == "prolong":
        chart = env.charts[a["name"]]
        ctx = env.context(chart, a["r"])
        env.bind(a.get("as"), "chart", ctx.total)
        return OutputRecord(st.src, "prolong", True,
                            {"result": chart_to_json(ctx.total)},
                            [f"prolonged chart with {ctx.total.dim} variables"])

    if op == "lift-connection":
        conn, base = env.conns[a["name"]]
        ctx = env.context(conn.chart, a["r"])
        lifted = lift_linear_connection(conn, ctx)
        env.bind(a.get("as"), "connection", (lifted, base))
        return OutputRecord(st.src, "lift-connection", True,
                            {"symbols": len(lifted.gamma)},
                            [f"lifted connection with {len(lifted.gamma)} symbols"])

    if op == "bracket":
        x = _lookup_tensor(env, a["a"])
        y = _lookup_tensor(env, a["b"])
        fn = {"lie": lie_bracket, "schouten": schouten_bracket,
              "fn": fn_bracket, "nr": nr_bracket}[a["kind"]]
        return _tensor_record(st, env, fn(x, y), a.get("as"))

    if op == "d":
        t = _lookup_tensor(env, a["name"])
        return _tensor_record(st, env, exterior_derivative(t), a.get("as"))

    if op == "liederiv":
        x = _lookup_tensor(env, a["x"])
        k = _lookup_tensor(env, a["k"])
        return _tensor_record(st, env, lie_derivative(x, k), a.get("as"))

    if op == "covd":
        conn, _ = env.conns[a["conn"]]
        x = _lookup_tensor(env, a["x"])
        y = _lookup_tensor(env, a["y"])
        return _tensor_record(st, env, covariant_derivative(conn, x, y),
                              a.get("as"))

    if op == "degree":
        t = _lookup_tensor(env, a["name"])
        d = degree_of_tensor(t, a["component"])
        if d is ANY_DEGREE:
            text = "degree = any (zero tensor)"
        elif d is None:
            text = "not homogeneous"
        else:
            text = f"degree = {d}"
        return OutputRecord(st.src, "degree", True, {"degree": _deg_json(d)},
                            [text])

    if op == "eval":
        t = _lookup_tensor(env, a["name"])
        from .oracle import evaluate_tensor_at
        point = dict(a["point"])
        values = evaluate_tensor_at(t, point)
        names = t.chart.names
        rows = []
        lines = []
        for (up, down) in sorted(values):
            v = values[(up, down)]
            rows.append({"up": [names[i] for i in up],
                         "down": [names[j] for j in down],
                         "value": str(v)})
            where = ",".join(names[i] for i in up) + ";" + \
                ",".join(names[j] for j in down)
            lines.append(f"({where}) = {v}" if (up or down) else str(v))
        if not rows:
            lines = ["0"]
        return OutputRecord(st.src, "eval", True, {"values": rows}, lines)

    if op == "check":
        kind = a["kind"]
        comp = a["component"]
        if kind in ("involutive", "weighted-distribution"):
            d = env.dists.get(a["a"])
            if d is None:
                raise GradcalcError(f"{a['a']!r} is not a distribution")
            if kind == "involutive":
                rep = is_involutive(d, seed=env.seed, samples=env.samples)
            else:
                rep = is_weighted_distribution(d, component=comp,
                                               seed=env.seed,
                                               samples=env.samples)
        else:
            t = _lookup_tensor(env, a["a"])
            if kind == "poisson":
                rep = is_poisson(t)
            elif kind == "weighted":
                rep = is_weighted_tensor(t, a["k"], component=comp)
            elif kind == "nijenhuis":
                rep = is_nijenhuis(t)
            elif kind == "weighted-poisson":
                rep = is_weighted_poisson(t, a["k"], component=comp)
            elif kind == "weighted-nijenhuis":
                rep = is_weighted_nijenhuis(t, component=comp)
            elif kind == "almost-complex":
                rep = is_almost_complex(t)
            elif kind == "almost-product":
                rep = is_almost_product(t)
            elif kind == "almost-tangent":
                rep = is_almost_tangent(t)
            elif kind == "pn":
                n = _lookup_tensor(env, a["b"])
                rep = is_weighted_pn(t, n, a["k"], component=comp)
            elif kind == "contact":
                rep = is_weighted_contact(t, a["k"], a["n"], component=comp)
            else:
                raise GradcalcError(f"unhandled check {kind!r}")
        line = f"check {kind}: " + ("PASS" if rep.verdict else
                                    f"FAIL ({rep.witness})")
        return OutputRecord(st.src, "check", bool(rep.verdict),
                            {"check": rep.to_json()}, [line], is_check=True)

    if op == "oracle":
        sub = a["sub"]
        if sub == "lift":
            t = _lookup_tensor(env, a["name"])
            if t.q or t.p:
                raise GradcalcError("oracle lift takes a function")
            f = t.scalar_part()
            ctx = env.context(t.chart, a["r"])
            main = lift_function(f, a["lambda"], ctx)
            other = taylor_lift_oracle(f, a["lambda"], ctx)
            agree = main == other
            line = "oracle lift: " + ("agree" if agree else "DISAGREE")
            return OutputRecord(st.src, "oracle", agree,
                                {"oracle": "taylor-lift", "agree": agree,
                                 "result": {"text": render_poly(main)}},
                                [line, render_poly(main)], is_check=True)
        if sub == "concomitant":
            lam, n, alpha, beta = (_lookup_tensor(env, nm) for nm in a["names"])
            direct = insert_form(tensor_product(alpha, beta),
                                 concomitant(lam, n))
            other = koszul_concomitant_oracle(lam, n, alpha, beta)
            agree = direct == other
            line = "oracle concomitant: " + ("agree" if agree else "DISAGREE")
            return OutputRecord(st.src, "oracle", agree,
                                {"oracle": "koszul-concomitant", "agree": agree,
                                 "result": tensor_to_json(direct)},
                                [line, render_tensor(direct)], is_check=True)
        x = _lookup_tensor(env, a["a"])
        y = _lookup_tensor(env, a["b"])
        plan = SamplePlan(seed=env.seed, count=env.samples)
        rep = identity_spot_check(x, y, plan)
        line = "oracle spotcheck: " + ("agree" if rep.verdict else
                                       f"DISAGREE ({rep.witness})")
        return OutputRecord(st.src, "oracle", bool(rep.verdict),
                            {"oracle": "spot-check", "check": rep.to_json()},
                            [line], is_check=True)

    if op == "print":
        name = a["name"]
        if name in env.charts:
            chart = env.charts[name]
            return OutputRecord(st.src, "print", True,
                                {"result": chart_to_json(chart)},
                                [repr(chart)])
        if name in env.dists:
            d = env.dists[name]
            return OutputRecord(st.src, "print", True,
                                {"generators": [tensor_to_json(g)
                                                for g in d.generators]},
                                [render_tensor(g) for g in d.generators])
        if name in env.conns:
            conn, _ = env.conns[name]
            names = conn.chart.names
            lines = [f"G {names[ai]} {names[k]} {names[b]} = {render_poly(g)}"
                     for (k, ai, b), g in sorted(conn.gamma.items())]
            return OutputRecord(st.src, "print", True,
                                {"symbols": len(conn.gamma)},
                                lines or ["flat connection"])
        t = _lookup_tensor(env, name)
        return OutputRecord(st.src, "print", True,
                            {"result": tensor_to_json(t)}, [render_tensor(t)])

    raise GradcalcError(f"unhandled command {op!r}")


def execute(script: Script, seed: int = 0, samples: int = 8):
    """Run a parsed script.

    Returns (records, exit_code): 0 clean, 1 some check failed, 3 a
    semantic error stopped execution (the error is the last record).
    """
    env = _Env(seed, samples)
    records = []
    any_check_failed = False
    for st in script.statements:
        t0 = time.perf_counter()
        try:
            if isinstance(st, ChartStmt):
                rec = _run_chart(st, env)
            elif isinstance(st, DeclStmt):
                rec = _run_decl(st, env)
            elif isinstance(st, DistStmt):
                rec = _run_dist(st, env)
            elif isinstance(st, ConnStmt):
                rec = _run_conn(st, env)
            else:
                rec = _run_cmd(st, env)
        except GradcalcError as e:
            msg = e.args[0] if e.args else str(e)
            rec = OutputRecord(st.src, "error", False,
                               {"error": {"kind": "semantic", "line": st.line,
                                          "message": msg}},
                               [f"semantic error at line {st.line}: {msg}"])
            rec.ms = (time.perf_counter() - t0) * 1000.0
            records.append(rec)
            return records, 3
        rec.ms = (time.perf_counter() - t0) * 1000.0
        records.append(rec)
        if rec.is_check and not rec.ok:
            any_check_failed = True
    return records, 1 if any_check_failed else 0


def records_to_json(records: list) -> dict:
    return {"gradcalc_version": __version__, "schema": SCHEMA,
            "records": [r.to_json() for r in records]}


def run_text(text: str, seed: int = 0, samples: int = 8):
    """Parse and execute; parse errors surface as DslError."""
    return execute(parse(text), seed=seed, samples=samples)
