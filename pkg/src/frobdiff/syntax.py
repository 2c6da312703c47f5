"""Recursive-descent parser and printers for the surface expression language.

Grammar (ASCII only):

    formula := atom ('&' atom)*
    atom    := expr (('=' | '!=') expr)
    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := primary ('^' nat)?
    primary := nat | name | jet | 'd(' expr ')' | 'l0(' expr ')' | '(' expr ')'
    jet     := 'x' '\''* | 'x^(' nat ')'

The single differential indeterminate is spelled x; a session that binds
the name x (as a field or tower generator) shadows the bare jet, in which
case primed forms are rejected.  d and l0 act as keywords when directly
followed by an opening parenthesis.

Printing is delegated to the canonical __str__ of each value class; every
printer sorts terms by graded-lex order, so output is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base_field import RatFunc
from .diffpoly import DiffPoly, delta
from .errors import FrobdiffError, ParseError
from .frob_derivation import TowerElement
from .kpoly import KPoly
from .reduction import (
    Atom,
    Lambda0Formula,
    TAdd,
    TConst,
    TDeriv,
    TLambda0,
    TMul,
    TPow,
    TVar,
)


class EvalError(FrobdiffError):
    """Well-formed syntax that does not denote a value in this session."""


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_PUNCT = ("!=", "+", "-", "*", "/", "^", "(", ")", "'", "=", "&", ",", ";")


@dataclass(frozen=True)
class Token:
    kind: str  # NAT, NAME, or the punctuation itself
    text: str
    pos: int


def tokenize(text: str):
    out = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("NAT", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("NAME", text[i:j], i))
            i = j
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                out.append(Token(punct, punct, i))
                i += len(punct)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    out.append(Token("EOF", "", n))
    return out


# ---------------------------------------------------------------------------
# expression AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    pos: int = 0


@dataclass(frozen=True)
class Name:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Jet:
    order: int
    pos: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object
    pos: int = 0


@dataclass(frozen=True)
class PowOp:
    base: object
    exponent: int
    pos: int = 0


@dataclass(frozen=True)
class DApp:
    child: object
    pos: int = 0


@dataclass(frozen=True)
class L0App:
    child: object
    pos: int = 0


@dataclass(frozen=True)
class AtomAst:
    lhs: object
    rhs: object
    negated: bool
    pos: int = 0


@dataclass(frozen=True)
class FormulaAst:
    atoms: tuple
    pos: int = 0


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self, ahead=0) -> Token:
        j = min(self.i + ahead, len(self.tokens) - 1)
        return self.tokens[j]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def expect(self, kind) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def parse_expr(self):
        node = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.next()
            right = self.parse_term()
            node = BinOp(op.kind, node, right, op.pos)
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek().kind in ("*", "/"):
            op = self.next()
            right = self.parse_factor()
            node = BinOp(op.kind, node, right, op.pos)
        return node

    def parse_factor(self):
        node = self.parse_primary()
        if self.peek().kind == "^" and self.peek(1).kind == "NAT":
            self.next()
            exp = self.next()
            node = PowOp(node, int(exp.text), exp.pos)
        return node

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "NAT":
            self.next()
            return Num(int(tok.text), tok.pos)
        if tok.kind == "(":
            self.next()
            node = self.parse_expr()
            self.expect(")")
            return node
        if tok.kind == "NAME":
            self.next()
            if tok.text in ("d", "l0") and self.peek().kind == "(":
                self.next()
                child = self.parse_expr()
                self.expect(")")
                return DApp(child, tok.pos) if tok.text == "d" else L0App(child, tok.pos)
            if tok.text == "x":
                if self.peek().kind == "'":
                    order = 0
                    while self.peek().kind == "'":
                        self.next()
                        order += 1
                    return Jet(order, tok.pos)
                if self.peek().kind == "^" and self.peek(1).kind == "(":
                    self.next()
                    self.next()
                    nat = self.expect("NAT")
                    self.expect(")")
                    return Jet(int(nat.text), tok.pos)
                return Jet(0, tok.pos)
            return Name(tok.text, tok.pos)
        raise ParseError(f"expected an expression, found {tok.text or 'end of input'!r}", tok.pos)

    def parse_atom(self):
        lhs = self.parse_expr()
        tok = self.peek()
        if tok.kind not in ("=", "!="):
            raise ParseError("expected '=' or '!=' in a formula atom", tok.pos)
        self.next()
        rhs = self.parse_expr()
        return AtomAst(lhs, rhs, tok.kind == "!=", tok.pos)

    def parse_formula(self):
        atoms = [self.parse_atom()]
        while self.peek().kind == "&":
            self.next()
            atoms.append(self.parse_atom())
        return FormulaAst(tuple(atoms))

    def done(self):
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)


def parse_expr(text: str):
    parser = _Parser(tokenize(text))
    node = parser.parse_expr()
    parser.done()
    return node


def parse_formula(text: str):
    parser = _Parser(tokenize(text))
    node = parser.parse_formula()
    parser.done()
    return node


# ---------------------------------------------------------------------------
# AST -> values
# ---------------------------------------------------------------------------


def _resolve_name(name, session, pos):
    if session.tower is not None and name in session.tower.gens:
        return session.tower.gen(name)
    if name in session.spec.generators:
        return session.spec.gen(name)
    if name in session.bindings:
        return session.bindings[name]
    raise EvalError(f"unknown name {name!r}")


def _is_diffpoly_const(v):
    return isinstance(v, DiffPoly) and (not v.terms or set(v.terms) == {()})


def _binop(op, a, b, session):
    if op == "/":
        if isinstance(b, DiffPoly):
            if not _is_diffpoly_const(b):
                raise EvalError("division by a differential polynomial")
            b = b.terms.get((), session.spec.zero())
        if isinstance(a, DiffPoly) and isinstance(b, TowerElement):
            raise EvalError("tower elements cannot appear in differential polynomials")
        return a / b
    try:
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
    except TypeError:
        pass
    raise EvalError("tower elements cannot appear in differential polynomials")


def to_value(ast, session):
    """Evaluate an expression AST to a RatFunc, TowerElement or DiffPoly."""
    if isinstance(ast, Num):
        return session.spec.const(ast.value)
    if isinstance(ast, Name):
        return _resolve_name(ast.name, session, ast.pos)
    if isinstance(ast, Jet):
        shadowed = (
            (session.tower is not None and "x" in session.tower.gens)
            or "x" in session.spec.generators
            or "x" in session.bindings
        )
        if shadowed:
            if ast.order == 0:
                return _resolve_name("x", session, ast.pos)
            raise EvalError("the name x is bound in this session; jets are unavailable")
        return DiffPoly.jet(session.deriv, ast.order)
    if isinstance(ast, BinOp):
        return _binop(ast.op, to_value(ast.left, session), to_value(ast.right, session), session)
    if isinstance(ast, PowOp):
        return to_value(ast.base, session) ** ast.exponent
    if isinstance(ast, DApp):
        child = to_value(ast.child, session)
        if isinstance(child, DiffPoly):
            return delta(child)
        if isinstance(child, TowerElement):
            return session.tower.derive(child)
        return session.deriv.derive(child)
    if isinstance(ast, L0App):
        child = to_value(ast.child, session)
        if not isinstance(child, RatFunc):
            raise EvalError("l0 only applies to base-field elements")
        return child.lambda0()
    raise TypeError(f"unexpected AST node {ast!r}")


def to_term(ast, session):
    """Convert an expression AST to the symbolic term language of formulas."""
    if isinstance(ast, Num):
        return TConst(session.spec.const(ast.value))
    if isinstance(ast, Name):
        value = _resolve_name(ast.name, session, ast.pos)
        if not isinstance(value, RatFunc):
            raise EvalError("formula constants must be base-field elements")
        return TConst(value)
    if isinstance(ast, Jet):
        node = TVar()
        for _ in range(ast.order):
            node = TDeriv(node)
        return node
    if isinstance(ast, BinOp):
        left = to_term(ast.left, session)
        right = to_term(ast.right, session)
        if ast.op == "+":
            return TAdd(left, right)
        if ast.op == "*":
            return TMul(left, right)
        if ast.op == "-":
            minus = TConst(session.spec.const(-1))
            return TAdd(left, TMul(minus, right))
        if ast.op == "/":
            if not isinstance(right, TConst):
                raise EvalError("formula terms may only divide by constants")
            return TMul(left, TConst(right.value.inverse()))
    if isinstance(ast, PowOp):
        return TPow(to_term(ast.base, session), ast.exponent)
    if isinstance(ast, DApp):
        return TDeriv(to_term(ast.child, session))
    if isinstance(ast, L0App):
        return TLambda0(to_term(ast.child, session))
    raise TypeError(f"unexpected AST node {ast!r}")


def to_formula(ast: FormulaAst, session) -> Lambda0Formula:
    atoms = [Atom(to_term(a.lhs, session), to_term(a.rhs, session), a.negated)
             for a in ast.atoms]
    return Lambda0Formula(atoms)


def to_kpoly(ast, session, vars) -> KPoly:
    """Evaluate an AST over extra polynomial variables (annihilator input)."""
    spec = session.spec
    if isinstance(ast, Num):
        return KPoly.const(spec, vars, spec.const(ast.value))
    if isinstance(ast, Name):
        if ast.name in vars:
            return KPoly.var(spec, vars, ast.name)
        value = _resolve_name(ast.name, session, ast.pos)
        if not isinstance(value, RatFunc):
            raise EvalError("annihilator coefficients must be base-field elements")
        return KPoly.const(spec, vars, value)
    if isinstance(ast, BinOp):
        left = to_kpoly(ast.left, session, vars)
        right = to_kpoly(ast.right, session, vars)
        if ast.op == "+":
            return left + right
        if ast.op == "-":
            return left - right
        if ast.op == "*":
            return left * right
        if ast.op == "/":
            if not right.is_constant():
                raise EvalError("annihilators may only divide by constants")
            return left * (spec.one() / right.constant_value())
    if isinstance(ast, PowOp):
        return to_kpoly(ast.base, session, vars) ** ast.exponent
    raise EvalError("d and l0 are not allowed inside annihilator polynomials")


def collect_xy_vars(ast):
    """All X#/Y# names in an AST, as the canonical (t, s) index pair."""
    t = s = -1
    stack = [ast]
    while stack:
        node = stack.pop()
        if isinstance(node, Name):
            kind, idx = _xy_split(node.name)
            if kind == "X":
                t = max(t, idx)
            elif kind == "Y":
                s = max(s, idx)
        elif isinstance(node, BinOp):
            stack.extend((node.left, node.right))
        elif isinstance(node, PowOp):
            stack.append(node.base)
        elif isinstance(node, (DApp, L0App)):
            stack.append(node.child)
    return t, s


def _xy_split(name):
    if len(name) >= 2 and name[0] in "XY" and name[1:].isdigit():
        return name[0], int(name[1:])
    return None, -1


def format_value(value) -> str:
    """Canonical text for any value the evaluator can produce."""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)
