"""A small text language for tangle expressions.

Grammar (``#`` starts a line comment; files use the ``.pa`` extension)::

    program := (LET IDENT '=' expr NEWLINE)* expr
    expr    := term (('+'|'-') term)*
    term    := scalar comp | scalar | comp
    comp    := tens (';' tens)*
    tens    := atom (('*')? atom)*
    atom    := 'id(' INT ')' | 'cup' | 'cap' | 'over' | 'under' | 'S'
             | 'f(' INT ')' | 'e(' INT ',' INT ')'
             | 'P1'..'P6' | 'Q4'
             | 'tr(' expr ')' | 'ltr(' expr ')' | 'ptr(' expr ')' | 'lptr(' expr ')'
             | 'adj(' expr ')' | 'dual(' expr ')' | 'rot(' expr ')'
             | '(' expr ')' | IDENT
    scalar  := '-'? INT ('/' INT)? 'i'?

Vertical composition ``a ; b`` reads bottom to top (a applied first), so it
matches multiplication-by-stacking with the second factor on top.  ``*`` is
horizontal juxtaposition and may be omitted; a parenthesized closed factor
acts as a scalar.  Scalars bind more tightly than ``+``/``-`` and scale the
whole composite to their right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import engine
from .scalars import GaussianRational
from .tl import ArityError


class DslError(ValueError):
    def __init__(self, msg: str, pos: int = -1):
        super().__init__(f"{msg}" + (f" (at offset {pos})" if pos >= 0 else ""))
        self.pos = pos


class LexError(DslError):
    pass


class ParseError(DslError):
    pass


class TypecheckError(DslError):
    pass


# ---------------------------------------------------------------------------
# tokens

_SYMBOLS = "/+-*;(),="


@dataclass(frozen=True)
class Token:
    kind: str  # 'int' | 'ident' | symbol itself | 'newline' | 'eof'
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "\n":
            out.append(Token("newline", "\n", i))
            i += 1
            continue
        if c in " \t\r":
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("ident", text[i:j], i))
            i = j
            continue
        if c in _SYMBOLS:
            out.append(Token(c, c, i))
            i += 1
            continue
        raise LexError(f"unexpected character {c!r}", i)
    out.append(Token("eof", "", n))
    return out


# ---------------------------------------------------------------------------
# syntax trees


@dataclass(frozen=True)
class Node:
    kind: str
    children: Tuple["Node", ...] = ()
    payload: Tuple = ()


def _atom(kind: str, *payload) -> Node:
    return Node(kind, (), tuple(payload))


NAMED_ARITIES = {
    "P1": 1,
    "P2": 2,
    "P3": 3,
    "P4": 4,
    "P5": 5,
    "P6": 6,
    "Q4": 4,
}

_UNARY = {"tr", "ltr", "ptr", "lptr", "adj", "dual", "rot"}


class _Parser:
    def __init__(self, tokens: List[Token], line_mode: bool = False):
        self.toks = tokens
        self.i = 0
        self.line_mode = line_mode

    def peek(self) -> Token:
        # outside line mode, newlines are whitespace
        while not self.line_mode and self.toks[self.i].kind == "newline":
            self.i += 1
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.kind!r}", t.pos)
        return self.next()

    # -- grammar ----------------------------------------------------------

    def parse_expr(self) -> Node:
        terms = [(1, self.parse_term())]
        while self.peek().kind in "+-":
            sign = 1 if self.next().kind == "+" else -1
            terms.append((sign, self.parse_term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Node("sum", tuple(t for _, t in terms), tuple(s for s, _ in terms))

    def _try_scalar(self) -> Optional[Tuple]:
        save = self.i
        neg = False
        t = self.peek()
        if t.kind == "-":
            neg = True
            self.next()
            t = self.peek()
        if t.kind != "int":
            self.i = save
            return None
        num = int(self.next().text)
        den = 1
        if self.peek().kind == "/":
            self.next()
            den = int(self.expect("int").text)
        imag = False
        t = self.peek()
        if t.kind == "ident" and t.text == "i":
            imag = True
            self.next()
        return (neg, num, den, imag)

    def parse_term(self) -> Node:
        sc = self._try_scalar()
        if sc is not None:
            t = self.peek()
            if t.kind in ("ident", "("):
                return Node("scale", (self.parse_comp(),), sc)
            return Node("scale", (_atom("empty"),), sc)
        return self.parse_comp()

    def parse_comp(self) -> Node:
        parts = [self.parse_tens()]
        while self.peek().kind == ";":
            self.next()
            parts.append(self.parse_tens())
        return parts[0] if len(parts) == 1 else Node("compose", tuple(parts))

    def parse_tens(self) -> Node:
        parts = [self.parse_atom()]
        while True:
            t = self.peek()
            if t.kind == "*":
                self.next()
                parts.append(self.parse_atom())
            elif t.kind in ("ident", "("):
                # implicit juxtaposition
                parts.append(self.parse_atom())
            else:
                break
        return parts[0] if len(parts) == 1 else Node("tensor", tuple(parts))

    def parse_atom(self) -> Node:
        t = self.peek()
        if t.kind == "(":
            self.next()
            inner = self.parse_expr()
            self.expect(")")
            return Node("paren", (inner,))
        if t.kind != "ident":
            raise ParseError(f"expected an atom, found {t.kind!r}", t.pos)
        name = t.text
        self.next()
        if name == "id":
            self.expect("(")
            n = int(self.expect("int").text)
            self.expect(")")
            return _atom("id", n)
        if name == "f":
            self.expect("(")
            k = int(self.expect("int").text)
            self.expect(")")
            return _atom("f", k)
        if name == "e":
            self.expect("(")
            j = int(self.expect("int").text)
            self.expect(",")
            k = int(self.expect("int").text)
            self.expect(")")
            return _atom("e", j, k)
        if name in ("cup", "cap", "over", "under", "S"):
            return _atom(name)
        if name in NAMED_ARITIES:
            return _atom("named", name)
        if name in _UNARY:
            self.expect("(")
            inner = self.parse_expr()
            self.expect(")")
            return Node(name, (inner,))
        return _atom("ref", name)


def parse_expression(text: str) -> Node:
    toks = tokenize(text)
    p = _Parser(toks)
    node = p.parse_expr()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.pos)
    return node


@dataclass
class Program:
    bindings: List[Tuple[str, Node]]
    body: Node


def parse_program(text: str) -> Program:
    toks = tokenize(text)
    bindings: List[Tuple[str, Node]] = []
    i = 0
    # split on newlines at the top level for let-lines
    while True:
        while toks[i].kind == "newline":
            i += 1
        if toks[i].kind == "ident" and toks[i].text == "let":
            j = i + 1
            if toks[j].kind != "ident":
                raise ParseError("expected a name after 'let'", toks[j].pos)
            name = toks[j].text
            if name == "i" or name in NAMED_ARITIES or name in _UNARY:
                raise ParseError(f"{name!r} cannot be bound", toks[j].pos)
            j += 1
            if toks[j].kind != "=":
                raise ParseError("expected '=' in let binding", toks[j].pos)
            j += 1
            # consume the rest of the line
            line: List[Token] = []
            while toks[j].kind not in ("newline", "eof"):
                line.append(toks[j])
                j += 1
            line.append(Token("eof", "", toks[j].pos))
            sub = _Parser(line)
            node = sub.parse_expr()
            if sub.peek().kind != "eof":
                raise ParseError("trailing input in let binding", sub.peek().pos)
            bindings.append((name, node))
            i = j
        else:
            break
    body_toks = toks[i:]
    p = _Parser(body_toks)
    body = p.parse_expr()
    if p.peek().kind != "eof":
        raise ParseError(f"trailing input {p.peek().text!r}", p.peek().pos)
    return Program(bindings, body)


# ---------------------------------------------------------------------------
# rendering (inverse of the parser on its own output)


def render(node: Node) -> str:
    k = node.kind
    if k == "sum":
        bits = []
        for sign, child in zip(node.payload, node.children):
            txt = render(child)
            if not bits:
                bits.append(txt if sign > 0 else f"0 - {txt}")
            else:
                bits.append(("+ " if sign > 0 else "- ") + txt)
        return " ".join(bits)
    if k == "scale":
        neg, num, den, imag = node.payload
        txt = ("-" if neg else "") + str(num) + (f"/{den}" if den != 1 else "") + ("i" if imag else "")
        child = node.children[0]
        if child.kind == "empty":
            return txt
        return f"{txt} {render(child)}"
    if k == "compose":
        return " ; ".join(render(c) for c in node.children)
    if k == "tensor":
        return " * ".join(render(c) for c in node.children)
    if k == "paren":
        return f"({render(node.children[0])})"
    if k in _UNARY:
        return f"{k}({render(node.children[0])})"
    if k == "id":
        return f"id({node.payload[0]})"
    if k == "f":
        return f"f({node.payload[0]})"
    if k == "e":
        return f"e({node.payload[0]},{node.payload[1]})"
    if k in ("cup", "cap", "over", "under", "S"):
        return k
    if k == "named":
        return node.payload[0]
    if k == "ref":
        return node.payload[0]
    if k == "empty":
        return "id(0)"
    raise ValueError(f"cannot render node kind {k!r}")


# ---------------------------------------------------------------------------
# typechecking

Arity = Tuple[int, int]


@dataclass(frozen=True)
class TypedTerm:
    node: Node
    source: int
    target: int


def typecheck(node: Node, env: Optional[Dict[str, Arity]] = None) -> TypedTerm:
    env = env or {}

    def go(nd: Node) -> Arity:
        k = nd.kind
        if k == "sum":
            arities = [go(c) for c in nd.children]
            first = arities[0]
            for a in arities[1:]:
                if a != first:
                    raise TypecheckError(
                        f"sum of unequal arities ({first[0]}->{first[1]}) vs ({a[0]}->{a[1]})"
                    )
            return first
        if k == "scale":
            return go(nd.children[0])
        if k == "compose":
            cur = go(nd.children[0])
            for c in nd.children[1:]:
                nxt = go(c)
                if cur[1] != nxt[0]:
                    raise TypecheckError(
                        f"composition mismatch: top of ({cur[0]}->{cur[1]}) vs bottom of ({nxt[0]}->{nxt[1]})"
                    )
                cur = (cur[0], nxt[1])
            return cur
        if k == "tensor":
            m = n = 0
            for c in nd.children:
                a = go(c)
                m += a[0]
                n += a[1]
            return (m, n)
        if k == "paren":
            return go(nd.children[0])
        if k in ("tr", "ltr"):
            a = go(nd.children[0])
            if a[0] != a[1]:
                raise TypecheckError(f"trace needs equal arities, got ({a[0]}->{a[1]})")
            return (0, 0)
        if k in ("ptr", "lptr"):
            a = go(nd.children[0])
            if a[0] != a[1]:
                raise TypecheckError(f"partial trace needs equal arities, got ({a[0]}->{a[1]})")
            if a[0] < 1:
                raise TypecheckError("partial trace needs arity >= 1")
            return (a[0] - 1, a[1] - 1)
        if k in ("adj", "dual"):
            a = go(nd.children[0])
            return (a[1], a[0])
        if k == "rot":
            return go(nd.children[0])
        if k == "id":
            n = nd.payload[0]
            return (n, n)
        if k == "empty":
            return (0, 0)
        if k == "cup":
            return (0, 2)
        if k == "cap":
            return (2, 0)
        if k in ("over", "under"):
            return (2, 2)
        if k == "S":
            return (4, 4)
        if k == "f":
            kk = nd.payload[0]
            if kk < 0:
                raise TypecheckError("f(k) needs k >= 0")
            return (kk, kk)
        if k == "e":
            j, kk = nd.payload
            if not (1 <= j <= kk - 1):
                raise TypecheckError(f"e({j},{kk}): index out of range")
            return (kk, kk)
        if k == "named":
            a = NAMED_ARITIES[nd.payload[0]]
            return (a, a)
        if k == "ref":
            name = nd.payload[0]
            if name not in env:
                raise TypecheckError(f"unknown identifier {name!r}")
            return env[name]
        raise TypecheckError(f"unknown node kind {k!r}")

    m, n = go(node)
    return TypedTerm(node, m, n)


# ---------------------------------------------------------------------------
# elaboration


def _named_provider(name: str) -> engine.SElement:
    from . import projections

    return projections.build(name)


def elaborate(node: Node, env: Optional[Dict[str, engine.SElement]] = None) -> engine.SElement:
    env = env or {}
    typecheck(node, {k: (v.m, v.n) for k, v in env.items()})

    def go(nd: Node) -> engine.SElement:
        k = nd.kind
        if k == "sum":
            total = None
            for sign, c in zip(nd.payload, nd.children):
                el = go(c)
                if sign < 0:
                    el = el.scale(-1)
                total = el if total is None else total + el
            return total
        if k == "scale":
            neg, num, den, imag = nd.payload
            q = Fraction(num, den) * (-1 if neg else 1)
            c = GaussianRational(0, q) if imag else GaussianRational(q)
            return go(nd.children[0]).scale(c)
        if k == "compose":
            cur = go(nd.children[0])
            for c in nd.children[1:]:
                cur = engine.compose(cur, go(c))
            return cur
        if k == "tensor":
            cur = go(nd.children[0])
            for c in nd.children[1:]:
                cur = engine.tensor(cur, go(c))
            return cur
        if k == "paren":
            return go(nd.children[0])
        if k == "tr":
            return engine.trace_close(go(nd.children[0]))
        if k == "ltr":
            # same closure pairing; kept as a distinct surface form
            return engine.trace_close(go(nd.children[0]))
        if k == "ptr":
            return engine.partial_trace_right(go(nd.children[0]))
        if k == "lptr":
            return engine.partial_trace_left(go(nd.children[0]))
        if k == "adj":
            return engine.adjoint(go(nd.children[0]))
        if k == "dual":
            return engine.dual(go(nd.children[0]))
        if k == "rot":
            return engine.rotate_F(go(nd.children[0]))
        if k == "id":
            return engine.strand(nd.payload[0])
        if k == "empty":
            return engine.empty()
        if k == "cup":
            return engine.cup()
        if k == "cap":
            return engine.cap()
        if k in ("over", "under"):
            return engine.crossing(k)
        if k == "S":
            return engine.s_box()
        if k == "f":
            return engine.jw_box(nd.payload[0])
        if k == "e":
            return engine.e_element(nd.payload[0], nd.payload[1])
        if k == "named":
            return _named_provider(nd.payload[0])
        if k == "ref":
            return env[nd.payload[0]]
        raise TypecheckError(f"unknown node kind {k!r}")

    return go(node)


def run_program(text: str) -> engine.SElement:
    """Parse, typecheck and elaborate a full program (let bindings plus a
    final expression)."""
    prog = parse_program(text)
    env: Dict[str, engine.SElement] = {}
    for name, node in prog.bindings:
        env[name] = elaborate(node, env)
    return elaborate(prog.body, env)
