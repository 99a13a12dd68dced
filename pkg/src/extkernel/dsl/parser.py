"""Lexer and recursive-descent parser.

Precedence, loosest first: ``+ -``, ``*`` (also implicit after a number
literal, as in ``2 e1^e2``), ``^`` (left-associative), unary ``-``,
calls, atoms. Newlines end statements except inside brackets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import nodes as N
from .errors import ParseError

KEYWORDS = {"dim", "let", "print", "assert"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|=>|==|[-+*^()\[\]{},;=])
    """,
    re.VERBOSE,
)

_BLADE = re.compile(r"([ew])(\d+)$")
_OPEN, _CLOSE = "([{", ")]}"


@dataclass(frozen=True)
class Token:
    kind: str  # number, ident, blade, op, newline, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, line_start, depth = 1, 0, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        pos = m.end()
        if kind == "newline":
            if depth == 0:
                out.append(Token("newline", tok, line, col))
            line, line_start = line + 1, pos
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "ident" and _BLADE.match(tok):
            kind = "blade"
        if kind == "op":
            if tok in _OPEN:
                depth += 1
            elif tok in _CLOSE:
                depth = max(0, depth - 1)
        out.append(Token(kind, tok, line, col))
    out.append(Token("eof", "", line, len(text) - line_start + 1))
    return out


def _describe(tok: Token) -> str:
    if tok.kind == "eof":
        return "end of input"
    if tok.kind == "newline":
        return "end of line"
    return repr(tok.text)


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def at_word(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == word

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {_describe(self.tok)}")
        return self.advance()

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    # statements -------------------------------------------------------

    def script(self) -> N.Script:
        stmts = []
        seen_dim = False
        while True:
            while self.tok.kind == "newline":
                self.advance()
            if self.tok.kind == "eof":
                break
            st = self.statement()
            if isinstance(st, N.Dim):
                if seen_dim:
                    raise ParseError("duplicate 'dim' statement", st.line, st.col)
                if stmts:
                    raise ParseError("'dim' must be the first statement", st.line, st.col)
                seen_dim = True
            elif not seen_dim:
                raise ParseError("script must begin with 'dim N'", st.line, st.col)
            stmts.append(st)
            if self.tok.kind not in ("newline", "eof"):
                self.fail(f"expected end of line, found {_describe(self.tok)}")
        if not seen_dim:
            t = self.tok
            raise ParseError("script must begin with 'dim N'", t.line, t.col)
        return N.Script(tuple(stmts))

    def statement(self) -> N.Node:
        t = self.tok
        if t.kind != "ident" or t.text not in KEYWORDS:
            self.fail(f"expected a statement (dim, let, print, assert), found {_describe(t)}")
        self.advance()
        if t.text == "dim":
            num = self.tok
            if num.kind != "number" or not re.fullmatch(r"\d+", num.text):
                self.fail(f"expected an integer dimension, found {_describe(num)}")
            self.advance()
            return N.Dim(t.line, t.col, int(num.text))
        if t.text == "let":
            name = self.tok
            if name.kind != "ident":
                self.fail(f"expected a name, found {_describe(name)}")
            if name.text in KEYWORDS:
                self.fail(f"{name.text!r} is a reserved word")
            self.advance()
            self.expect("=")
            return N.Let(t.line, t.col, name.text, self.expr())
        if t.text == "print":
            return N.Print(t.line, t.col, self.expr())
        left = self.expr()
        self.expect("==")
        return N.Assert(t.line, t.col, left, self.expr())

    # expressions ------------------------------------------------------

    def expr(self) -> N.Node:
        left = self.mult()
        while self.at("+") or self.at("-"):
            op = self.advance()
            left = N.Binary(op.line, op.col, op.text, left, self.mult())
        return left

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("ident", "blade") or (t.kind == "op" and t.text == "(")

    @staticmethod
    def _is_literal_number(node: N.Node) -> bool:
        if isinstance(node, N.Unary) and node.op == "-":
            node = node.operand
        return isinstance(node, N.Number)

    def mult(self) -> N.Node:
        left = self.wedge()
        while True:
            if self.at("*"):
                op = self.advance()
                left = N.Binary(op.line, op.col, "*", left, self.wedge())
            elif self._is_literal_number(left) and self._starts_atom():
                t = self.tok
                left = N.Binary(t.line, t.col, "*", left, self.wedge())
            else:
                return left

    def wedge(self) -> N.Node:
        left = self.unary()
        while self.at("^"):
            op = self.advance()
            left = N.Binary(op.line, op.col, "^", left, self.unary())
        return left

    def unary(self) -> N.Node:
        if self.at("-"):
            op = self.advance()
            return N.Unary(op.line, op.col, "-", self.unary())
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.postfix()

    def postfix(self) -> N.Node:
        node = self.primary()
        while self.at("("):
            self.advance()
            args = []
            if not self.at(")"):
                args.append(self.expr())
                while self.at(","):
                    self.advance()
                    args.append(self.expr())
            self.expect(")")
            node = N.Call(node.line, node.col, node, tuple(args))
        return node

    def primary(self) -> N.Node:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return N.Number(t.line, t.col, float(t.text))
        if t.kind == "blade":
            self.advance()
            m = _BLADE.match(t.text)
            return N.Blade(t.line, t.col, m.group(1), int(m.group(2)))
        if t.kind == "ident":
            if t.text in KEYWORDS:
                self.fail(f"{t.text!r} is a reserved word")
            if t.text == "extensor" and self.peek().kind == "op" and self.peek().text == "(":
                return self.extensor()
            self.advance()
            return N.Name(t.line, t.col, t.text)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if self.at("["):
            return self.matrix()
        if self.at("{"):
            return self.grades()
        self.fail(f"expected an expression, found {_describe(t)}")

    def matrix(self) -> N.Matrix:
        start = self.expect("[")
        rows = []
        while True:
            self.expect("[")
            row = [self.expr()]
            while self.at(","):
                self.advance()
                row.append(self.expr())
            self.expect("]")
            rows.append(tuple(row))
            if not self.at(","):
                break
            self.advance()
        self.expect("]")
        return N.Matrix(start.line, start.col, tuple(rows))

    def grades(self) -> N.Grades:
        start = self.expect("{")
        out = []
        while not self.at("}"):
            t = self.tok
            if t.kind != "number" or not re.fullmatch(r"\d+", t.text):
                self.fail(f"expected a grade, found {_describe(t)}")
            self.advance()
            out.append(int(t.text))
            if not self.at(","):
                break
            self.advance()
        self.expect("}")
        if not out:
            raise ParseError("a grade set must be nonempty", start.line, start.col)
        return N.Grades(start.line, start.col, tuple(out))

    def slot(self) -> N.SlotSpec:
        t = self.tok
        if t.kind != "ident" or t.text not in ("vec", "form"):
            self.fail(f"expected 'vec{{..}}' or 'form{{..}}', found {_describe(t)}")
        self.advance()
        return N.SlotSpec(t.line, t.col, "vector" if t.text == "vec" else "form", self.grades())

    def key(self) -> N.KeyBlade:
        t = self.tok
        if t.kind == "number" and t.text == "1":
            self.advance()
            return N.KeyBlade(t.line, t.col, None, ())
        if t.kind != "blade":
            self.fail(f"expected a basis blade key, found {_describe(t)}")
        prefix = t.text[0]
        idx = []
        while True:
            b = self.tok
            if b.kind != "blade":
                self.fail(f"expected a basis blade, found {_describe(b)}")
            self.advance()
            m = _BLADE.match(b.text)
            if m.group(1) != prefix:
                raise ParseError("a blade key cannot mix 'e' and 'w' factors", b.line, b.col)
            k = int(m.group(2))
            if idx and k <= idx[-1]:
                raise ParseError("blade key factors must be strictly increasing", b.line, b.col)
            idx.append(k)
            if not self.at("^"):
                break
            self.advance()
        return N.KeyBlade(t.line, t.col, prefix, tuple(idx))

    def extensor(self) -> N.ExtensorLit:
        start = self.advance()
        self.expect("(")
        slots = []
        if not self.at("->"):
            slots.append(self.slot())
            while self.at(","):
                self.advance()
                slots.append(self.slot())
        self.expect("->")
        output = self.slot()
        records = []
        while self.at(";"):
            self.advance()
            t = self.tok
            keys = []
            if not self.at("=>"):
                keys.append(self.key())
                while self.at(","):
                    self.advance()
                    keys.append(self.key())
            self.expect("=>")
            records.append(N.Record(t.line, t.col, tuple(keys), self.expr()))
        self.expect(")")
        return N.ExtensorLit(start.line, start.col, tuple(slots), output, tuple(records))


def parse_script(text: str) -> N.Script:
    return Parser(text).script()


def parse_expression(text: str) -> N.Node:
    p = Parser(text)
    while p.tok.kind == "newline":
        p.advance()
    node = p.expr()
    while p.tok.kind == "newline":
        p.advance()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {_describe(p.tok)}")
    return node
