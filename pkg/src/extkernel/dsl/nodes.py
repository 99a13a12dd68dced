"""Syntax tree of the expression language. Every node keeps its source position."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Node:
    line: int = field(compare=False)
    col: int = field(compare=False)


@dataclass(frozen=True)
class Number(Node):
    value: float


@dataclass(frozen=True)
class Blade(Node):
    prefix: str  # "e" or "w"
    index: int  # one-based


@dataclass(frozen=True)
class Name(Node):
    ident: str


@dataclass(frozen=True)
class Unary(Node):
    op: str
    operand: Node


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    func: Node
    args: tuple


@dataclass(frozen=True)
class Matrix(Node):
    rows: tuple  # tuple of tuples of Node


@dataclass(frozen=True)
class Grades(Node):
    grades: tuple


@dataclass(frozen=True)
class SlotSpec(Node):
    variance: str
    grades: Grades


@dataclass(frozen=True)
class Record(Node):
    keys: tuple  # of KeyBlade, one per slot
    value: Node


@dataclass(frozen=True)
class KeyBlade(Node):
    prefix: str | None  # None for the scalar key "1"
    indices: tuple  # one-based, strictly increasing


@dataclass(frozen=True)
class ExtensorLit(Node):
    slots: tuple
    output: SlotSpec
    records: tuple


# statements


@dataclass(frozen=True)
class Dim(Node):
    n: int


@dataclass(frozen=True)
class Let(Node):
    name: str
    expr: Node


@dataclass(frozen=True)
class Print(Node):
    expr: Node


@dataclass(frozen=True)
class Assert(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Script:
    statements: tuple
