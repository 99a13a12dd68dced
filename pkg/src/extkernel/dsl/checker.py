"""Static type checking: variance discipline, arities and name binding."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import FORM, MAX_DIM, VECTOR, flip
from . import nodes as N
from .errors import CheckError

SCALAR = "scalar"
MULTIVECTOR = "multivector"
MULTIFORM = "multiform"
OPERATOR = "operator"
EXT_OP = "extended-operator"
GEN_OP = "generalized-operator"
EXTENSOR = "extensor"
GRADESET = "gradeset"

BUILTINS = {"sp", "lc", "rc", "grade", "gset", "rev", "ginv", "adj", "inv", "ext", "gen"}


@dataclass(frozen=True)
class Type:
    kind: str
    variance: str | None = None
    slots: tuple = ()  # slot variances of an extensor, multivector slots first

    def __str__(self) -> str:
        if self.kind == EXTENSOR:
            return f"{self.variance}-valued extensor"
        if self.kind in (OPERATOR, EXT_OP, GEN_OP):
            return f"{self.kind} on {self.variance}s"
        return self.kind


T_SCALAR = Type(SCALAR)
T_GRADES = Type(GRADESET)


def elem(variance: str) -> Type:
    return Type(MULTIVECTOR if variance == VECTOR else MULTIFORM, variance)


def _is_elem(t: Type) -> bool:
    return t.kind in (MULTIVECTOR, MULTIFORM)


def _numeric(t: Type) -> bool:
    return t.kind in (SCALAR, MULTIVECTOR, MULTIFORM)


def _a(t) -> str:
    s = str(t)
    return ("an " if s[:1] in "aeiou" else "a ") + s


class Checker:
    def __init__(self, n: int):
        self.n = n
        self.env: dict[str, Type] = {}

    def err(self, node: N.Node, message: str):
        raise CheckError(message, node.line, node.col)

    # statements -------------------------------------------------------

    def statement(self, st: N.Node) -> None:
        if isinstance(st, N.Dim):
            return
        if isinstance(st, N.Let):
            if st.name in BUILTINS or st.name in ("extensor", "vec", "form"):
                self.err(st, f"cannot rebind built-in name {st.name!r}")
            self.env[st.name] = self.expr(st.expr)
        elif isinstance(st, N.Print):
            self.expr(st.expr)
        elif isinstance(st, N.Assert):
            lt, rt = self.expr(st.left), self.expr(st.right)
            if not self._comparable(lt, rt):
                self.err(st, f"cannot compare {lt} with {rt}")
        else:
            self.err(st, "unknown statement")

    @staticmethod
    def _comparable(a: Type, b: Type) -> bool:
        if _numeric(a) and _numeric(b):
            return a.kind == SCALAR or b.kind == SCALAR or a.kind == b.kind
        return a == b

    # expressions ------------------------------------------------------

    def expr(self, e: N.Node) -> Type:
        method = getattr(self, "_" + type(e).__name__.lower())
        return method(e)

    def _number(self, e: N.Number) -> Type:
        return T_SCALAR

    def _blade(self, e: N.Blade) -> Type:
        if not 1 <= e.index <= self.n:
            self.err(e, f"basis index {e.index} out of range 1..{self.n}")
        return elem(VECTOR if e.prefix == "e" else FORM)

    def _name(self, e: N.Name) -> Type:
        if e.ident in BUILTINS:
            self.err(e, f"built-in {e.ident!r} must be called")
        if e.ident not in self.env:
            self.err(e, f"unknown identifier {e.ident!r}")
        return self.env[e.ident]

    def _grades(self, e: N.Grades) -> Type:
        for g in e.grades:
            if g > self.n:
                self.err(e, f"grade {g} exceeds dimension {self.n}")
        return T_GRADES

    def _matrix(self, e: N.Matrix) -> Type:
        if len(e.rows) != self.n or any(len(r) != self.n for r in e.rows):
            self.err(e, f"matrix literal must be {self.n}x{self.n}")
        for row in e.rows:
            for x in row:
                if self.expr(x) != T_SCALAR:
                    self.err(x, "matrix entries must be scalars")
        return Type(OPERATOR, VECTOR)

    def _unary(self, e: N.Unary) -> Type:
        t = self.expr(e.operand)
        if t.kind in (GRADESET, EXT_OP, GEN_OP):
            self.err(e, f"cannot negate {_a(t)}")
        return t

    def _binary(self, e: N.Binary) -> Type:
        lt, rt = self.expr(e.left), self.expr(e.right)
        if e.op in "+-":
            return self._additive(e, lt, rt)
        if e.op == "*":
            if lt == T_SCALAR and rt.kind not in (GRADESET, EXT_OP, GEN_OP):
                return rt
            if rt == T_SCALAR and lt.kind not in (GRADESET, EXT_OP, GEN_OP):
                return lt
            self.err(e, "'*' needs a scalar operand")
        # exterior product
        if lt.kind == EXTENSOR and rt.kind == EXTENSOR:
            if lt.variance != rt.variance:
                self.err(e, "exterior product of extensors needs outputs of the same variance")
            return self._concat(lt, rt, lt.variance)
        if _numeric(lt) and _numeric(rt):
            if _is_elem(lt) and _is_elem(rt) and lt.variance != rt.variance:
                self.err(e, "exterior product needs operands of the same variance")
            return lt if _is_elem(lt) else rt
        self.err(e, f"cannot take the exterior product of {lt} and {rt}")

    def _additive(self, e, lt: Type, rt: Type) -> Type:
        if _numeric(lt) and _numeric(rt):
            if _is_elem(lt) and _is_elem(rt) and lt.variance != rt.variance:
                self.err(e, "cannot add a multivector and a multiform")
            return lt if _is_elem(lt) else rt
        if lt.kind == OPERATOR and rt.kind == OPERATOR:
            if lt.variance != rt.variance:
                self.err(e, "cannot add operators of different variance")
            return lt
        if lt.kind == EXTENSOR and rt.kind == EXTENSOR:
            if lt != rt:
                self.err(e, "cannot add extensors of different shape")
            return lt
        self.err(e, f"cannot add {lt} and {rt}")

    @staticmethod
    def _concat(a: Type, b: Type, out: str) -> Type:
        vec = tuple(v for v in a.slots if v == VECTOR) + tuple(v for v in b.slots if v == VECTOR)
        frm = tuple(v for v in a.slots if v == FORM) + tuple(v for v in b.slots if v == FORM)
        return Type(EXTENSOR, out, vec + frm)

    def _extensorlit(self, e: N.ExtensorLit) -> Type:
        seen_form = False
        for s in e.slots:
            self._grades(s.grades)
            if s.variance == FORM:
                seen_form = True
            elif seen_form:
                self.err(s, "multivector slots must precede multiform slots")
        self._grades(e.output.grades)
        keys_seen = set()
        for rec in e.records:
            if len(rec.keys) != len(e.slots):
                self.err(rec, f"record has {len(rec.keys)} keys, expected {len(e.slots)}")
            for key, slot in zip(rec.keys, e.slots):
                if key.prefix is not None:
                    kv = VECTOR if key.prefix == "e" else FORM
                    if kv != slot.variance:
                        self.err(key, f"a {slot.variance} slot needs a {'e' if slot.variance == VECTOR else 'w'} blade key")
                    if key.indices[-1] > self.n:
                        self.err(key, f"basis index {key.indices[-1]} out of range 1..{self.n}")
                if len(key.indices) not in slot.grades.grades:
                    self.err(key, f"key grade {len(key.indices)} is not in the slot grade set")
            sig = tuple((k.prefix, k.indices) for k in rec.keys)
            if sig in keys_seen:
                self.err(rec, "duplicate record key")
            keys_seen.add(sig)
            vt = self.expr(rec.value)
            if vt != T_SCALAR and vt != elem(e.output.variance):
                self.err(rec.value, f"record value must be {_a(elem(e.output.variance))}, got {vt}")
        return Type(EXTENSOR, e.output.variance, tuple(s.variance for s in e.slots))

    def _call(self, e: N.Call) -> Type:
        if isinstance(e.func, N.Name) and e.func.ident in BUILTINS:
            return self._builtin(e, e.func.ident, [self.expr(a) for a in e.args])
        ft = self.expr(e.func)
        args = [self.expr(a) for a in e.args]
        if ft.kind in (EXT_OP, GEN_OP):
            self._arity(e, args, 1)
            (at,) = args
            if at == T_SCALAR:
                return T_SCALAR
            if _is_elem(at) or at.kind == EXTENSOR:
                if at.variance != ft.variance:
                    what = "extensor valued in " + at.variance + "s" if at.kind == EXTENSOR else at.kind
                    self.err(e, f"{ft.variance} operator applied to {what}")
                return at
            self.err(e, f"cannot apply an operator to {_a(at)}")
        if ft.kind == EXTENSOR:
            if len(args) != len(ft.slots):
                self.err(e, f"extensor takes {len(ft.slots)} arguments, got {len(args)}")
            for i, (at, v) in enumerate(zip(args, ft.slots)):
                if at != T_SCALAR and at != elem(v):
                    self.err(e.args[i], f"argument {i + 1} must be {_a(elem(v))}, got {at}")
            return elem(ft.variance)
        self.err(e, f"value of type {ft} is not callable")

    def _arity(self, e: N.Call, args: list, k: int) -> None:
        if len(args) != k:
            name = e.func.ident if isinstance(e.func, N.Name) else "call"
            self.err(e, f"{name} takes {k} argument{'s' if k != 1 else ''}, got {len(args)}")

    def _builtin(self, e: N.Call, name: str, args: list[Type]) -> Type:
        if name in ("sp", "lc", "rc"):
            self._arity(e, args, 2)
            return self._product(e, name, *args)
        if name == "grade":
            self._arity(e, args, 2)
            x, k = args
            if not _numeric(x) or k != T_SCALAR:
                self.err(e, "grade(x, k) needs an element and an integer")
            return x
        if name == "gset":
            self._arity(e, args, 2)
            x, g = args
            if not _numeric(x) or g != T_GRADES:
                self.err(e, "gset(x, {k1, ...}) needs an element and a grade set")
            return x
        if name in ("rev", "ginv"):
            self._arity(e, args, 1)
            if not _numeric(args[0]):
                self.err(e, f"{name} needs a multivector or multiform")
            return args[0]
        if name == "adj":
            self._arity(e, args, 1)
            (t,) = args
            if t.kind in (OPERATOR, EXT_OP, GEN_OP):
                return Type(t.kind, flip(t.variance))
            if t.kind == EXTENSOR:
                if len(t.slots) != 1:
                    self.err(e, "adj is defined only for one-variable extensors")
                return Type(EXTENSOR, flip(t.slots[0]), (flip(t.variance),))
            self.err(e, f"adj needs an operator or an extensor, got {t}")
        if name == "inv":
            self._arity(e, args, 1)
            if args[0].kind != OPERATOR:
                self.err(e, f"inv needs an operator, got {args[0]}")
            return args[0]
        if name in ("ext", "gen"):
            self._arity(e, args, 1)
            if args[0].kind != OPERATOR:
                self.err(e, f"{name} needs a matrix operator, got {args[0]}")
            return Type(EXT_OP if name == "ext" else GEN_OP, args[0].variance)
        self.err(e, f"unknown built-in {name!r}")

    def _product(self, e: N.Call, name: str, a: Type, b: Type) -> Type:
        if a.kind == EXTENSOR or b.kind == EXTENSOR:
            if a.kind != EXTENSOR or b.kind != EXTENSOR:
                self.err(e, f"{name} cannot mix extensors with other values")
            if a.variance == b.variance:
                self.err(e, "contraction requires opposite variance" if name != "sp" else
                         "scalar product requires opposite variance")
            if name == "sp":
                if a.variance != FORM:
                    self.err(e, "sp of extensors takes the multiform-valued extensor first")
                return self._concat(a, b, FORM)
            out = b.variance if name == "lc" else a.variance
            return self._concat(a, b, out)
        if not (_numeric(a) and _numeric(b)):
            self.err(e, f"{name} needs multivectors and multiforms, got {a} and {b}")
        if _is_elem(a) and _is_elem(b) and a.variance == b.variance:
            self.err(e, "scalar product requires opposite variance" if name == "sp"
                     else "contraction requires opposite variance")
        if name == "sp":
            return T_SCALAR
        if a == T_SCALAR and b == T_SCALAR:
            return T_SCALAR
        if name == "lc":
            # result has the variance of the contracted (right) operand
            return b if _is_elem(b) else elem(flip(a.variance))
        return a if _is_elem(a) else elem(flip(b.variance))


def check_dim(n: int, node: N.Node) -> None:
    if not 1 <= n <= MAX_DIM:
        raise CheckError(f"dimension must lie in 1..{MAX_DIM}, got {n}", node.line, node.col)


def typecheck(script: N.Script) -> None:
    """Check every statement, raising CheckError on the first violation."""
    dim = script.statements[0]
    check_dim(dim.n, dim)
    c = Checker(dim.n)
    for st in script.statements:
        c.statement(st)


def typecheck_expression(node: N.Node, n: int) -> Type:
    return Checker(n).expr(node)
