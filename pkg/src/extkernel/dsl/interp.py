"""Evaluation of checked scripts, plus text and JSON rendering of values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..algebra import (
    FORM,
    VECTOR,
    AlgebraContext,
    AlgebraError,
    GradeSet,
    Graded,
    _is_number,
    blade_indices,
    element_class,
    format_coeff,
    grade_involution,
    grade_part,
    gradeset_part,
    render,
    reversion,
    wedge,
)
from ..duality import (
    left_contract,
    left_contract_form,
    right_contract,
    right_contract_vec,
    scalar_product,
)
from ..extensors import (
    Extensor,
    ExtensorSignature,
    act_extended,
    act_generalized,
    ext_adjoint,
    ext_left_contract,
    ext_right_contract,
    ext_scalar,
    ext_wedge,
)
from ..operators import (
    ExtendedOperator,
    GeneralizedOperator,
    LinearMap,
    adjoint,
    extend,
    generalize,
    inverse,
)
from . import nodes as N
from .checker import check_dim, typecheck, typecheck_expression
from .errors import DslError, EvalError
from .parser import parse_expression, parse_script

ASSERT_TOL = 1e-9


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def type_name(v) -> str:
    if _is_number(v):
        return "scalar"
    if isinstance(v, Graded):
        return "multivector" if v.variance == VECTOR else "multiform"
    if isinstance(v, LinearMap):
        return "operator"
    if isinstance(v, ExtendedOperator):
        return "extended-operator"
    if isinstance(v, GeneralizedOperator):
        return "generalized-operator"
    if isinstance(v, Extensor):
        return "extensor"
    if isinstance(v, GradeSet):
        return "gradeset"
    raise TypeError(f"not a language value: {type(v).__name__}")


def render_value(v) -> str:
    if _is_number(v):
        return format_coeff(v)
    if isinstance(v, Graded):
        return render(v)
    if isinstance(v, (LinearMap, Extensor)):
        return v.render()
    if isinstance(v, (ExtendedOperator, GeneralizedOperator)):
        return repr(v)
    if isinstance(v, GradeSet):
        return "{" + ",".join(map(str, v)) + "}"
    raise TypeError(f"not a language value: {type(v).__name__}")


def _terms(x: Graded) -> list[dict]:
    return [{"blades": [j + 1 for j in blade_indices(m)], "coeff": c + 0.0} for m, c in x]


def value_json(v, n: int) -> dict[str, Any]:
    kind = type_name(v)
    if kind == "scalar":
        c = float(v) + 0.0
        return {"type": kind, "dim": n, "terms": [{"blades": [], "coeff": c}] if c else []}
    if isinstance(v, Graded):
        return {"type": kind, "dim": n, "terms": _terms(v)}
    if isinstance(v, LinearMap):
        return {"type": kind, "variance": v.variance, "dim": n, "matrix": v.matrix.tolist()}
    if isinstance(v, (ExtendedOperator, GeneralizedOperator)):
        return {"type": kind, "variance": v.variance, "dim": n, "matrix": v.base.matrix.tolist()}
    if isinstance(v, GradeSet):
        return {"type": kind, "dim": n, "grades": list(v)}
    sig = v.sig
    slots = sig.slots()
    records = []
    for key, value in v.records():
        records.append({
            "inputs": [[j + 1 for j in blade_indices(m)] for m in key],
            "value": {"type": type_name(value), "terms": _terms(value)},
        })
    return {
        "type": kind,
        "dim": n,
        "signature": {
            "slots": [{"variance": var, "grades": list(g)} for var, g in slots],
            "output": {"variance": sig.output_variance, "grades": list(sig.output_grades)},
        },
        "records": records,
    }


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _adapt(x, variance: str, ctx: AlgebraContext):
    return element_class(variance).scalar(ctx, x) if _is_number(x) else x


@dataclass
class Evaluator:
    ctx: AlgebraContext
    env: dict = field(default_factory=dict)

    def err(self, node: N.Node, message: str):
        raise EvalError(message, node.line, None)

    def eval(self, e: N.Node):
        try:
            return getattr(self, "_" + type(e).__name__.lower())(e)
        except DslError:
            raise
        except (AlgebraError, ValueError, TypeError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
            self.err(e, str(exc))

    def _number(self, e: N.Number):
        return e.value

    def _blade(self, e: N.Blade):
        cls = element_class(VECTOR if e.prefix == "e" else FORM)
        return cls.blade(self.ctx, 1 << (e.index - 1))

    def _name(self, e: N.Name):
        return self.env[e.ident]

    def _grades(self, e: N.Grades):
        return GradeSet(e.grades)

    def _matrix(self, e: N.Matrix):
        rows = [[self._scalar(self.eval(x), x) for x in row] for row in e.rows]
        return LinearMap(self.ctx, np.array(rows, dtype=float), VECTOR)

    def _scalar(self, v, node) -> float:
        if _is_number(v):
            return float(v)
        self.err(node, "expected a scalar")

    def _unary(self, e: N.Unary):
        v = self.eval(e.operand)
        if isinstance(v, LinearMap):
            return LinearMap(v.ctx, -v.matrix, v.variance)
        return -v

    def _binary(self, e: N.Binary):
        a, b = self.eval(e.left), self.eval(e.right)
        if e.op == "*":
            if isinstance(a, LinearMap) or isinstance(b, LinearMap):
                op, s = (a, b) if isinstance(a, LinearMap) else (b, a)
                return LinearMap(op.ctx, op.matrix * s, op.variance)
            return a * b
        if e.op == "^":
            if isinstance(a, Extensor):
                return ext_wedge(a, b)
            return wedge(a, b)
        if isinstance(a, LinearMap):
            m = a.matrix + b.matrix if e.op == "+" else a.matrix - b.matrix
            return LinearMap(a.ctx, m, a.variance)
        return a + b if e.op == "+" else a - b

    def _extensorlit(self, e: N.ExtensorLit):
        vec = tuple(GradeSet(s.grades.grades) for s in e.slots if s.variance == VECTOR)
        frm = tuple(GradeSet(s.grades.grades) for s in e.slots if s.variance == FORM)
        out_g = GradeSet(e.output.grades.grades)
        sig = ExtensorSignature(vec, frm, e.output.variance, out_g)
        records = {}
        for rec in e.records:
            key = tuple(sum(1 << (i - 1) for i in k.indices) for k in rec.keys)
            value = _adapt(self.eval(rec.value), e.output.variance, self.ctx)
            stray = value.grades - out_g.grades
            if stray:
                self.err(rec, f"record value has grades {sorted(stray)} outside the output grade set")
            records[key] = value
        return Extensor.from_records(self.ctx, sig, records)

    def _call(self, e: N.Call):
        if isinstance(e.func, N.Name) and e.func.ident not in self.env:
            args = [self.eval(a) for a in e.args]
            return self._builtin(e, e.func.ident, args)
        f = self.eval(e.func)
        args = [self.eval(a) for a in e.args]
        if isinstance(f, Extensor):
            return f(*args)
        (x,) = args
        if isinstance(x, Extensor):
            act = act_extended if isinstance(f, ExtendedOperator) else act_generalized
            return act(f.base, x)
        if _is_number(x):
            return x if isinstance(f, ExtendedOperator) else 0.0
        return f(x)

    def _builtin(self, e: N.Call, name: str, args: list):
        if name == "sp":
            a, b = args
            if isinstance(a, Extensor):
                return ext_scalar(a, b)
            return scalar_product(a, b)
        if name in ("lc", "rc"):
            return self._contract(name, *args)
        if name == "grade":
            x, k = args
            if not float(k).is_integer():
                self.err(e, f"grade index must be an integer, got {format_coeff(k)}")
            k = int(k)
            if _is_number(x):
                if not 0 <= k <= self.ctx.n:
                    self.err(e, f"grade {k} out of range 0..{self.ctx.n}")
                return x if k == 0 else 0.0
            return grade_part(x, k)
        if name == "gset":
            x, g = args
            if _is_number(x):
                return x if 0 in g else 0.0
            return gradeset_part(x, g)
        if name == "rev":
            return args[0] if _is_number(args[0]) else reversion(args[0])
        if name == "ginv":
            return args[0] if _is_number(args[0]) else grade_involution(args[0])
        if name == "adj":
            (x,) = args
            if isinstance(x, Extensor):
                return ext_adjoint(x)
            if isinstance(x, LinearMap):
                return adjoint(x)
            return type(x)(adjoint(x.base))
        if name == "inv":
            return inverse(args[0])
        if name == "ext":
            return extend(args[0])
        if name == "gen":
            return generalize(args[0])
        self.err(e, f"unknown built-in {name!r}")

    def _contract(self, name: str, a, b):
        if isinstance(a, Extensor):
            return ext_left_contract(a, b) if name == "lc" else ext_right_contract(a, b)
        if _is_number(a) and _is_number(b):
            return float(a) * float(b)
        if _is_number(a):
            a = _adapt(a, FORM if b.variance == VECTOR else VECTOR, self.ctx)
        if _is_number(b):
            b = _adapt(b, FORM if a.variance == VECTOR else VECTOR, self.ctx)
        if name == "lc":
            return left_contract(a, b) if a.variance == FORM else left_contract_form(a, b)
        return right_contract(a, b) if a.variance == FORM else right_contract_vec(a, b)


def values_equal(a, b) -> bool:
    """Absolute comparison within ``ASSERT_TOL``; scalars compare with grade-0 parts."""
    if _is_number(a) and _is_number(b):
        return abs(float(a) - float(b)) <= ASSERT_TOL
    if _is_number(a):
        a, b = b, a
    if isinstance(a, Graded):
        if _is_number(b):
            b = type(a).scalar(a.ctx, b)
        return (a - b).norm_inf() <= ASSERT_TOL
    if isinstance(a, Extensor):
        return a.ctx == b.ctx and a.sig == b.sig and a.max_discrepancy(b) <= ASSERT_TOL
    if isinstance(a, LinearMap):
        return a.variance == b.variance and float(np.max(np.abs(a.matrix - b.matrix))) <= ASSERT_TOL
    if isinstance(a, (ExtendedOperator, GeneralizedOperator)):
        return type(a) is type(b) and values_equal(a.base, b.base)
    return a == b


# ---------------------------------------------------------------------------
# drivers
# ---------------------------------------------------------------------------


@dataclass
class RunResult:
    outputs: list = field(default_factory=list)  # (value, dim) pairs
    failures: list = field(default_factory=list)  # diagnostics for failed asserts
    error: DslError | None = None

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return self.error.exit_code
        return 1 if self.failures else 0


def run_script(text: str) -> RunResult:
    """Parse, check and evaluate a script. Evaluation stops at the first
    runtime error; failed assertions are collected and evaluation goes on."""
    res = RunResult()
    try:
        script = parse_script(text)
        typecheck(script)
    except DslError as exc:
        res.error = exc
        return res
    n = script.statements[0].n
    ev = Evaluator(AlgebraContext(n))
    for st in script.statements[1:]:
        try:
            if isinstance(st, N.Let):
                ev.env[st.name] = ev.eval(st.expr)
            elif isinstance(st, N.Print):
                res.outputs.append((ev.eval(st.expr), n))
            elif isinstance(st, N.Assert):
                lv, rv = ev.eval(st.left), ev.eval(st.right)
                if not values_equal(lv, rv):
                    res.failures.append(
                        f"assertion failed: line {st.line}: {render_value(lv)} != {render_value(rv)}"
                    )
        except DslError as exc:
            res.error = exc
            return res
    return res


def evaluate_expression(text: str, n: int):
    """Parse, check and evaluate a single expression in dimension ``n``."""
    node = parse_expression(text)
    check_dim(n, node)
    typecheck_expression(node, n)
    return Evaluator(AlgebraContext(n)).eval(node)
