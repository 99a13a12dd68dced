"""Extensors: multilinear maps with multivector and multiform slots.

An extensor with ``k`` multivector slots and ``l`` multiform slots is
stored as a dense table over basis blades. Axis ``i`` of the table runs
over the blades of slot ``i`` (multivector slots first, then multiform
slots, each restricted to its grade set, canonical order); the last axis
runs over the blades of the output grade set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .algebra import (
    FORM,
    VECTOR,
    AlgebraContext,
    DomainError,
    GradeSet,
    Graded,
    VarianceError,
    _is_number,
    blade_key,
    element_class,
    flip,
    render,
    wedge,
)
from .duality import (
    left_contract,
    left_contract_form,
    right_contract,
    right_contract_vec,
    scalar_product,
)
from .operators import (
    LinearMap,
    adjoint,
    contragredient,
    extend,
    generalize,
    inverse,
)

__all__ = [
    "ExtensorSignature",
    "Extensor",
    "ArityError",
    "ext_wedge",
    "ext_scalar",
    "ext_left_contract",
    "ext_right_contract",
    "ext_adjoint",
    "act_extended",
    "act_generalized",
]


class ArityError(DomainError):
    """Wrong number or kind of extensor arguments."""


_TAG = {VECTOR: "vec", FORM: "form"}


def _gradeset(g) -> GradeSet:
    return g if isinstance(g, GradeSet) else GradeSet(g)


def _render_grades(g: GradeSet) -> str:
    return "{" + ",".join(map(str, g)) + "}"


@lru_cache(maxsize=None)
def _basis(n: int, grades: frozenset) -> tuple[int, ...]:
    return tuple(sorted((m for m in range(1 << n) if m.bit_count() in grades), key=blade_key))


def basis(ctx: AlgebraContext, grades: GradeSet) -> tuple[int, ...]:
    grades.validate(ctx)
    return _basis(ctx.n, grades.grades)


@dataclass(frozen=True)
class ExtensorSignature:
    vector_slots: tuple
    form_slots: tuple
    output_variance: str
    output_grades: GradeSet

    def __post_init__(self):
        object.__setattr__(self, "vector_slots", tuple(_gradeset(g) for g in self.vector_slots))
        object.__setattr__(self, "form_slots", tuple(_gradeset(g) for g in self.form_slots))
        object.__setattr__(self, "output_grades", _gradeset(self.output_grades))
        if self.output_variance not in (VECTOR, FORM):
            raise ValueError(f"unknown variance {self.output_variance!r}")

    @property
    def k(self) -> int:
        return len(self.vector_slots)

    @property
    def l(self) -> int:
        return len(self.form_slots)

    @property
    def arity(self) -> int:
        return self.k + self.l

    def slots(self) -> list[tuple[str, GradeSet]]:
        return [(VECTOR, g) for g in self.vector_slots] + [(FORM, g) for g in self.form_slots]

    def validate(self, ctx: AlgebraContext) -> None:
        for _, g in self.slots():
            g.validate(ctx)
        self.output_grades.validate(ctx)

    def shape(self, ctx: AlgebraContext) -> tuple[int, ...]:
        self.validate(ctx)
        dims = [g.dimension(ctx) for _, g in self.slots()]
        return tuple(dims) + (self.output_grades.dimension(ctx),)

    def dimension(self, ctx: AlgebraContext) -> int:
        """Dimension of the space of extensors with this signature."""
        return math.prod(self.shape(ctx))

    def render(self) -> str:
        slots = ", ".join(f"{_TAG[v]}{_render_grades(g)}" for v, g in self.slots())
        out = f"{_TAG[self.output_variance]}{_render_grades(self.output_grades)}"
        return f"{slots} -> {out}" if slots else f"-> {out}"


def _coords(ctx: AlgebraContext, x, variance: str, grades: GradeSet) -> np.ndarray:
    """Coordinates of ``x`` projected onto a grade set, in the slot basis."""
    if _is_number(x):
        x = element_class(variance).scalar(ctx, x)
    if not isinstance(x, Graded):
        raise TypeError(f"extensor arguments must be multivectors or multiforms, got {type(x).__name__}")
    if x.variance != variance:
        raise VarianceError(f"a {variance} slot cannot take a {x.variance} argument")
    if x.ctx != ctx:
        raise DomainError(f"dimension mismatch: {ctx.n} vs {x.ctx.n}")
    return np.array([x.coeff(m) for m in basis(ctx, grades)])


def _element(ctx: AlgebraContext, variance: str, grades: GradeSet, vec: np.ndarray) -> Graded:
    masks = basis(ctx, grades)
    return element_class(variance)(ctx, {m: float(c) for m, c in zip(masks, vec) if c != 0})


class Extensor:
    """A tabulated multilinear map; immutable."""

    __slots__ = ("ctx", "sig", "table")

    def __init__(self, ctx: AlgebraContext, sig: ExtensorSignature, table):
        t = np.array(table, dtype=float, copy=True)
        shape = sig.shape(ctx)
        if t.shape != shape:
            raise DomainError(f"table shape {t.shape} does not match signature shape {shape}")
        t.setflags(write=False)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "table", t)

    def __setattr__(self, name, value):
        raise AttributeError("Extensor is immutable")

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, ctx: AlgebraContext, sig: ExtensorSignature) -> "Extensor":
        return cls(ctx, sig, np.zeros(sig.shape(ctx)))

    @classmethod
    def from_callable(cls, ctx: AlgebraContext, sig: ExtensorSignature, fn: Callable) -> "Extensor":
        """Tabulate ``fn`` on every tuple of slot basis blades.

        Values outside the output grade set are projected away.
        """
        shape = sig.shape(ctx)
        table = np.zeros(shape)
        slot_bases = [
            [element_class(v).blade(ctx, m) for m in basis(ctx, g)] for v, g in sig.slots()
        ]
        for idx in itertools.product(*(range(d) for d in shape[:-1])):
            args = [slot_bases[i][j] for i, j in enumerate(idx)]
            table[idx] = _coords(ctx, fn(*args), sig.output_variance, sig.output_grades)
        return cls(ctx, sig, table)

    @classmethod
    def from_records(
        cls, ctx: AlgebraContext, sig: ExtensorSignature, records: Mapping[tuple, object]
    ) -> "Extensor":
        """Build from ``{(mask_1, ..., mask_r): value}``; unlisted keys map to zero."""
        table = np.zeros(sig.shape(ctx))
        slot_index = [{m: i for i, m in enumerate(basis(ctx, g))} for _, g in sig.slots()]
        for key, value in records.items():
            key = tuple(key)
            if len(key) != sig.arity:
                raise ArityError(f"record key {key} has {len(key)} entries, expected {sig.arity}")
            try:
                idx = tuple(slot_index[i][m] for i, m in enumerate(key))
            except KeyError as exc:
                raise DomainError(f"record key {key} has a blade outside its slot grade set") from exc
            table[idx] += _coords(ctx, value, sig.output_variance, sig.output_grades)
        return cls(ctx, sig, table)

    @classmethod
    def constant(cls, value: Graded, grades: Iterable[int] | GradeSet | None = None) -> "Extensor":
        """Extensor with no slots whose value is ``value``."""
        g = _gradeset(grades) if grades is not None else GradeSet(value.grades or {0})
        sig = ExtensorSignature((), (), value.variance, g)
        return cls(value.ctx, sig, _coords(value.ctx, value, value.variance, g))

    @classmethod
    def identity(cls, ctx: AlgebraContext, variance: str, grades: Iterable[int] | GradeSet) -> "Extensor":
        """The inclusion of a grade set into the algebra, as a one-slot extensor."""
        g = _gradeset(grades)
        sig = ExtensorSignature(
            (g,) if variance == VECTOR else (), (g,) if variance == FORM else (), variance, g
        )
        return cls(ctx, sig, np.eye(g.dimension(ctx)))

    @classmethod
    def from_matrix(
        cls, ctx: AlgebraContext, matrix, slot_variance: str = VECTOR, output_variance: str = VECTOR
    ) -> "Extensor":
        """Grade-1 to grade-1 extensor; column ``j`` is the image of the ``j``-th basis element."""
        a = np.asarray(matrix, dtype=float)
        if a.shape != (ctx.n, ctx.n):
            raise DomainError(f"expected a {ctx.n}x{ctx.n} matrix")
        one = GradeSet.of(1)
        sig = ExtensorSignature(
            (one,) if slot_variance == VECTOR else (),
            (one,) if slot_variance == FORM else (),
            output_variance,
            one,
        )
        return cls(ctx, sig, a.T)

    def to_matrix(self) -> np.ndarray:
        if self.sig.arity != 1 or self.sig.slots()[0][1].grades != {1} or self.sig.output_grades.grades != {1}:
            raise DomainError("only one-slot grade-1 to grade-1 extensors have a matrix")
        return np.array(self.table.T)

    # evaluation -------------------------------------------------------

    def __call__(self, *args) -> Graded:
        return eval_extensor(self, *args)

    def records(self) -> list[tuple[tuple[int, ...], Graded]]:
        """Nonzero table rows as ``(key masks, value)`` pairs, in table order."""
        out = []
        bases = [basis(self.ctx, g) for _, g in self.sig.slots()]
        for idx in itertools.product(*(range(d) for d in self.table.shape[:-1])):
            row = self.table[idx]
            if np.any(row):
                key = tuple(bases[i][j] for i, j in enumerate(idx))
                out.append((key, _element(self.ctx, self.sig.output_variance, self.sig.output_grades, row)))
        return out

    # vector space structure -------------------------------------------

    def _check_same(self, other: "Extensor") -> None:
        if not isinstance(other, Extensor):
            raise TypeError(f"expected an extensor, got {type(other).__name__}")
        if other.ctx != self.ctx or other.sig != self.sig:
            raise DomainError("extensors must share dimension and signature")

    def __add__(self, other):
        if not isinstance(other, Extensor):
            return NotImplemented
        self._check_same(other)
        return Extensor(self.ctx, self.sig, self.table + other.table)

    def __sub__(self, other):
        if not isinstance(other, Extensor):
            return NotImplemented
        self._check_same(other)
        return Extensor(self.ctx, self.sig, self.table - other.table)

    def __neg__(self):
        return Extensor(self.ctx, self.sig, -self.table)

    def __mul__(self, other):
        if _is_number(other):
            return Extensor(self.ctx, self.sig, self.table * other)
        return NotImplemented

    __rmul__ = __mul__

    def __xor__(self, other):
        if isinstance(other, Extensor):
            return ext_wedge(self, other)
        return NotImplemented

    def max_discrepancy(self, other: "Extensor") -> float:
        self._check_same(other)
        if self.table.size == 0:
            return 0.0
        return float(np.max(np.abs(self.table - other.table)))

    def isclose(self, other: "Extensor", rel_tol: float = 1e-9, abs_tol: float = 1e-9) -> bool:
        if not isinstance(other, Extensor) or other.ctx != self.ctx or other.sig != self.sig:
            return False
        scale = max(float(np.max(np.abs(self.table), initial=0.0)), float(np.max(np.abs(other.table), initial=0.0)))
        return self.max_discrepancy(other) <= max(abs_tol, rel_tol * scale)

    def __eq__(self, other):
        if not isinstance(other, Extensor):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    # rendering --------------------------------------------------------

    def render(self) -> str:
        """Canonical text, re-parsable by the expression language."""
        head = self.sig.render()
        recs = []
        slots = self.sig.slots()
        for key, value in self.records():
            names = [element_class(v).blade(self.ctx, m).blade_name(m) for (v, _), m in zip(slots, key)]
            lhs = ", ".join(names)
            recs.append(f"{lhs} => {render(value)}" if lhs else f"=> {render(value)}")
        return "extensor(" + "; ".join([head] + recs) + ")"

    __str__ = render

    def __repr__(self) -> str:
        return f"Extensor(n={self.ctx.n}, {self.render()!r})"


def eval_extensor(tau: Extensor, *args) -> Graded:
    """Evaluate an extensor; arguments are projected onto their slot grade sets."""
    sig = tau.sig
    if len(args) != sig.arity:
        raise ArityError(f"extensor takes {sig.k} multivector and {sig.l} multiform arguments, got {len(args)}")
    t = tau.table
    for (variance, g), x in zip(sig.slots(), args):
        t = np.tensordot(_coords(tau.ctx, x, variance, g), t, axes=([0], [0]))
    return _element(tau.ctx, sig.output_variance, sig.output_grades, t)


# ---------------------------------------------------------------------------
# pointwise products of extensors
# ---------------------------------------------------------------------------


def _structure(ctx, product, va, ga, vb, gb, vout, gout) -> np.ndarray:
    ba, bb, bo = basis(ctx, ga), basis(ctx, gb), basis(ctx, gout)
    index = {m: i for i, m in enumerate(bo)}
    ca, cb = element_class(va), element_class(vb)
    w = np.zeros((len(ba), len(bb), len(bo)))
    for i, ma in enumerate(ba):
        for j, mb in enumerate(bb):
            val = product(ca.blade(ctx, ma), cb.blade(ctx, mb))
            if _is_number(val):
                val = element_class(vout).scalar(ctx, val)
            for m, c in val.coeffs.items():
                w[i, j, index[m]] += c
    return w


def _out_grades(ctx, rule, ga: GradeSet, gb: GradeSet) -> GradeSet:
    gs = {rule(p, q) for p in ga for q in gb}
    gs = {g for g in gs if g is not None and 0 <= g <= ctx.n}
    # an identically zero product still needs a nonempty codomain
    return GradeSet(gs or {0})


def _pointwise(tau: Extensor, sigma: Extensor, product, out_variance: str, out_grades: GradeSet) -> Extensor:
    if tau.ctx != sigma.ctx:
        raise DomainError(f"dimension mismatch: {tau.ctx.n} vs {sigma.ctx.n}")
    ctx = tau.ctx
    st, ss = tau.sig, sigma.sig
    sig = ExtensorSignature(
        st.vector_slots + ss.vector_slots,
        st.form_slots + ss.form_slots,
        out_variance,
        out_grades,
    )
    w = _structure(
        ctx, product,
        st.output_variance, st.output_grades,
        ss.output_variance, ss.output_grades,
        out_variance, out_grades,
    )
    ta = tau.table.reshape(-1, tau.table.shape[-1])
    sb = sigma.table.reshape(-1, sigma.table.shape[-1])
    r = np.einsum("ajm,bj->abm", np.tensordot(ta, w, axes=([1], [0])), sb)
    r = r.reshape(tau.table.shape[:-1] + sigma.table.shape[:-1] + (w.shape[2],))
    k, l, rr, s = st.k, st.l, ss.k, ss.l
    order = (
        list(range(0, k))
        + list(range(k + l, k + l + rr))
        + list(range(k, k + l))
        + list(range(k + l + rr, k + l + rr + s))
        + [k + l + rr + s]
    )
    return Extensor(ctx, sig, r.transpose(order))


def ext_wedge(tau: Extensor, sigma: Extensor) -> Extensor:
    """Exterior product: slots concatenated, outputs wedged pointwise."""
    if tau.sig.output_variance != sigma.sig.output_variance:
        raise VarianceError("the exterior product of extensors needs outputs of the same variance")
    g = _out_grades(tau.ctx, lambda p, q: p + q, tau.sig.output_grades, sigma.sig.output_grades)
    return _pointwise(tau, sigma, wedge, tau.sig.output_variance, g)


def ext_scalar(tau: Extensor, sigma: Extensor) -> Extensor:
    """Pointwise duality scalar product of a multiform-valued and a
    multivector-valued extensor; the result is a scalar (grade-0 multiform)
    extensor."""
    if tau.sig.output_variance == sigma.sig.output_variance:
        raise VarianceError("the duality scalar product needs outputs of opposite variance")
    return _pointwise(tau, sigma, scalar_product, FORM, GradeSet.of(0))


def ext_left_contract(tau: Extensor, sigma: Extensor) -> Extensor:
    """Pointwise left contraction ``<tau, sigma|``.

    Multiform-valued with multivector-valued gives a multivector extensor;
    multivector-valued with multiform-valued gives a multiform extensor.
    """
    vt, vs = tau.sig.output_variance, sigma.sig.output_variance
    if vt == vs:
        raise VarianceError("contraction requires opposite variance")
    product = left_contract if vt == FORM else left_contract_form
    g = _out_grades(tau.ctx, lambda p, q: q - p if q >= p else None, tau.sig.output_grades, sigma.sig.output_grades)
    return _pointwise(tau, sigma, product, vs, g)


def ext_right_contract(tau: Extensor, sigma: Extensor) -> Extensor:
    """Pointwise right contraction ``|tau, sigma>``; output variance follows ``tau``."""
    vt, vs = tau.sig.output_variance, sigma.sig.output_variance
    if vt == vs:
        raise VarianceError("contraction requires opposite variance")
    product = right_contract if vt == FORM else right_contract_vec
    g = _out_grades(tau.ctx, lambda p, q: p - q if p >= q else None, tau.sig.output_grades, sigma.sig.output_grades)
    return _pointwise(tau, sigma, product, vt, g)


# ---------------------------------------------------------------------------
# duality adjoint
# ---------------------------------------------------------------------------


def ext_adjoint(tau: Extensor) -> Extensor:
    """Duality adjoint of a one-variable extensor.

    For a slot of variance ``v`` over grade set ``S`` and output of variance
    ``u`` over ``T``, the adjoint has one slot of variance ``flip(u)`` over
    ``T`` and output of variance ``flip(v)`` over ``S``::

        adj(Z) = sum_B <Z, tau(<b_B>_S)> b*_B

    the sum running over every basis blade ``b_B`` (the scalar blade
    included) and ``b*_B`` being the dual blade.
    """
    sig = tau.sig
    if sig.arity != 1:
        raise ArityError("the duality adjoint is defined only for one-variable extensors")
    ctx = tau.ctx
    (v_in, g_in), = sig.slots()
    v_new_slot = flip(sig.output_variance)
    v_new_out = flip(v_in)
    new_sig = ExtensorSignature(
        (sig.output_grades,) if v_new_slot == VECTOR else (),
        (sig.output_grades,) if v_new_slot == FORM else (),
        v_new_out,
        g_in,
    )
    cls_in, cls_out = element_class(v_in), element_class(v_new_out)
    images = []
    for m in ctx.blades():
        arg = cls_in.blade(ctx, m).gradeset_part(g_in)
        images.append((m, eval_extensor(tau, arg)))

    def adj(z: Graded) -> Graded:
        out = cls_out(ctx)
        for m, img in images:
            s = scalar_product(z, img)
            if s:
                out = out + cls_out.blade(ctx, m, s)
        return out

    return Extensor.from_callable(ctx, new_sig, adj)


# ---------------------------------------------------------------------------
# operator actions on extensors
# ---------------------------------------------------------------------------


def _op_matrix(op: Callable[[Graded], Graded], ctx: AlgebraContext, variance: str, grades: GradeSet) -> np.ndarray:
    """``M[c, a]`` = coefficient of basis blade ``c`` in ``op(basis blade a)``."""
    masks = basis(ctx, grades)
    cls = element_class(variance)
    out = np.zeros((len(masks), len(masks)))
    for a, m in enumerate(masks):
        out[:, a] = _coords(ctx, op(cls.blade(ctx, m)), variance, grades)
    return out


def _along(table: np.ndarray, axis: int, m: np.ndarray) -> np.ndarray:
    # T'[.., a, ..] = sum_c M[c, a] T[.., c, ..]
    return np.moveaxis(np.tensordot(table, m, axes=([axis], [0])), -1, axis)


def _check_op(op: LinearMap, tau: Extensor) -> None:
    if not isinstance(op, LinearMap):
        raise TypeError(f"expected a LinearMap, got {type(op).__name__}")
    if op.ctx != tau.ctx:
        raise DomainError(f"dimension mismatch: {op.ctx.n} vs {tau.ctx.n}")


def act_extended(op: LinearMap, tau: Extensor) -> Extensor:
    """Action of the extended operator of an invertible ``op`` on an extensor.

    With ``u`` the variance of ``op``, the result is::

        (op . tau)(X.., F..) = A_out( tau(slot arguments transformed) )

    where slots of variance ``u`` receive ``ext(inverse(op))``, slots of
    the opposite variance receive ``ext(adjoint(op))`` and the output is
    mapped by ``ext(op)`` when its variance is ``u``, otherwise by
    ``ext(adjoint(inverse(op)))``, the operator induced on the opposite
    variance.
    """
    _check_op(op, tau)
    inv = inverse(op)
    ctx, sig = tau.ctx, tau.sig
    same_arg, opp_arg = extend(inv), extend(adjoint(op))
    out_op = extend(op) if sig.output_variance == op.variance else extend(contragredient(op))
    t = tau.table
    for axis, (v, g) in enumerate(sig.slots()):
        f = same_arg if v == op.variance else opp_arg
        t = _along(t, axis, _op_matrix(f, ctx, v, g))
    a_out = _op_matrix(out_op, ctx, sig.output_variance, sig.output_grades)
    t = np.tensordot(t, a_out.T, axes=([-1], [0]))
    return Extensor(ctx, sig, t)


def act_generalized(op: LinearMap, tau: Extensor) -> Extensor:
    """Action of the generalized operator of ``op`` on an extensor.

    Alternating sum: the derivation applied to the output, minus the
    derivation fed into each slot of the same variance as ``op``, plus the
    adjoint derivation fed into each slot of the opposite variance. An
    output of the opposite variance is hit by minus the adjoint derivation.
    """
    _check_op(op, tau)
    ctx, sig = tau.ctx, tau.sig
    d_same, d_adj = generalize(op), generalize(adjoint(op))
    if sig.output_variance == op.variance:
        d_out = _op_matrix(d_same, ctx, sig.output_variance, sig.output_grades)
    else:
        d_out = -_op_matrix(d_adj, ctx, sig.output_variance, sig.output_grades)
    t0 = tau.table
    result = np.tensordot(t0, d_out.T, axes=([-1], [0]))
    for axis, (v, g) in enumerate(sig.slots()):
        if v == op.variance:
            result = result - _along(t0, axis, _op_matrix(d_same, ctx, v, g))
        else:
            result = result + _along(t0, axis, _op_matrix(d_adj, ctx, v, g))
    return Extensor(ctx, sig, result)


def lift_discrepancy(a: Extensor, b: Extensor) -> float:
    return a.max_discrepancy(b)


def tabulate_pointwise(ctx: AlgebraContext, sig: ExtensorSignature, fn: Callable) -> Extensor:
    """Alias of :meth:`Extensor.from_callable` kept for symmetry with the products."""
    return Extensor.from_callable(ctx, sig, fn)


def signature(
    vector_slots: Sequence = (),
    form_slots: Sequence = (),
    output_variance: str = VECTOR,
    output_grades: Iterable[int] | GradeSet = (1,),
) -> ExtensorSignature:
    return ExtensorSignature(tuple(vector_slots), tuple(form_slots), output_variance, _gradeset(output_grades))
