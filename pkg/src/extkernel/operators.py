"""Linear operators on the space or its dual and their lifts to the full algebras.

A :class:`LinearMap` carries an ``n x n`` matrix whose column ``j`` is the
image of ``e_j`` (or ``w_j`` for an operator on forms). Two lifts act on
the whole exterior algebra of matching variance:

* the *extended* operator, the unique grade-preserving algebra morphism
  that fixes scalars and agrees with the map on grade 1;
* the *generalized* operator, the unique grade-preserving derivation that
  kills scalars and agrees with the map on grade 1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .algebra import (
    FORM,
    VECTOR,
    AlgebraContext,
    AlgebraError,
    DomainError,
    Graded,
    VarianceError,
    _is_number,
    blade_indices,
    element_class,
    flip,
    format_coeff,
    reorder_sign,
    wedge,
)

SINGULAR_TOL = 1e-9


class SingularOperatorError(AlgebraError, ValueError):
    """An inverse was requested for an operator with ``|det| <= 1e-9``."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LinearMap:
    ctx: AlgebraContext
    matrix: np.ndarray
    variance: str = VECTOR

    def __post_init__(self):
        m = _freeze(self.matrix)
        n = self.ctx.n
        if m.shape != (n, n):
            raise DomainError(f"operator matrix must be {n}x{n}, got shape {m.shape}")
        if self.variance not in (VECTOR, FORM):
            raise ValueError(f"unknown variance {self.variance!r}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, ctx: AlgebraContext, variance: str = VECTOR) -> "LinearMap":
        return cls(ctx, np.eye(ctx.n), variance)

    @classmethod
    def zero(cls, ctx: AlgebraContext, variance: str = VECTOR) -> "LinearMap":
        return cls(ctx, np.zeros((ctx.n, ctx.n)), variance)

    @classmethod
    def from_rows(cls, rows, variance: str = VECTOR) -> "LinearMap":
        m = np.asarray(rows, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"operator matrix must be square, got shape {m.shape}")
        return cls(AlgebraContext(m.shape[0]), m, variance)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def invertible(self) -> bool:
        return abs(self.det) > SINGULAR_TOL

    def image(self, j: int) -> Graded:
        """Image of the ``j``-th (zero-based) basis element of grade 1."""
        return element_class(self.variance).from_vector(self.ctx, self.matrix[:, j])

    def __call__(self, v: Graded) -> Graded:
        """Apply to a grade-1 element."""
        _check_operand(self, v)
        if v.grades - {1}:
            raise DomainError("a linear map acts on grade-1 elements; use extend() or generalize()")
        out = self.matrix @ np.asarray(v.components())
        return element_class(self.variance).from_vector(self.ctx, out)

    def adjoint(self) -> "LinearMap":
        return adjoint(self)

    def inverse(self) -> "LinearMap":
        return inverse(self)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        if not isinstance(other, LinearMap):
            return NotImplemented
        if other.variance != self.variance or other.ctx != self.ctx:
            raise VarianceError("composition needs operators of the same variance and dimension")
        return LinearMap(self.ctx, self.matrix @ other.matrix, self.variance)

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.variance == other.variance
            and np.allclose(self.matrix, other.matrix, rtol=0, atol=1e-9)
        )

    __hash__ = None

    def render(self) -> str:
        # a bare matrix literal denotes an operator on vectors
        m = self.matrix if self.variance == VECTOR else self.matrix.T
        rows = ", ".join("[" + ", ".join(format_coeff(v) for v in row) + "]" for row in m)
        return f"[{rows}]" if self.variance == VECTOR else f"adj([{rows}])"

    def __repr__(self) -> str:
        return f"LinearMap({self.variance}, {self.render()})"


def _check_operand(op, x) -> None:
    if not isinstance(x, Graded):
        raise TypeError(f"operators act on multivectors or multiforms, got {type(x).__name__}")
    if x.variance != op.variance:
        raise VarianceError(f"an operator on {op.variance}s cannot act on a {x.variance} element")
    if x.ctx != op.ctx:
        raise DomainError(f"dimension mismatch: {op.ctx.n} vs {x.ctx.n}")


def adjoint(op: LinearMap) -> LinearMap:
    """Duality adjoint: ``<op(v), w> = <v, adjoint(op)(w)>``; transposes the matrix."""
    return LinearMap(op.ctx, op.matrix.T, flip(op.variance))


def inverse(op: LinearMap) -> LinearMap:
    if not op.invertible:
        raise SingularOperatorError(f"singular operator (det = {op.det:.3g})")
    return LinearMap(op.ctx, np.linalg.inv(op.matrix), op.variance)


def contragredient(op: LinearMap) -> LinearMap:
    """Inverse-then-adjoint: the operator induced on the opposite variance."""
    return adjoint(inverse(op))


# ---------------------------------------------------------------------------
# lifted operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _Lift:
    base: LinearMap
    _tables: dict = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    @property
    def ctx(self) -> AlgebraContext:
        return self.base.ctx

    @property
    def variance(self) -> str:
        return self.base.variance

    def _blade_image(self, mask: int) -> Graded:
        raise NotImplementedError

    def table(self, k: int) -> dict[int, Graded]:
        """Images of all grade-``k`` blades, computed on first use."""
        tab = self._tables.get(k)
        if tab is None:
            self.ctx.check_grade(k)
            tab = {m: self._blade_image(m) for m in self.ctx.blades(k)}
            with self._lock:
                tab = self._tables.setdefault(k, tab)
        return tab

    def __call__(self, x):
        if _is_number(x):
            x = element_class(self.variance).scalar(self.ctx, x)
        _check_operand(self.base, x)
        out: dict[int, float] = {}
        for mask, c in x.coeffs.items():
            for m2, c2 in self.table(mask.bit_count())[mask].coeffs.items():
                out[m2] = out.get(m2, 0.0) + c * c2
        return type(x)(self.ctx, out)

    def matrix(self, grades: Iterable[int] | None = None) -> np.ndarray:
        """Dense matrix on the blades of the given grades (all grades by default)."""
        blades = self.ctx.blades() if grades is None else [
            m for m in self.ctx.blades() if m.bit_count() in set(grades)
        ]
        index = {m: i for i, m in enumerate(blades)}
        out = np.zeros((len(blades), len(blades)))
        for j, m in enumerate(blades):
            for m2, c in self.table(m.bit_count())[m].coeffs.items():
                out[index[m2], j] = c
        return out


class ExtendedOperator(_Lift):
    """Grade-preserving algebra morphism lifting a linear map."""

    def _blade_image(self, mask: int) -> Graded:
        acc = element_class(self.variance).scalar(self.ctx, 1.0)
        for j in blade_indices(mask):
            acc = wedge(acc, self.base.image(j))
        return acc

    def adjoint(self) -> "ExtendedOperator":
        return ExtendedOperator(adjoint(self.base))

    def __repr__(self) -> str:
        return f"ext({self.base.render()})"


class GeneralizedOperator(_Lift):
    """Grade-preserving derivation lifting a linear map."""

    def _blade_image(self, mask: int) -> Graded:
        cls = element_class(self.variance)
        idx = blade_indices(mask)
        out = cls(self.ctx)
        for j in idx:
            rest = mask & ~(1 << j)
            # move factor j to the front, replace it by its image
            sign = reorder_sign(1 << j, rest)
            out = out + sign * wedge(self.base.image(j), cls.blade(self.ctx, rest))
        return out

    def adjoint(self) -> "GeneralizedOperator":
        return GeneralizedOperator(adjoint(self.base))

    def __repr__(self) -> str:
        return f"gen({self.base.render()})"


def extend(op: LinearMap) -> ExtendedOperator:
    return ExtendedOperator(op)


def generalize(op: LinearMap) -> GeneralizedOperator:
    return GeneralizedOperator(op)


def apply_extended(lifted: ExtendedOperator | LinearMap, x):
    if isinstance(lifted, LinearMap):
        lifted = extend(lifted)
    return lifted(x)


def apply_generalized(lifted: GeneralizedOperator | LinearMap, x):
    if isinstance(lifted, LinearMap):
        lifted = generalize(lifted)
    return lifted(x)


def algebra_adjoint(
    op: Callable[[Graded], Graded], ctx: AlgebraContext, variance: str
) -> Callable[[Graded], Graded]:
    """Duality adjoint of a linear operator on a whole exterior algebra.

    ``op`` acts on elements of ``variance``; the result acts on the opposite
    variance and is defined by expanding over the dual frame::

        adj(Z) = sum_B <Z, op(b_B)> b*_B
    """
    cls_in = element_class(variance)
    cls_out = element_class(flip(variance))
    images = {m: op(cls_in.blade(ctx, m)) for m in ctx.blades()}

    def adj(z: Graded) -> Graded:
        if z.variance != flip(variance):
            raise VarianceError(f"adjoint acts on {flip(variance)} elements")
        out = {}
        for m, img in images.items():
            s = sum(c * z.coeff(m2) for m2, c in img.coeffs.items())
            if s:
                out[m] = s
        return cls_out(ctx, out)

    return adj


def _max_discrepancy(f, g, ctx: AlgebraContext, variance: str) -> float:
    cls = element_class(variance)
    worst = 0.0
    for m in ctx.blades():
        b = cls.blade(ctx, m)
        worst = max(worst, (f(b) - g(b)).norm_inf())
    return worst


def extended_adjoint_commutes(op: LinearMap) -> float:
    """Max discrepancy, over all basis blades, between the adjoint of the
    extended operator and the extended operator of the adjoint."""
    lhs = algebra_adjoint(extend(op), op.ctx, op.variance)
    rhs = extend(adjoint(op))
    return _max_discrepancy(lhs, rhs, op.ctx, flip(op.variance))


def generalized_adjoint_commutes(op: LinearMap) -> float:
    """Same check as :func:`extended_adjoint_commutes` for the generalized lift."""
    lhs = algebra_adjoint(generalize(op), op.ctx, op.variance)
    rhs = generalize(adjoint(op))
    return _max_discrepancy(lhs, rhs, op.ctx, flip(op.variance))
