"""Brute-force reference implementation on full antisymmetric tensors.

Nothing here reuses the blade combinatorics of the fast kernel. A grade-p
multivector ``X`` is held as the array ``T[j1, ..., jp] = X(w^j1, ..., w^jp)``
so that ``X = (1/p!) sum T[j] e_j1 (x) ... (x) e_jp``; signs come from
explicit permutation sums. Every function accepts an optional frame
matrix ``M`` whose columns are the frame vectors ``f_j = M e_j``; the dual
frame is ``phi^j`` = row ``j`` of ``M^-1``. Results are always returned in
the canonical frame, so the outcome must not depend on ``M``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import FORM, VECTOR, AlgebraContext, Graded, Multiform, Multivector

__all__ = [
    "TensorRep",
    "to_tensor",
    "from_tensor",
    "alternate",
    "tensor_wedge",
    "oracle_scalar_product",
    "oracle_left_contract",
    "oracle_left_contract_form",
    "oracle_right_contract",
    "oracle_right_contract_vec",
    "oracle_extend",
    "oracle_generalize",
    "random_frame",
]


@lru_cache(maxsize=None)
def _perms(k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """All permutations of ``range(k)`` with their signs (inversion count parity)."""
    out = []
    for p in itertools.permutations(range(k)):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if p[i] > p[j])
        out.append((p, -1 if inv % 2 else 1))
    return tuple(out)


def alternate(t: np.ndarray) -> np.ndarray:
    """Unnormalised antisymmetrisation ``sum_s sgn(s) t o s`` over all axes."""
    k = t.ndim
    if k < 2:
        return np.array(t, dtype=float)
    acc = np.zeros_like(t, dtype=float)
    for p, s in _perms(k):
        acc = acc + s * np.transpose(t, p)
    return acc


@dataclass(frozen=True)
class TensorRep:
    ctx: AlgebraContext
    grade: int
    components: np.ndarray
    variance: str = VECTOR

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float)
        n = self.ctx.n
        if c.shape != (n,) * self.grade:
            raise ValueError(f"expected shape {(n,) * self.grade}, got {c.shape}")
        for i in range(self.grade):
            for j in range(i + 1, self.grade):
                if not np.allclose(np.swapaxes(c, i, j), -c, rtol=0, atol=1e-9):
                    raise ValueError(f"components are not antisymmetric in axes {i}, {j}")
        object.__setattr__(self, "components", c)


def _split(x: Graded) -> dict[int, dict[tuple[int, ...], float]]:
    """Homogeneous parts keyed by grade, blades as ascending zero-based tuples."""
    parts: dict[int, dict[tuple[int, ...], float]] = {}
    for mask, c in x.coeffs.items():
        idx = tuple(j for j in range(x.ctx.n) if mask >> j & 1)
        parts.setdefault(len(idx), {})[idx] = c
    return parts


def _tensor_of(n: int, p: int, blades: dict[tuple[int, ...], float]) -> np.ndarray:
    t = np.zeros((n,) * p)
    for idx, c in blades.items():
        for perm, s in _perms(p):
            t[tuple(idx[i] for i in perm)] = s * c
    return t


def to_tensor(x: Graded, grade: int | None = None) -> TensorRep:
    """Full antisymmetric components of a homogeneous element."""
    parts = _split(x)
    if len(parts) > 1:
        raise ValueError("to_tensor needs a homogeneous element")
    if parts:
        (p, blades), = parts.items()
        if grade is not None and grade != p:
            raise ValueError(f"element has grade {p}, not {grade}")
    else:
        p, blades = (grade or 0), {}
    return TensorRep(x.ctx, p, _tensor_of(x.ctx.n, p, blades), x.variance)


def from_tensor(t: TensorRep) -> Graded:
    cls = Multivector if t.variance == VECTOR else Multiform
    coeffs = {}
    for idx in itertools.combinations(range(t.ctx.n), t.grade):
        c = float(t.components[idx]) if t.grade else float(t.components)
        if c:
            coeffs[sum(1 << j for j in idx)] = c
    return cls(t.ctx, coeffs)


def tensor_wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exterior product of full antisymmetric tensors: ``Alt'(a (x) b) / (p! q!)``."""
    p, q = a.ndim, b.ndim
    return alternate(np.multiply.outer(a, b)) / (math.factorial(p) * math.factorial(q))


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------


def random_frame(n: int, rng: np.random.Generator, min_det: float = 0.1) -> np.ndarray:
    while True:
        m = rng.normal(size=(n, n))
        if abs(np.linalg.det(m)) >= min_det:
            return m


def _frame(n: int, frame) -> tuple[np.ndarray, np.ndarray]:
    if frame is None:
        return np.eye(n), np.eye(n)
    m = np.asarray(frame, dtype=float)
    return m, np.linalg.inv(m)


def _each_axis(t: np.ndarray, a: np.ndarray) -> np.ndarray:
    # t'[i..] = sum a[i, j] t[j..] on every axis
    for ax in range(t.ndim):
        t = np.moveaxis(np.tensordot(a, t, axes=([1], [ax])), 0, ax)
    return t


def _to_frame(t: np.ndarray, variance: str, m: np.ndarray, minv: np.ndarray) -> np.ndarray:
    # X(phi^j..) for vectors, Phi(f_j..) for forms
    return _each_axis(t, minv if variance == VECTOR else m.T)


def _from_frame(t: np.ndarray, variance: str, m: np.ndarray, minv: np.ndarray) -> np.ndarray:
    return _each_axis(t, m if variance == VECTOR else minv.T)


def _parts_in_frame(x: Graded, m, minv) -> dict[int, np.ndarray]:
    n = x.ctx.n
    return {p: _to_frame(_tensor_of(n, p, b), x.variance, m, minv) for p, b in _split(x).items()}


def _assemble(ctx, variance, pieces: list[np.ndarray], m, minv) -> Graded:
    cls = Multivector if variance == VECTOR else Multiform
    total = cls(ctx)
    for t in pieces:
        canon = _from_frame(t, variance, m, minv)
        total = total + from_tensor(TensorRep(ctx, canon.ndim, canon, variance))
    return total


def _reverse(t: np.ndarray) -> np.ndarray:
    # reversion reverses the order of the factors
    return np.transpose(t, tuple(reversed(range(t.ndim))))


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


def _pair(a: np.ndarray, b: np.ndarray) -> float:
    p = a.ndim
    return float(np.sum(a * b)) / math.factorial(p)


def oracle_scalar_product(a: Graded, b: Graded, frame=None) -> float:
    """``(1/p!) Phi(f_j1..f_jp) X(phi^j1..phi^jp)`` summed over grades; cross-grade pairs give 0."""
    if a.variance == VECTOR:
        a, b = b, a
    m, minv = _frame(a.ctx.n, frame)
    pa, pb = _parts_in_frame(a, m, minv), _parts_in_frame(b, m, minv)
    return sum(_pair(pa[p], pb[p]) for p in pa if p in pb)


def _left_coeffs(small: np.ndarray, big: np.ndarray) -> np.ndarray:
    """``c[J] = <rev(small) ^ d^j1 ^ ... ^ d^jm, big>`` for every index tuple ``J``.

    The dual-basis wedge ``d^J`` is expanded as its signed permutation sum.
    """
    p, q = small.ndim, big.ndim
    mdeg = q - p
    rs = _reverse(small)
    acc = np.zeros(big.shape[p:]) if mdeg else 0.0
    for perm, s in _perms(mdeg):
        moved = np.transpose(big, tuple(range(p)) + tuple(p + i for i in perm))
        acc = acc + s * np.tensordot(rs, moved, axes=(list(range(p)), list(range(p))))
    return np.asarray(acc) / (math.factorial(p) * math.factorial(mdeg))


def _right_coeffs(big: np.ndarray, small: np.ndarray) -> np.ndarray:
    """``c[J] = <big, d_j1 ^ ... ^ d_jm ^ rev(small)>`` for every index tuple ``J``."""
    p, q = big.ndim, small.ndim
    mdeg = p - q
    rs = _reverse(small)
    acc = np.zeros(big.shape[:mdeg]) if mdeg else 0.0
    for perm, s in _perms(mdeg):
        moved = np.transpose(big, tuple(perm) + tuple(range(mdeg, p)))
        acc = acc + s * np.tensordot(moved, rs, axes=(list(range(mdeg, p)), list(range(q))))
    return np.asarray(acc) / (math.factorial(q) * math.factorial(mdeg))


def _dual_sum(c: np.ndarray) -> np.ndarray:
    """``(1/m!) sum_J c[J] d_j1 ^ ... ^ d_jm`` as a tensor in frame components."""
    mdeg = c.ndim
    if mdeg == 0:
        return np.asarray(c, dtype=float)
    # d_j1 ^ ... ^ d_jm has components Alt'(delta_J)
    return alternate(c) / math.factorial(mdeg)


def _contract(small: Graded, big: Graded, frame, left: bool, out_variance: str) -> Graded:
    ctx = small.ctx
    m, minv = _frame(ctx.n, frame)
    ps, pb = _parts_in_frame(small, m, minv), _parts_in_frame(big, m, minv)
    pieces = []
    for p, ts in ps.items():
        for q, tb in pb.items():
            if q < p:
                continue
            c = _left_coeffs(ts, tb) if left else _right_coeffs(tb, ts)
            pieces.append(_dual_sum(c))
    return _assemble(ctx, out_variance, pieces, m, minv)


def oracle_left_contract(phi: Multiform, x: Multivector, frame=None) -> Multivector:
    """``<Phi_p, X^q| = (1/(q-p)!) <rev(Phi_p) ^ phi^j1 ^ .. , X^q> f_j1 ^ ..``"""
    return _contract(phi, x, frame, True, VECTOR)


def oracle_left_contract_form(x: Multivector, phi: Multiform, frame=None) -> Multiform:
    """``<X^p, Phi_q| = (1/(q-p)!) <rev(X^p) ^ f_j1 ^ .., Phi_q> phi^j1 ^ ..``"""
    return _contract(x, phi, frame, True, FORM)


def oracle_right_contract(phi: Multiform, x: Multivector, frame=None) -> Multiform:
    """``|Phi_p, X^q> = (1/(p-q)!) <Phi_p, f_j1 ^ .. ^ rev(X^q)> phi^j1 ^ ..``"""
    return _contract(x, phi, frame, False, FORM)


def oracle_right_contract_vec(x: Multivector, phi: Multiform, frame=None) -> Multivector:
    """``|X^p, Phi_q> = (1/(p-q)!) <X^p, phi^j1 ^ .. ^ rev(Phi_q)> f_j1 ^ ..``"""
    return _contract(phi, x, frame, False, VECTOR)


# ---------------------------------------------------------------------------
# operator lifts
# ---------------------------------------------------------------------------


def _images(matrix, variance: str, m, minv) -> np.ndarray:
    """Canonical components of the images of the frame elements, as columns."""
    a = np.asarray(matrix, dtype=float)
    return a @ (m if variance == VECTOR else minv.T)


def oracle_extend(matrix, x: Graded, frame=None) -> Graded:
    """``<1, X> + sum_k (1/k!) <d^j1 ^ .. ^ d^jk, X> L(d_j1) ^ .. ^ L(d_jk)``.

    ``matrix`` acts on elements of the same variance as ``x``.
    """
    ctx = x.ctx
    m, minv = _frame(ctx.n, frame)
    b = _images(matrix, x.variance, m, minv)
    out = []
    for k, t in _parts_in_frame(x, m, minv).items():
        if k == 0:
            out.append(_from_frame(t, x.variance, m, minv))
            continue
        # <d^J, X> = (1/k!) Alt'(X)[J]
        c = alternate(t) / math.factorial(k)
        # sum_J c[J] (x)_i b[:, j_i], then antisymmetrise the images
        img = _each_axis(c, b)
        out.append(alternate(img) / math.factorial(k))
    cls = Multivector if x.variance == VECTOR else Multiform
    total = cls(ctx)
    for t in out:
        total = total + from_tensor(TensorRep(ctx, t.ndim, t, x.variance))
    return total


def oracle_generalize(matrix, x: Graded, frame=None) -> Graded:
    """``sum_j G(d_j) ^ <d^j, X|`` with the contraction taken from this module."""
    ctx = x.ctx
    m, minv = _frame(ctx.n, frame)
    b = _images(matrix, x.variance, m, minv)
    cls = Multivector if x.variance == VECTOR else Multiform
    other = Multiform if x.variance == VECTOR else Multivector
    total = cls(ctx)
    for j in range(ctx.n):
        # dual frame element d^j in canonical components
        dual = minv[j, :] if x.variance == VECTOR else m[:, j]
        d = other(ctx, {1 << i: v for i, v in enumerate(dual)})
        if x.variance == VECTOR:
            inner = oracle_left_contract(d, x, frame)
        else:
            inner = oracle_left_contract_form(d, x, frame)
        for k, t in _split(inner).items():
            tk = _tensor_of(ctx.n, k, t)
            w = tensor_wedge(b[:, j], tk)
            total = total + from_tensor(TensorRep(ctx, k + 1, w, x.variance))
    return total
