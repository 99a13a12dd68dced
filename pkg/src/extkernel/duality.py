"""Duality scalar product and the left/right contracted products.

The pairing between ``w_A`` and ``e_B`` in the sorted-blade basis is
``delta_AB``, so the scalar product is a plain coefficient sum. The four
contractions are computed blade by blade from the complement ``B \\ A``, a
merge sign and the reversion sign carried by the contracting factor:

    <w_A, e_B|  =  rev(|A|) * sign(A, B\\A) e_{B\\A}        (A subset of B)
    <e_A, w_B|  =  rev(|A|) * sign(A, B\\A) w_{B\\A}        (A subset of B)
    |w_A, e_B>  =  rev(|B|) * sign(A\\B, B) w_{A\\B}        (B subset of A)
    |e_A, w_B>  =  rev(|B|) * sign(A\\B, B) e_{A\\B}        (B subset of A)

Grade-equal pairings give grade-0 elements. Pairings with no subset
relation contribute nothing.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra import (
    FORM,
    VECTOR,
    DomainError,
    Graded,
    Multiform,
    Multivector,
    VarianceError,
    _is_number,
    reorder_sign,
    reversion_sign,
)

__all__ = [
    "scalar_product",
    "scalar_product_det_oracle",
    "left_contract",
    "left_contract_form",
    "right_contract",
    "right_contract_vec",
    "exact_det",
]


def _check_pair(form, vec) -> None:
    if not isinstance(form, Graded) or form.variance != FORM:
        raise VarianceError(f"expected a multiform, got {type(form).__name__}")
    if not isinstance(vec, Graded) or vec.variance != VECTOR:
        raise VarianceError(f"expected a multivector, got {type(vec).__name__}")
    if form.ctx != vec.ctx:
        raise DomainError(f"dimension mismatch: {form.ctx.n} vs {vec.ctx.n}")


def scalar_product(a, b) -> float:
    """Duality scalar product ``<a, b>`` of a multiform and a multivector.

    Symmetric in its arguments: either order is accepted. Plain numbers
    are scalars and pair with the grade-0 part of the other operand.
    """
    if _is_number(a) and _is_number(b):
        return float(a) * float(b)
    if _is_number(a):
        return float(a) * b.scalar_part()
    if _is_number(b):
        return float(b) * a.scalar_part()
    if isinstance(a, Graded) and a.variance == VECTOR:
        a, b = b, a
    _check_pair(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    lc = large._coeffs
    return sum(c * lc.get(m, 0.0) for m, c in small._coeffs.items())


def _left_sign(a: int, b: int) -> int:
    # <rev(blade a) ^ blade(b \ a), blade b> for a subset of b
    return reversion_sign(a.bit_count()) * reorder_sign(a, b ^ a)


def _right_sign(a: int, b: int) -> int:
    # <blade a, blade(a \ b) ^ rev(blade b)> for b subset of a
    return reversion_sign(b.bit_count()) * reorder_sign(a ^ b, b)


def _contract_left(x: Graded, y: Graded, out_cls) -> Graded:
    out: dict[int, float] = {}
    for ma, ca in x._coeffs.items():
        for mb, cb in y._coeffs.items():
            if ma & mb == ma:
                m = mb ^ ma
                out[m] = out.get(m, 0.0) + _left_sign(ma, mb) * ca * cb
    return out_cls(x.ctx, out)


def _contract_right(x: Graded, y: Graded, out_cls) -> Graded:
    out: dict[int, float] = {}
    for ma, ca in x._coeffs.items():
        for mb, cb in y._coeffs.items():
            if ma & mb == mb:
                m = ma ^ mb
                out[m] = out.get(m, 0.0) + _right_sign(ma, mb) * ca * cb
    return out_cls(x.ctx, out)


def _as(x, variance: str, ctx):
    if _is_number(x):
        cls = Multivector if variance == VECTOR else Multiform
        return cls.scalar(ctx, x)
    return x


def left_contract(phi: Multiform, x: Multivector) -> Multivector:
    """Left contracted product ``<phi, x|`` of a multiform into a multivector."""
    if _is_number(phi):
        phi = _as(phi, FORM, x.ctx)
    if _is_number(x):
        x = _as(x, VECTOR, phi.ctx)
    _check_pair(phi, x)
    return _contract_left(phi, x, Multivector)


def left_contract_form(x: Multivector, phi: Multiform) -> Multiform:
    """Left contracted product ``<x, phi|`` of a multivector into a multiform."""
    if _is_number(x):
        x = _as(x, VECTOR, phi.ctx)
    if _is_number(phi):
        phi = _as(phi, FORM, x.ctx)
    _check_pair(phi, x)
    return _contract_left(x, phi, Multiform)


def right_contract(phi: Multiform, x: Multivector) -> Multiform:
    """Right contracted product ``|phi, x>``; the result is a multiform."""
    if _is_number(phi):
        phi = _as(phi, FORM, x.ctx)
    if _is_number(x):
        x = _as(x, VECTOR, phi.ctx)
    _check_pair(phi, x)
    return _contract_right(phi, x, Multiform)


def right_contract_vec(x: Multivector, phi: Multiform) -> Multivector:
    """Right contracted product ``|x, phi>``; the result is a multivector."""
    if _is_number(x):
        x = _as(x, VECTOR, phi.ctx)
    if _is_number(phi):
        phi = _as(phi, FORM, x.ctx)
    _check_pair(phi, x)
    return _contract_right(x, phi, Multivector)


def exact_det(rows: Sequence[Sequence[float]]) -> float:
    """Determinant by fraction-exact Gaussian elimination, rounded once at the end."""
    a = [[Fraction(v) for v in row] for row in rows]
    size = len(a)
    if any(len(row) != size for row in a):
        raise DomainError("determinant needs a square matrix")
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            return 0.0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, size):
            f = a[r][col] / p
            if f:
                row_r, row_c = a[r], a[col]
                for c in range(col, size):
                    row_r[c] -= f * row_c[c]
    return float(det)


def scalar_product_det_oracle(forms: Sequence[Multiform], vectors: Sequence[Multivector]) -> float:
    """``det[forms[i](vectors[j])]`` for lists of 1-forms and vectors.

    Cross-check for the scalar product of ``forms[0] ^ ... ^ forms[p-1]``
    with ``vectors[0] ^ ... ^ vectors[p-1]``.
    """
    if len(forms) != len(vectors):
        raise DomainError(f"length mismatch: {len(forms)} forms vs {len(vectors)} vectors")
    if not forms:
        raise DomainError("need at least one form/vector pair")
    ctx = forms[0].ctx
    if len(forms) > ctx.n:
        raise DomainError(f"at most {ctx.n} factors in dimension {ctx.n}")
    for f in forms:
        if not isinstance(f, Graded) or f.variance != FORM:
            raise VarianceError("forms must be multiforms")
        if f.grades - {1}:
            raise DomainError("forms must be homogeneous of grade 1")
    for v in vectors:
        if not isinstance(v, Graded) or v.variance != VECTOR:
            raise VarianceError("vectors must be multivectors")
        if v.grades - {1}:
            raise DomainError("vectors must be homogeneous of grade 1")
        if v.ctx != ctx:
            raise DomainError("dimension mismatch")
    fc = [f.components() for f in forms]
    vc = [v.components() for v in vectors]
    matrix = [[sum(a * b for a, b in zip(fi, vj)) for vj in vc] for fi in fc]
    return exact_det(matrix)
