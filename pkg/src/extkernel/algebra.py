"""Multivectors and multiforms over a finite-dimensional real space.

Basis blades are encoded as bitmasks over ``{0, ..., n-1}``: bit ``j`` set
means ``e_{j+1}`` (or ``w_{j+1}`` for forms) is a factor. Coefficients are
stored relative to the sorted wedge basis, one number per blade, with no
``1/k!`` normalisation.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from types import MappingProxyType
from typing import ClassVar, Iterable, Iterator, Mapping, Union

MAX_DIM = 12

VECTOR = "vector"
FORM = "form"

REL_TOL = 1e-9
ABS_TOL = 1e-9


class AlgebraError(Exception):
    """Base class for errors raised by the kernel."""


class DomainError(AlgebraError, ValueError):
    """An argument lies outside the domain of an operation."""


class VarianceError(AlgebraError, TypeError):
    """Multivectors and multiforms were mixed where the variance must agree."""


def flip(variance: str) -> str:
    return FORM if variance == VECTOR else VECTOR


# ---------------------------------------------------------------------------
# blade arithmetic
# ---------------------------------------------------------------------------


def grade_of(mask: int) -> int:
    return mask.bit_count()


def blade_indices(mask: int) -> tuple[int, ...]:
    """Zero-based factor indices of a blade, ascending."""
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def blade_mask(indices: Iterable[int]) -> int:
    mask = 0
    for j in indices:
        if mask >> j & 1:
            raise DomainError(f"repeated factor index {j}")
        mask |= 1 << j
    return mask


def blade_key(mask: int) -> tuple[int, int]:
    """Canonical ordering key: grade first, then mask."""
    return (mask.bit_count(), mask)


def reorder_sign(a: int, b: int) -> int:
    """Sign of ``blade(a) ^ blade(b)`` relative to ``blade(a | b)``.

    Returns 0 when the blades share a factor. Otherwise the sign is the
    parity of the number of transpositions needed to sort the concatenated
    index lists, i.e. the number of pairs ``(i in a, j in b)`` with ``i > j``.
    """
    if a & b:
        return 0
    swaps = 0
    a >>= 1
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


def involution_sign(k: int) -> int:
    return -1 if k & 1 else 1


def reversion_sign(k: int) -> int:
    return -1 if (k * (k - 1) // 2) & 1 else 1


# ---------------------------------------------------------------------------
# context and grade sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraContext:
    """Dimension ``n`` of the underlying space, with its canonical dual frame."""

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise DomainError(f"dimension must be an integer, got {self.n!r}")
        if not 1 <= self.n <= MAX_DIM:
            raise DomainError(f"dimension must lie in 1..{MAX_DIM}, got {self.n}")

    @property
    def size(self) -> int:
        return 1 << self.n

    def dim(self, k: int) -> int:
        """Dimension of the grade-``k`` subspace."""
        if not 0 <= k <= self.n:
            return 0
        return math.comb(self.n, k)

    def blades(self, k: int | None = None) -> list[int]:
        """All blade masks (of grade ``k`` when given) in canonical order."""
        if k is None:
            return sorted(range(self.size), key=blade_key)
        self.check_grade(k)
        return sorted((m for m in range(self.size) if m.bit_count() == k))

    def check_grade(self, k: int) -> None:
        if not 0 <= k <= self.n:
            raise DomainError(f"grade {k} out of range 0..{self.n}")

    def scalar(self, value: float = 1.0, variance: str = VECTOR) -> "Graded":
        return element_class(variance)(self, {0: value})

    def e(self, *indices: int) -> "Multivector":
        """Basis blade ``e_{i1} ^ ... ^ e_{ik}`` from one-based indices, in the given order."""
        return Multivector.from_indices(self, indices)

    def w(self, *indices: int) -> "Multiform":
        """Basis blade ``w_{i1} ^ ... ^ w_{ik}`` of the dual frame, one-based indices."""
        return Multiform.from_indices(self, indices)


@dataclass(frozen=True)
class GradeSet:
    """A sum of homogeneous subspaces, identified by its grades."""

    grades: frozenset

    def __init__(self, grades: Iterable[int]):
        gs = frozenset(int(k) for k in grades)
        if not gs:
            raise DomainError("a grade set must be nonempty")
        if min(gs) < 0:
            raise DomainError(f"negative grade in {sorted(gs)}")
        object.__setattr__(self, "grades", gs)

    @classmethod
    def of(cls, *grades: int) -> "GradeSet":
        return cls(grades)

    @classmethod
    def full(cls, ctx: AlgebraContext) -> "GradeSet":
        return cls(range(ctx.n + 1))

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.grades))

    def __contains__(self, k: object) -> bool:
        return k in self.grades

    def __len__(self) -> int:
        return len(self.grades)

    def validate(self, ctx: AlgebraContext) -> None:
        if max(self.grades) > ctx.n:
            raise DomainError(f"grade set {sorted(self.grades)} exceeds dimension {ctx.n}")

    def blades(self, ctx: AlgebraContext) -> list[int]:
        self.validate(ctx)
        return [m for m in ctx.blades() if m.bit_count() in self.grades]

    def dimension(self, ctx: AlgebraContext) -> int:
        self.validate(ctx)
        return sum(ctx.dim(k) for k in self.grades)

    def __repr__(self) -> str:
        return "GradeSet({" + ", ".join(map(str, self)) + "})"


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

Scalar = Union[int, float]


def _is_number(x: object) -> bool:
    return isinstance(x, numbers.Real) and not isinstance(x, bool)


def format_coeff(c: float) -> str:
    return format(float(c) + 0.0, ".12g")


class Graded:
    """Shared machinery for multivectors and multiforms.

    Instances are immutable sparse maps from blade mask to coefficient.
    Exact zeros are dropped on construction.
    """

    variance: ClassVar[str]
    prefix: ClassVar[str]

    __slots__ = ("ctx", "_coeffs")

    def __init__(self, ctx: AlgebraContext, coeffs: Mapping[int, float] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        size = ctx.size
        store: dict[int, float] = {}
        for mask, c in items:
            if not 0 <= mask < size:
                raise DomainError(f"blade mask {mask} out of range for dimension {ctx.n}")
            c = float(c)
            if c != 0.0:
                store[mask] = store.get(mask, 0.0) + c
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "_coeffs", {m: c for m, c in store.items() if c != 0.0})

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # construction -----------------------------------------------------

    @classmethod
    def blade(cls, ctx: AlgebraContext, mask: int, coeff: float = 1.0):
        return cls(ctx, {mask: coeff})

    @classmethod
    def from_indices(cls, ctx: AlgebraContext, indices: Iterable[int]):
        """Wedge of basis elements given by one-based indices, in the order given."""
        idx = [i - 1 for i in indices]
        for i in idx:
            if not 0 <= i < ctx.n:
                raise DomainError(f"basis index {i + 1} out of range 1..{ctx.n}")
        mask, sign = 0, 1
        for i in idx:
            s = reorder_sign(mask, 1 << i)
            if s == 0:
                return cls(ctx)
            sign *= s
            mask |= 1 << i
        return cls(ctx, {mask: sign})

    @classmethod
    def scalar(cls, ctx: AlgebraContext, value: float):
        return cls(ctx, {0: value})

    @classmethod
    def from_vector(cls, ctx: AlgebraContext, components: Iterable[float]):
        """Grade-1 element from its ``n`` components in the canonical frame."""
        comps = list(components)
        if len(comps) != ctx.n:
            raise DomainError(f"expected {ctx.n} components, got {len(comps)}")
        return cls(ctx, {1 << j: c for j, c in enumerate(comps)})

    def _new(self, coeffs) -> "Graded":
        return type(self)(self.ctx, coeffs)

    # inspection -------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[int, float]:
        return MappingProxyType(self._coeffs)

    def coeff(self, mask: int) -> float:
        return self._coeffs.get(mask, 0.0)

    def __iter__(self) -> Iterator[tuple[int, float]]:
        for m in sorted(self._coeffs, key=blade_key):
            yield m, self._coeffs[m]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    @property
    def grades(self) -> frozenset:
        """Grades carrying a nonzero coefficient; empty for zero."""
        return frozenset(m.bit_count() for m in self._coeffs)

    def is_homogeneous(self) -> bool:
        return len(self.grades) <= 1

    def scalar_part(self) -> float:
        return self._coeffs.get(0, 0.0)

    def components(self) -> list[float]:
        """The ``n`` grade-1 components in the canonical frame."""
        return [self._coeffs.get(1 << j, 0.0) for j in range(self.ctx.n)]

    def norm_inf(self) -> float:
        return max((abs(c) for c in self._coeffs.values()), default=0.0)

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Graded":
        if _is_number(other):
            return self._new({0: other})
        if isinstance(other, Graded):
            if other.variance != self.variance:
                raise VarianceError(
                    f"cannot combine a {self.variance} element with a {other.variance} element"
                )
            if other.ctx != self.ctx:
                raise DomainError(f"dimension mismatch: {self.ctx.n} vs {other.ctx.n}")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for m, c in other._coeffs.items():
            out[m] = out.get(m, 0.0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self._coeffs.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if _is_number(other):
            return self._new({m: c * other for m, c in self._coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_number(other):
            return self._new({m: c / other for m, c in self._coeffs.items()})
        return NotImplemented

    def __xor__(self, other):
        return wedge(self, other)

    def __rxor__(self, other):
        if _is_number(other):
            return self * other
        return NotImplemented

    # unary operators --------------------------------------------------

    def grade_part(self, k: int):
        return grade_part(self, k)

    def gradeset_part(self, grades: GradeSet | Iterable[int]):
        return gradeset_part(self, grades)

    def grade_involution(self):
        return grade_involution(self)

    def reversion(self):
        return reversion(self)

    __invert__ = reversion

    # comparison -------------------------------------------------------

    def isclose(self, other, rel_tol: float = REL_TOL, abs_tol: float = ABS_TOL) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        scale = max(self.norm_inf(), other.norm_inf())
        tol = max(abs_tol, rel_tol * scale)
        return (self - other).norm_inf() <= tol

    def __eq__(self, other):
        if not (_is_number(other) or isinstance(other, Graded)):
            return NotImplemented
        if isinstance(other, Graded) and other.variance != self.variance:
            return False
        return self.isclose(other)

    __hash__ = None

    def identical(self, other: "Graded") -> bool:
        """Exact (bitwise) equality of the coefficient maps."""
        return (
            type(self) is type(other)
            and self.ctx == other.ctx
            and self._coeffs == other._coeffs
        )

    # rendering --------------------------------------------------------

    def blade_name(self, mask: int) -> str:
        if mask == 0:
            return "1"
        return "^".join(f"{self.prefix}{j + 1}" for j in blade_indices(mask))

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.ctx.n}, {render(self)!r})"


class Multivector(Graded):
    """Element of the exterior algebra of the space (basis ``e1, e2, ...``)."""

    __slots__ = ()
    variance = VECTOR
    prefix = "e"


class Multiform(Graded):
    """Element of the exterior algebra of the dual space (basis ``w1, w2, ...``)."""

    __slots__ = ()
    variance = FORM
    prefix = "w"


def element_class(variance: str) -> type[Graded]:
    if variance == VECTOR:
        return Multivector
    if variance == FORM:
        return Multiform
    raise ValueError(f"unknown variance {variance!r}")


def dual_blade(x: Graded) -> Graded:
    """Same coefficients, opposite variance (``e_B`` <-> ``w_B``)."""
    return element_class(flip(x.variance))(x.ctx, x._coeffs)


def render(x: Graded) -> str:
    """Canonical text: terms by (grade, mask), coefficients to 12 significant digits."""
    parts: list[str] = []
    for mask, c in x:
        neg = c < 0
        mag = -c if neg else c
        name = x.blade_name(mask)
        if mask == 0:
            body = format_coeff(mag)
        elif mag == 1.0:
            body = name
        else:
            body = f"{format_coeff(mag)} {name}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# grade operators and the exterior product
# ---------------------------------------------------------------------------


def grade_part(x: Graded, k: int) -> Graded:
    """The grade-``k`` component of ``x``."""
    x.ctx.check_grade(k)
    return x._new({m: c for m, c in x._coeffs.items() if m.bit_count() == k})


def gradeset_part(x: Graded, grades: GradeSet | Iterable[int]) -> Graded:
    """Sum of the grade parts of ``x`` over a grade set."""
    if not isinstance(grades, GradeSet):
        grades = GradeSet(grades)
    grades.validate(x.ctx)
    return x._new({m: c for m, c in x._coeffs.items() if m.bit_count() in grades})


def grade_involution(x: Graded) -> Graded:
    return x._new({m: involution_sign(m.bit_count()) * c for m, c in x._coeffs.items()})


def reversion(x: Graded) -> Graded:
    return x._new({m: reversion_sign(m.bit_count()) * c for m, c in x._coeffs.items()})


def wedge(a: Graded | Scalar, b: Graded | Scalar) -> Graded | float:
    """Exterior product of two elements of the same variance.

    Plain numbers are treated as scalars of whichever variance the other
    operand has.
    """
    if _is_number(a) and _is_number(b):
        return float(a) * float(b)
    if _is_number(a):
        return b * a
    if _is_number(b):
        return a * b
    if not isinstance(a, Graded) or not isinstance(b, Graded):
        raise TypeError("wedge expects multivectors or multiforms")
    if a.variance != b.variance:
        raise VarianceError("the exterior product needs operands of the same variance")
    if a.ctx != b.ctx:
        raise DomainError(f"dimension mismatch: {a.ctx.n} vs {b.ctx.n}")
    out: dict[int, float] = {}
    for ma, ca in a._coeffs.items():
        for mb, cb in b._coeffs.items():
            s = reorder_sign(ma, mb)
            if s:
                m = ma | mb
                out[m] = out.get(m, 0.0) + s * ca * cb
    return a._new(out)


def wedge_all(ctx: AlgebraContext, factors: Iterable[Graded], variance: str = VECTOR) -> Graded:
    """Left-to-right exterior product; the empty product is the scalar 1."""
    acc = element_class(variance).scalar(ctx, 1.0)
    for f in factors:
        acc = wedge(acc, f)
    return acc
