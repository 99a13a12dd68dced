"""Random generators and a literal (pointwise) route for extensor actions."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from extkernel.algebra import FORM, VECTOR, AlgebraContext, GradeSet, Multiform, Multivector, element_class
from extkernel.extensors import Extensor, ExtensorSignature, basis
from extkernel.operators import LinearMap, adjoint, contragredient, extend, generalize, inverse


def rand_element(ctx, cls, rng, density=0.5, lo=-3, hi=3, grades=None):
    blades = [m for m in ctx.blades() if grades is None or m.bit_count() in grades]
    return cls(ctx, {m: int(rng.integers(lo, hi + 1)) for m in blades if rng.random() < density})


def rand_homogeneous(ctx, cls, k, rng, lo=-3, hi=3):
    return cls(ctx, {m: int(rng.integers(lo, hi + 1)) for m in ctx.blades(k)})


def rand_matrix(n, rng, invertible=False, lo=-3, hi=3):
    while True:
        m = rng.integers(lo, hi + 1, size=(n, n)).astype(float)
        if not invertible or abs(np.linalg.det(m)) >= 0.1:
            return m


def rand_op(ctx, rng, variance=VECTOR, invertible=False):
    return LinearMap(ctx, rand_matrix(ctx.n, rng, invertible), variance)


def rand_gradeset(ctx, rng, max_size=2):
    size = int(rng.integers(1, max_size + 1))
    return GradeSet(rng.choice(ctx.n + 1, size=min(size, ctx.n + 1), replace=False).tolist())


def rand_extensor(ctx, rng, k=1, l=1, out=VECTOR, lo=-2, hi=2):
    sig = ExtensorSignature(
        tuple(rand_gradeset(ctx, rng) for _ in range(k)),
        tuple(rand_gradeset(ctx, rng) for _ in range(l)),
        out,
        rand_gradeset(ctx, rng),
    )
    return Extensor(ctx, sig, rng.integers(lo, hi + 1, size=sig.shape(ctx)))


def is_zero(x, tol=1e-9):
    return x.norm_inf() <= tol


# ---------------------------------------------------------------------------
# literal route: tabulate the defining formula argument by argument
# ---------------------------------------------------------------------------


def _induced_ext(op, variance):
    return extend(op) if variance == op.variance else extend(contragredient(op))


def literal_act_extended(op, tau):
    """Tabulate ``A_out(tau(A^-1 X.., A^-1 Phi..))`` slot by slot.

    Same-variance slots get ext(op^-1), opposite-variance slots get
    ext(op^T) (the inverse of the induced action there).
    """
    same_in = extend(inverse(op))
    opp_in = extend(adjoint(op))
    out = _induced_ext(op, tau.sig.output_variance)
    slots = tau.sig.slots()

    def fn(*args):
        moved = [same_in(a) if v == op.variance else opp_in(a) for (v, _), a in zip(slots, args)]
        return out(tau(*moved))

    return Extensor.from_callable(tau.ctx, tau.sig, fn)


def literal_act_generalized(op, tau):
    g, ga = generalize(op), generalize(adjoint(op))
    slots = tau.sig.slots()

    def fn(*args):
        val = tau(*args)
        acc = g(val) if tau.sig.output_variance == op.variance else -ga(val)
        for i, (v, _) in enumerate(slots):
            moved = list(args)
            if v == op.variance:
                moved[i] = g(args[i])
                acc = acc - tau(*moved)
            else:
                moved[i] = ga(args[i])
                acc = acc + tau(*moved)
        return acc

    return Extensor.from_callable(tau.ctx, tau.sig, fn)


# ---------------------------------------------------------------------------
# hypothesis strategies
# ---------------------------------------------------------------------------

coeffs = st.integers(min_value=-4, max_value=4)


@st.composite
def elements(draw, ctx, cls, grades=None):
    blades = [m for m in ctx.blades() if grades is None or m.bit_count() in grades]
    d = draw(st.dictionaries(st.sampled_from(blades), coeffs, max_size=len(blades)))
    return cls(ctx, d)


@st.composite
def homogeneous(draw, ctx, cls, k):
    return draw(elements(ctx, cls, {k}))


@st.composite
def contexts(draw, lo=1, hi=5):
    return AlgebraContext(draw(st.integers(lo, hi)))


@st.composite
def matrices(draw, n, lo=-3, hi=3):
    rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n))
    return np.array(rows, dtype=float)


def any_variance():
    return st.sampled_from([VECTOR, FORM])


__all__ = [
    "rand_element",
    "rand_homogeneous",
    "rand_matrix",
    "rand_op",
    "rand_gradeset",
    "rand_extensor",
    "literal_act_extended",
    "literal_act_generalized",
    "elements",
    "homogeneous",
    "contexts",
    "matrices",
    "any_variance",
    "Multivector",
    "Multiform",
    "element_class",
    "basis",
]
