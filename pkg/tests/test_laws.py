from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from extkernel.algebra import FORM, VECTOR, AlgebraContext, Multiform, Multivector
from extkernel.duality import scalar_product
from extkernel.laws import (
    extended_duality_laws,
    extended_equivariance,
    generalized_derivation,
    generalized_duality_laws,
    induced_extended,
    induced_generalized,
)
from extkernel.operators import LinearMap, SingularOperatorError, extend

from helpers import any_variance, elements, matrices

TOL = 1e-9

C3 = AlgebraContext(3)
C4 = AlgebraContext(4)


def _all_small(gaps, tol=TOL):
    return all(v <= tol for v in gaps.values())


@st.composite
def invertible(draw, ctx, variance=None):
    m = draw(matrices(ctx.n, -2, 2))
    assume(abs(np.linalg.det(m)) >= 0.1)
    v = variance if variance is not None else draw(any_variance())
    return LinearMap(ctx, m, v)


@st.composite
def arbitrary(draw, ctx):
    return LinearMap(ctx, draw(matrices(ctx.n)), draw(any_variance()))


class TestInducedAction:
    @given(invertible(C3), elements(C3, Multiform), elements(C3, Multivector))
    def test_extended_preserves_pairing(self, op, phi, x):
        a, b = induced_extended(op, FORM)(phi), induced_extended(op, VECTOR)(x)
        assert abs(scalar_product(a, b) - scalar_product(phi, x)) <= TOL

    @given(arbitrary(C3), elements(C3, Multiform), elements(C3, Multivector))
    def test_generalized_annihilates_pairing(self, op, phi, x):
        a, b = induced_generalized(op, FORM)(phi), induced_generalized(op, VECTOR)(x)
        assert abs(scalar_product(a, x) + scalar_product(phi, b)) <= TOL

    def test_same_variance_is_plain_lift(self):
        op = LinearMap.from_rows([[1, 1, 0], [0, 2, 0], [0, 0, 1]], FORM)
        assert induced_extended(op, FORM)(C3.w(1, 2)).identical(extend(op)(C3.w(1, 2)))


class TestExtendedLaws:
    @given(invertible(C4), elements(C4, Multiform), elements(C4, Multivector))
    def test_duality_products(self, op, phi, x):
        assert _all_small(extended_duality_laws(op, phi, x))

    @given(invertible(C3), elements(C3, Multiform), elements(C3, Multivector))
    def test_equivariance_of_every_product(self, op, phi, x):
        assert _all_small(extended_equivariance(op, phi, x))

    def test_singular_operator_rejected(self):
        op = LinearMap(C3, np.diag([1.0, 1.0, 0.0]))
        with pytest.raises(SingularOperatorError):
            extended_duality_laws(op, C3.w(1), C3.e(1, 2))


class TestGeneralizedLaws:
    @given(arbitrary(C4), elements(C4, Multiform), elements(C4, Multivector))
    def test_duality_products(self, op, phi, x):
        assert _all_small(generalized_duality_laws(op, phi, x))

    @given(arbitrary(C3), elements(C3, Multiform), elements(C3, Multivector))
    def test_derivation_over_every_product(self, op, phi, x):
        assert _all_small(generalized_derivation(op, phi, x))

    @pytest.mark.parametrize(
        "rows",
        [
            np.zeros((3, 3)),
            [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
            [[1, 1, 0], [1, 1, 0], [0, 0, 0]],
        ],
        ids=["zero", "nilpotent", "rank-one"],
    )
    @pytest.mark.parametrize("variance", [VECTOR, FORM])
    def test_hold_without_invertibility(self, rows, variance):
        op = LinearMap(C3, np.asarray(rows, float), variance)
        rng = np.random.default_rng(11)
        for _ in range(10):
            phi = Multiform(C3, {m: int(rng.integers(-3, 4)) for m in C3.blades()})
            x = Multivector(C3, {m: int(rng.integers(-3, 4)) for m in C3.blades()})
            assert all(v == 0 for v in generalized_duality_laws(op, phi, x).values())
            assert all(v == 0 for v in generalized_derivation(op, phi, x).values())
