from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from extkernel.algebra import AlgebraContext, DomainError, Multiform, Multivector, VarianceError, reversion, wedge_all
from extkernel.duality import (
    exact_det,
    left_contract,
    left_contract_form,
    right_contract,
    right_contract_vec,
    scalar_product,
    scalar_product_det_oracle,
)

from helpers import elements

C2 = AlgebraContext(2)
C3 = AlgebraContext(3)
C4 = AlgebraContext(4)


class TestScalarProduct:
    def test_scalars_multiply(self):
        assert scalar_product(Multiform.scalar(C2, 3), Multivector.scalar(C2, -2)) == -6

    def test_form_on_vector(self):
        w = C2.w(1) + 2 * C2.w(2)
        v = 3 * C2.e(1) + 4 * C2.e(2)
        assert scalar_product(w, v) == 11

    def test_bivector_pairing_is_determinant(self):
        phi = (C2.w(1) + C2.w(2)) ^ C2.w(2)
        assert scalar_product(phi, C2.e(1, 2)) == 1

    def test_argument_order_does_not_matter(self):
        assert scalar_product(C2.e(1), C2.w(1)) == scalar_product(C2.w(1), C2.e(1)) == 1

    def test_cross_grade_vanishes(self):
        assert scalar_product(C3.w(1), C3.e(1, 2)) == 0

    def test_like_variance_rejected(self):
        with pytest.raises(VarianceError):
            scalar_product(C2.e(1), C2.e(2))

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            scalar_product(C2.w(1), C3.e(1))

    @given(elements(C3, Multiform), elements(C3, Multivector))
    def test_blade_basis_is_biorthonormal(self, phi, x):
        expected = sum(c * x.coeff(m) for m, c in phi)
        assert scalar_product(phi, x) == expected


class TestDeterminantOracle:
    def test_identity(self):
        assert scalar_product_det_oracle([C2.w(1), C2.w(2)], [C2.e(1), C2.e(2)]) == 1

    def test_repeated_row(self):
        assert scalar_product_det_oracle([C2.w(1), C2.w(1)], [C2.e(1), C2.e(2)]) == 0

    def test_triangular(self):
        assert scalar_product_det_oracle([C2.w(1) + C2.w(2), C2.w(2)], [C2.e(1), C2.e(2)]) == 1

    def test_exact_det_integer(self):
        assert exact_det([[2, 0, 1], [1, 3, 2], [1, 1, 2]]) == 6
        assert exact_det([[2, 0, 1], [1, 3, 2], [1, 1, 1]]) == 0

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            scalar_product_det_oracle([C2.w(1)], [C2.e(1), C2.e(2)])

    @given(st.data(), st.integers(1, 3))
    def test_agrees_with_wedge_pairing(self, data, p):
        forms = [data.draw(elements(C3, Multiform, {1})) for _ in range(p)]
        vecs = [data.draw(elements(C3, Multivector, {1})) for _ in range(p)]
        lhs = scalar_product(wedge_all(C3, forms, "form"), wedge_all(C3, vecs, "vector"))
        assert lhs == scalar_product_det_oracle(forms, vecs)


class TestContractionExamples:
    def test_left_vector_valued(self):
        assert left_contract(C2.w(1), C2.e(1, 2)).identical(C2.e(2))
        assert left_contract(Multiform.scalar(C2, 3), C2.e(1)).identical(3 * C2.e(1))
        assert left_contract(C2.w(1, 2), C2.e(1, 2)).identical(Multivector.scalar(C2, -1))

    def test_left_form_valued(self):
        assert left_contract_form(C2.e(1), C2.w(1, 2)).identical(C2.w(2))
        assert left_contract_form(Multivector.scalar(C2, 3), C2.w(2)).identical(3 * C2.w(2))
        assert left_contract_form(C2.e(1, 2), C2.w(1, 2)).identical(Multiform.scalar(C2, -1))

    def test_right_form_valued(self):
        assert right_contract(C2.w(1, 2), C2.e(2)).identical(C2.w(1))
        assert right_contract(C2.w(1), C2.e(1, 2)).identical(Multiform(C2))
        assert right_contract(C2.w(1, 2), C2.e(1, 2)).identical(Multiform.scalar(C2, -1))

    def test_right_vector_valued(self):
        assert right_contract_vec(C2.e(1, 2), C2.w(1)).identical(-C2.e(2))
        assert right_contract_vec(C2.e(1), C2.w(1, 2)).identical(Multivector(C2))
        assert right_contract_vec(C2.e(1, 2), C2.w(1, 2)).identical(Multivector.scalar(C2, -1))

    def test_larger_left_than_right_vanishes(self):
        assert left_contract(C3.w(1, 2), C3.e(1)).identical(Multivector(C3))

    @pytest.mark.parametrize("fn", [left_contract, right_contract])
    def test_argument_variance_enforced(self, fn):
        with pytest.raises(VarianceError):
            fn(C2.e(1), C2.e(1, 2))


def _homog(data, ctx, cls, k):
    return data.draw(elements(ctx, cls, {k}))


class TestAdjunction:
    """Contractions are the adjoints of wedging with the reversed argument."""

    @given(st.data())
    def test_left_vector_valued(self, data):
        phi = data.draw(elements(C4, Multiform))
        x = data.draw(elements(C4, Multivector))
        psi = data.draw(elements(C4, Multiform))
        assert scalar_product(left_contract(phi, x), psi) == scalar_product(x, reversion(phi) ^ psi)

    @given(st.data())
    def test_left_form_valued(self, data):
        x = data.draw(elements(C4, Multivector))
        phi = data.draw(elements(C4, Multiform))
        y = data.draw(elements(C4, Multivector))
        assert scalar_product(left_contract_form(x, phi), y) == scalar_product(phi, reversion(x) ^ y)

    @given(st.data())
    def test_right_form_valued(self, data):
        phi = data.draw(elements(C4, Multiform))
        x = data.draw(elements(C4, Multivector))
        y = data.draw(elements(C4, Multivector))
        assert scalar_product(y, right_contract(phi, x)) == scalar_product(y ^ reversion(x), phi)

    @given(st.data())
    def test_right_vector_valued(self, data):
        x = data.draw(elements(C4, Multivector))
        phi = data.draw(elements(C4, Multiform))
        psi = data.draw(elements(C4, Multiform))
        assert scalar_product(psi, right_contract_vec(x, phi)) == scalar_product(psi ^ reversion(phi), x)


class TestExchange:
    @given(st.data(), st.integers(0, 4), st.integers(0, 4))
    def test_left_and_right_differ_by_sign(self, data, p, q):
        p, q = min(p, q), max(p, q)
        sign = (-1) ** (p * (q - p))
        phi = _homog(data, C4, Multiform, p)
        x = _homog(data, C4, Multivector, q)
        assert left_contract(phi, x).identical(sign * right_contract_vec(x, phi))
        x_small = _homog(data, C4, Multivector, p)
        phi_big = _homog(data, C4, Multiform, q)
        assert left_contract_form(x_small, phi_big).identical(sign * right_contract(phi_big, x_small))


class TestStructure:
    @given(elements(C3, Multiform), elements(C3, Multiform), elements(C3, Multivector), st.integers(-3, 3))
    def test_contractions_bilinear(self, a, b, x, s):
        assert left_contract(a + s * b, x).identical(left_contract(a, x) + s * left_contract(b, x))
        assert right_contract(a + s * b, x).identical(right_contract(a, x) + s * right_contract(b, x))

    @given(elements(C3, Multivector))
    def test_scalar_one_is_identity(self, x):
        one = Multiform.scalar(C3, 1)
        assert left_contract(one, x).identical(x)
        assert right_contract_vec(x, one).identical(x)

    @given(st.data(), st.integers(0, 3), st.integers(0, 3))
    def test_output_grade(self, data, p, q):
        phi = _homog(data, C3, Multiform, p)
        x = _homog(data, C3, Multivector, q)
        out = left_contract(phi, x)
        assert out.grades <= ({q - p} if q >= p else set())
        out = right_contract(phi, x)
        assert out.grades <= ({p - q} if p >= q else set())

    @given(elements(C3, Multivector))
    def test_pairing_nondegenerate(self, x):
        # a nonzero element is detected by some dual basis blade
        vals = [scalar_product(Multiform.blade(C3, m), x) for m in C3.blades()]
        assert any(vals) == bool(x)

    @given(st.data())
    def test_vector_contraction_is_antiderivation(self, data):
        w = data.draw(elements(C3, Multiform, {1}))
        a = data.draw(elements(C3, Multivector))
        b = data.draw(elements(C3, Multivector))
        lhs = left_contract(w, a ^ b)
        rhs = (left_contract(w, a) ^ b) + (a.grade_involution() ^ left_contract(w, b))
        assert lhs.identical(rhs)


def test_pairing_matches_numpy_determinant_on_grade_two():
    rng = np.random.default_rng(3)
    a = rng.integers(-3, 4, size=(2, 3))
    b = rng.integers(-3, 4, size=(3, 2))
    forms = [Multiform.from_vector(C3, r) for r in a]
    vecs = [Multivector.from_vector(C3, c) for c in b.T]
    assert np.isclose(scalar_product(forms[0] ^ forms[1], vecs[0] ^ vecs[1]), np.linalg.det(a @ b))
