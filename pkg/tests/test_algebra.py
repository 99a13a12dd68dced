from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extkernel.algebra import (
    FORM,
    VECTOR,
    AlgebraContext,
    DomainError,
    GradeSet,
    Multiform,
    Multivector,
    VarianceError,
    grade_involution,
    grade_part,
    gradeset_part,
    render,
    reversion,
    wedge,
    wedge_all,
)

from helpers import elements

C2 = AlgebraContext(2)
C3 = AlgebraContext(3)


class TestContext:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_blade_counts(self, n):
        ctx = AlgebraContext(n)
        assert len(ctx.blades()) == 2**n
        for k in range(n + 1):
            assert len(ctx.blades(k)) == math.comb(n, k) == ctx.dim(k)

    def test_canonical_order_is_grade_then_mask(self):
        assert C3.blades() == [0, 1, 2, 4, 3, 5, 6, 7]

    @pytest.mark.parametrize("n", [0, -1, 13, 2.0, True])
    def test_bad_dimension(self, n):
        with pytest.raises(DomainError):
            AlgebraContext(n)

    def test_grade_out_of_range(self):
        with pytest.raises(DomainError):
            C3.blades(4)

    def test_basis_index_out_of_range(self):
        with pytest.raises(DomainError):
            C2.e(3)


class TestGradeSet:
    def test_iteration_is_sorted(self):
        assert list(GradeSet([2, 0, 1])) == [0, 1, 2]

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            GradeSet([])

    def test_dimension(self):
        assert GradeSet.of(0, 2).dimension(C3) == 4
        assert GradeSet.full(C3).dimension(C3) == 8

    def test_validate_against_context(self):
        with pytest.raises(DomainError):
            GradeSet.of(4).validate(C3)


class TestGradeProjection:
    def test_picks_vector_part(self):
        x = Multivector.scalar(C3, 2) + C3.e(1) - C3.e(3) + C3.e(1, 2)
        assert grade_part(x, 1).identical(C3.e(1) - C3.e(3))

    def test_homogeneous_has_one_grade(self):
        assert grade_part(C3.e(1, 2), 1).identical(Multivector(C3))

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            grade_part(C3.e(1), 5)

    def test_gradeset_part(self):
        x = Multivector.scalar(C3, 2) + C3.e(2) + C3.e(2, 3)
        assert gradeset_part(x, {0, 2}).identical(Multivector.scalar(C3, 2) + C3.e(2, 3))

    @given(elements(C3, Multivector))
    def test_grade_parts_sum_to_whole(self, x):
        total = Multivector(C3)
        for k in range(4):
            total = total + grade_part(x, k)
        assert total.identical(x)

    @given(elements(C3, Multiform), st.integers(0, 3))
    def test_projection_idempotent_and_matches_singleton_set(self, x, k):
        p = grade_part(x, k)
        assert grade_part(p, k).identical(p)
        assert gradeset_part(x, {k}).identical(p)
        assert gradeset_part(x, GradeSet.full(C3)).identical(x)


class TestInvolutions:
    def test_grade_involution_examples(self):
        assert grade_involution(Multivector.scalar(C2, 3)).identical(Multivector.scalar(C2, 3))
        assert grade_involution(C2.e(1)).identical(-C2.e(1))
        assert grade_involution(C2.e(1, 2)).identical(C2.e(1, 2))

    def test_reversion_examples(self):
        x = Multivector.scalar(C3, 1) + C3.e(2)
        assert reversion(x).identical(x)
        assert reversion(C3.e(1, 2)).identical(-C3.e(1, 2))
        assert reversion(C3.e(1, 2, 3)).identical(-C3.e(1, 2, 3))

    @given(elements(AlgebraContext(4), Multivector))
    def test_both_are_involutions(self, x):
        assert grade_involution(grade_involution(x)).identical(x)
        assert reversion(reversion(x)).identical(x)

    @given(elements(C3, Multiform), elements(C3, Multiform))
    def test_reversion_is_anti_automorphism(self, a, b):
        assert reversion(a ^ b) == reversion(b) ^ reversion(a)

    @given(elements(C3, Multivector), elements(C3, Multivector))
    def test_grade_involution_is_automorphism(self, a, b):
        assert grade_involution(a ^ b) == grade_involution(a) ^ grade_involution(b)


class TestWedge:
    def test_transposition(self):
        assert wedge(C2.e(1), C2.e(2)).identical(C2.e(1, 2))
        assert wedge(C2.e(2), C2.e(1)).identical(-C2.e(1, 2))

    def test_nilpotent(self):
        assert wedge(C2.e(1), C2.e(1)).identical(Multivector(C2))

    def test_three_factors(self):
        assert wedge(C3.e(1, 3), C3.e(2)).identical(-C3.e(1, 2, 3))

    def test_scalars(self):
        assert wedge(2, 3) == 6
        assert wedge(2, C2.w(1)).identical(2 * C2.w(1))

    def test_mixed_variance_rejected(self):
        with pytest.raises(VarianceError):
            wedge(C2.e(1), C2.w(1))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(DomainError):
            wedge(C2.e(1), C3.e(1))

    def test_wedge_all(self):
        assert wedge_all(C3, [C3.w(3), C3.w(1), C3.w(2)], FORM).identical(C3.w(1, 2, 3))
        assert wedge_all(C3, [], VECTOR).identical(Multivector.scalar(C3, 1))

    @given(elements(C3, Multivector), elements(C3, Multivector), elements(C3, Multivector))
    def test_associative(self, a, b, c):
        assert ((a ^ b) ^ c).identical(a ^ (b ^ c))

    @given(st.data(), st.integers(0, 4), st.integers(0, 4))
    def test_graded_commutative(self, data, p, q):
        ctx = AlgebraContext(4)
        a = data.draw(elements(ctx, Multiform, {p}))
        b = data.draw(elements(ctx, Multiform, {q}))
        assert (a ^ b).identical((b ^ a) * (-1) ** (p * q))

    @given(elements(C3, Multivector), elements(C3, Multivector), elements(C3, Multivector), st.integers(-3, 3))
    def test_bilinear(self, a, b, c, s):
        assert ((a + s * b) ^ c).identical((a ^ c) + s * (b ^ c))


class TestRendering:
    @pytest.mark.parametrize(
        "x, text",
        [
            (Multivector(C2), "0"),
            (C2.e(2), "e2"),
            (2 * C2.e(1, 2), "2 e1^e2"),
            (3 - C2.e(1) - 2 * C2.e(1, 2), "3 - e1 - 2 e1^e2"),
            (0.5 * C2.w(1) + C2.w(2), "0.5 w1 + w2"),
            (Multiform.scalar(C2, -1), "-1"),
        ],
    )
    def test_canonical_text(self, x, text):
        assert render(x) == text

    def test_terms_in_canonical_order(self):
        x = C3.e(2, 3) + C3.e(1, 2) + C3.e(3) + 1
        assert render(x) == "1 + e3 + e1^e2 + e2^e3"

    def test_zero_coefficients_dropped(self):
        assert len(C2.e(1) - C2.e(1)) == 0


class TestArithmetic:
    def test_adding_mixed_variance_fails(self):
        with pytest.raises(VarianceError):
            C2.e(1) + C2.w(1)

    def test_elements_are_immutable(self):
        x = C2.e(1)
        with pytest.raises(AttributeError):
            x.ctx = C3

    def test_tolerant_equality(self):
        assert C2.e(1) * (1 + 1e-13) == C2.e(1)
        assert not (C2.e(1) * (1 + 1e-13)).identical(C2.e(1))
        assert C2.e(1) != C2.w(1)

    @given(elements(C3, Multivector), st.integers(1, 5))
    def test_scalar_division_inverts_multiplication(self, x, s):
        assert ((x * s) / s) == x
