from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given

from extkernel.algebra import FORM, VECTOR, AlgebraContext, Multiform, Multivector
from extkernel.duality import left_contract, left_contract_form, right_contract, right_contract_vec, scalar_product
from extkernel.operators import LinearMap, extend, generalize
from extkernel.oracle import (
    TensorRep,
    alternate,
    from_tensor,
    oracle_extend,
    oracle_generalize,
    oracle_left_contract,
    oracle_left_contract_form,
    oracle_right_contract,
    oracle_right_contract_vec,
    oracle_scalar_product,
    random_frame,
    tensor_wedge,
    to_tensor,
)

from helpers import elements, homogeneous, matrices, rand_element, rand_matrix

C2 = AlgebraContext(2)
C3 = AlgebraContext(3)

CONTRACTIONS = [
    (left_contract, oracle_left_contract, FORM),
    (left_contract_form, oracle_left_contract_form, VECTOR),
    (right_contract, oracle_right_contract, FORM),
    (right_contract_vec, oracle_right_contract_vec, VECTOR),
]


def _args(first_variance, a, b):
    # a is a form, b a vector; reorder for the product's signature
    return (a, b) if first_variance == FORM else (b, a)


class TestTensors:
    def test_bivector_components(self):
        t = to_tensor(C2.e(1, 2)).components
        assert t[0, 1] == 1 and t[1, 0] == -1 and t[0, 0] == t[1, 1] == 0

    @given(homogeneous(C3, Multivector, 2))
    def test_round_trip(self, x):
        assert from_tensor(to_tensor(x, 2)).identical(x)

    def test_zero_array(self):
        assert from_tensor(TensorRep(C3, 2, np.zeros((3, 3)))).identical(Multivector(C3))

    def test_rejects_non_antisymmetric(self):
        with pytest.raises(ValueError):
            TensorRep(C2, 2, np.ones((2, 2)))

    def test_rejects_mixed_grades(self):
        with pytest.raises(ValueError):
            to_tensor(C2.e(1) + C2.e(1, 2))

    def test_alternate_counts_permutations(self):
        t = np.zeros((3, 3, 3))
        t[0, 1, 2] = 1
        a = alternate(t)
        assert a[0, 1, 2] == 1 and a[1, 0, 2] == -1 and a[2, 0, 1] == 1

    @given(homogeneous(C3, Multiform, 1), homogeneous(C3, Multiform, 2))
    def test_tensor_wedge_matches_kernel(self, a, b):
        w = tensor_wedge(to_tensor(a, 1).components, to_tensor(b, 2).components)
        assert from_tensor(TensorRep(C3, 3, w, FORM)) == a ^ b


class TestOracleExamples:
    def test_scalar_product(self):
        assert oracle_scalar_product(C2.w(1, 2), C2.e(1, 2)) == 1
        assert oracle_scalar_product(C3.w(1), C3.e(1, 2)) == 0

    def test_left_contraction(self):
        assert oracle_left_contract(C2.w(1), C2.e(1, 2)) == C2.e(2)
        assert oracle_left_contract(C3.w(1, 2), C3.e(3)) == Multivector(C3)

    def test_extend(self):
        lam = np.diag([2.0, 3.0])
        assert oracle_extend(lam, C2.e(1, 2)) == 6 * C2.e(1, 2)
        x = 4 + C3.e(1, 3)
        assert oracle_extend(np.eye(3), x) == x
        assert oracle_extend(lam, Multivector.scalar(C2, 5)) == Multivector.scalar(C2, 5)

    def test_generalize(self):
        assert oracle_generalize(np.eye(2), C2.e(1, 2)) == 2 * C2.e(1, 2)
        assert oracle_generalize(np.eye(2), Multivector.scalar(C2, 7)) == Multivector(C2)
        g = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert oracle_generalize(g, C2.e(1)) == C2.e(1) + 3 * C2.e(2)


class TestAgreesWithKernel:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_every_blade_pair(self, n):
        ctx = AlgebraContext(n)
        for ma in ctx.blades():
            for mb in ctx.blades():
                phi, x = Multiform.blade(ctx, ma), Multivector.blade(ctx, mb)
                assert oracle_scalar_product(phi, x) == scalar_product(phi, x)
                for fast, slow, first in CONTRACTIONS:
                    for a, b in [(phi, x), (Multiform.blade(ctx, mb), Multivector.blade(ctx, ma))]:
                        args = _args(first, a, b)
                        assert slow(*args).identical(fast(*args))

    @given(elements(C3, Multivector), matrices(3))
    def test_lifts(self, x, m):
        assert oracle_extend(m, x) == extend(LinearMap(C3, m))(x)
        assert oracle_generalize(m, x) == generalize(LinearMap(C3, m))(x)
        phi = Multiform(C3, x.coeffs)
        assert oracle_generalize(m, phi) == generalize(LinearMap(C3, m, FORM))(phi)


class TestFrames:
    @pytest.mark.parametrize("seed", range(5))
    def test_results_do_not_depend_on_frame(self, seed):
        rng = np.random.default_rng(seed)
        frame = random_frame(3, rng)
        phi = rand_element(C3, Multiform, rng)
        x = rand_element(C3, Multivector, rng)
        assert abs(oracle_scalar_product(phi, x, frame) - oracle_scalar_product(phi, x)) <= 1e-8
        for _, slow, first in CONTRACTIONS:
            args = _args(first, phi, x)
            assert slow(*args, frame=frame).isclose(slow(*args), abs_tol=1e-8)
        m = rand_matrix(3, rng)
        assert oracle_extend(m, x, frame).isclose(oracle_extend(m, x), abs_tol=1e-8)
        assert oracle_generalize(m, phi, frame).isclose(oracle_generalize(m, phi), abs_tol=1e-8)

    def test_random_frame_determinant(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            assert abs(np.linalg.det(random_frame(4, rng))) >= 0.1
