"""Executable identities relating operator lifts to the duality products.

Every function returns a mapping from a short law name to the largest
absolute discrepancy between its two sides, so callers can compare with
a tolerance of their choice.

Operators act on elements of the opposite variance through the induced
action: ``ext(adjoint(inverse(op)))`` for the extended lift and
``-gen(adjoint(op))`` for the generalized lift. Both fix the duality
pairing (respectively annihilate it), which is what makes the laws below
well typed for operators on forms.
"""

from __future__ import annotations

from typing import Callable

from .algebra import Graded, VECTOR, element_class
from .duality import (
    left_contract,
    left_contract_form,
    right_contract,
    right_contract_vec,
    scalar_product,
)
from .extensors import (
    Extensor,
    act_extended,
    act_generalized,
    ext_adjoint,
    ext_left_contract,
    ext_right_contract,
    ext_scalar,
    ext_wedge,
)
from .operators import LinearMap, adjoint, contragredient, extend, generalize

__all__ = [
    "induced_extended",
    "induced_generalized",
    "extended_duality_laws",
    "generalized_duality_laws",
    "extended_equivariance",
    "generalized_derivation",
    "extended_extensor_laws",
    "generalized_extensor_laws",
    "extensor_adjoint_law",
]


def _gap(a, b) -> float:
    if isinstance(a, Graded):
        return (a - b).norm_inf()
    if isinstance(a, Extensor):
        return a.max_discrepancy(b)
    return abs(float(a) - float(b))


def induced_extended(op: LinearMap, variance: str) -> Callable:
    """The extended lift of ``op`` acting on elements of ``variance``."""
    return extend(op) if variance == op.variance else extend(contragredient(op))


def induced_generalized(op: LinearMap, variance: str) -> Callable:
    """The generalized lift of ``op`` acting on elements of ``variance``."""
    if variance == op.variance:
        return generalize(op)
    d = generalize(adjoint(op))
    return lambda x: -d(x)


# ---------------------------------------------------------------------------
# products of elements
# ---------------------------------------------------------------------------


def extended_duality_laws(op: LinearMap, phi, x) -> dict[str, float]:
    """Extended lift of an invertible operator against the scalar product
    and the left/right contractions ``<phi, x|`` and ``|x, phi>``."""
    inv_adj = extend(contragredient(op))
    lam = extend(op)
    if op.variance == VECTOR:
        on_vec = lam
        lhs_left = lam(left_contract(phi, x))
        rhs_left = left_contract(inv_adj(phi), lam(x))
        lhs_right = lam(right_contract_vec(x, phi))
        rhs_right = right_contract_vec(lam(x), inv_adj(phi))
        rhs_scalar = scalar_product(inv_adj(phi), lam(x))
    else:
        on_vec = induced_extended(op, VECTOR)
        lhs_left = on_vec(left_contract(phi, x))
        rhs_left = left_contract(lam(phi), inv_adj(x))
        lhs_right = on_vec(right_contract_vec(x, phi))
        rhs_right = right_contract_vec(inv_adj(x), lam(phi))
        rhs_scalar = scalar_product(lam(phi), inv_adj(x))
    # a lift fixes scalars, so the scalar law has the bare pairing on the left
    lhs_scalar = on_vec(element_class(VECTOR).scalar(x.ctx, scalar_product(phi, x))).scalar_part()
    return {
        "scalar": _gap(lhs_scalar, rhs_scalar),
        "left": _gap(lhs_left, rhs_left),
        "right": _gap(lhs_right, rhs_right),
    }


def generalized_duality_laws(op: LinearMap, phi, x) -> dict[str, float]:
    """Generalized lift against the scalar product and both contractions."""
    g = generalize(op)
    ga = generalize(adjoint(op))
    if op.variance == VECTOR:
        on_vec = g
        lhs_left = g(left_contract(phi, x))
        rhs_left = -left_contract(ga(phi), x) + left_contract(phi, g(x))
        lhs_right = g(right_contract_vec(x, phi))
        rhs_right = right_contract_vec(g(x), phi) - right_contract_vec(x, ga(phi))
        rhs_scalar = -scalar_product(ga(phi), x) + scalar_product(phi, g(x))
    else:
        on_vec = induced_generalized(op, VECTOR)
        lhs_left = on_vec(left_contract(phi, x))
        rhs_left = left_contract(g(phi), x) - left_contract(phi, ga(x))
        lhs_right = on_vec(right_contract_vec(x, phi))
        rhs_right = -right_contract_vec(ga(x), phi) + right_contract_vec(x, g(phi))
        rhs_scalar = scalar_product(g(phi), x) - scalar_product(phi, ga(x))
    lhs_scalar = on_vec(element_class(VECTOR).scalar(x.ctx, scalar_product(phi, x))).scalar_part()
    return {
        "scalar": _gap(lhs_scalar, rhs_scalar),
        "left": _gap(lhs_left, rhs_left),
        "right": _gap(lhs_right, rhs_right),
    }


_PRODUCTS = {
    "left": left_contract,
    "left_form": left_contract_form,
    "right": right_contract,
    "right_vec": right_contract_vec,
}


def _ordered(name, phi, x):
    return (phi, x) if name in ("left", "right") else (x, phi)


def extended_equivariance(op: LinearMap, phi, x) -> dict[str, float]:
    """``A(P(a, b)) = P(A a, A b)`` for all four contractions, ``A`` the
    induced extended action on each variance; plus the scalar product."""
    out = {"scalar": _gap(
        scalar_product(phi, x),
        scalar_product(induced_extended(op, phi.variance)(phi), induced_extended(op, x.variance)(x)),
    )}
    for name, prod in _PRODUCTS.items():
        a, b = _ordered(name, phi, x)
        val = prod(a, b)
        lhs = induced_extended(op, val.variance)(val)
        rhs = prod(induced_extended(op, a.variance)(a), induced_extended(op, b.variance)(b))
        out[name] = _gap(lhs, rhs)
    return out


def generalized_derivation(op: LinearMap, phi, x) -> dict[str, float]:
    """``D(P(a, b)) = P(D a, b) + P(a, D b)`` for all four contractions,
    ``D`` the induced generalized action; the scalar product is annihilated."""
    dphi = induced_generalized(op, phi.variance)(phi)
    dx = induced_generalized(op, x.variance)(x)
    out = {"scalar": abs(scalar_product(dphi, x) + scalar_product(phi, dx))}
    for name, prod in _PRODUCTS.items():
        a, b = _ordered(name, phi, x)
        da = dphi if a is phi else dx
        db = dx if b is x else dphi
        val = prod(a, b)
        lhs = induced_generalized(op, val.variance)(val)
        out[name] = _gap(lhs, prod(da, b) + prod(a, db))
    return out


# ---------------------------------------------------------------------------
# extensors
# ---------------------------------------------------------------------------


def extended_extensor_laws(op: LinearMap, same: tuple, mixed: tuple) -> dict[str, float]:
    """Action of the extended lift on products of extensors.

    ``same`` is a pair of extensors valued in the variance of ``op`` (for
    the exterior product law). ``mixed`` is ``(tau, sigma)`` with ``tau``
    multiform-valued and ``sigma`` multivector-valued.
    """
    a, b = same
    tau, sigma = mixed
    lam = op
    lam_c = contragredient(op)
    out = {"wedge": _gap(act_extended(lam, ext_wedge(a, b)), ext_wedge(act_extended(lam, a), act_extended(lam, b)))}
    if op.variance == VECTOR:
        t2, s2 = act_extended(lam_c, tau), act_extended(lam, sigma)
    else:
        t2, s2 = act_extended(lam, tau), act_extended(lam_c, sigma)
    out["scalar"] = _gap(act_extended(lam, ext_scalar(tau, sigma)), ext_scalar(t2, s2))
    out["left"] = _gap(act_extended(lam, ext_left_contract(tau, sigma)), ext_left_contract(t2, s2))
    out["right"] = _gap(act_extended(lam, ext_right_contract(sigma, tau)), ext_right_contract(s2, t2))
    return out


def generalized_extensor_laws(op: LinearMap, same: tuple, mixed: tuple) -> dict[str, float]:
    """Leibniz-type laws of the generalized lift over extensor products.

    Arguments as in :func:`extended_extensor_laws`.
    """
    a, b = same
    tau, sigma = mixed
    g, ga = op, adjoint(op)
    out = {"wedge": _gap(
        act_generalized(g, ext_wedge(a, b)),
        ext_wedge(act_generalized(g, a), b) + ext_wedge(a, act_generalized(g, b)),
    )}
    if op.variance == VECTOR:
        tau_l, sig_r = -act_generalized(ga, tau), act_generalized(g, sigma)
    else:
        tau_l, sig_r = act_generalized(g, tau), -act_generalized(ga, sigma)
    out["scalar"] = _gap(
        act_generalized(g, ext_scalar(tau, sigma)),
        ext_scalar(tau_l, sigma) + ext_scalar(tau, sig_r),
    )
    out["left"] = _gap(
        act_generalized(g, ext_left_contract(tau, sigma)),
        ext_left_contract(tau_l, sigma) + ext_left_contract(tau, sig_r),
    )
    out["right"] = _gap(
        act_generalized(g, ext_right_contract(sigma, tau)),
        ext_right_contract(sig_r, tau) + ext_right_contract(sigma, tau_l),
    )
    return out


def extensor_adjoint_law(tau: Extensor, x, y) -> float:
    """``|<tau(x), y> - <x, adj(tau)(y)>|`` for a one-variable extensor."""
    return abs(scalar_product(tau(x), y) - scalar_product(x, ext_adjoint(tau)(y)))
