"""Closed-form evaluators for the normalized Whittaker-Shintani function.

Every evaluator that has two derivations exposes both:

* ``ws_normalized(route="b")`` sums local L-factor products from
  :mod:`fjshintani.lfactors`; ``route="det"`` sums dual-group determinants
  from :mod:`fjshintani.dualgroup`.
* ``ws_cross`` likewise has a ``b`` route (through b^x) and a ``det`` route
  (through the Lagrangian representation).

The query is always the function attached to ``(chi, mu-bar eta)``; the
character tuple passed in carries the untwisted ``eta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .algebra import RatFunc, TruncatedSeries
from .dualgroup import (
    SatakeParam,
    build_rep,
    ch_lambda,
    conj_c,
    d_quotient,
    d_quotient_G,
    levi_assemble,
    levi_components,
    mu_bar_twist,
    satake_from_characters,
    star_L,
    tensor_I_mu,
)
from .lfactors import CharacterTuple, b_factor, d_single, delta_const
from .rootdata import (
    CaseDescriptor,
    Cocharacter,
    check_negative_cone,
    character_on_cocharacter,
    delta_exponent,
    embed_lambda_r,
    enumerate_Lambda_r_plusplus,
    is_in_Lambda_r_plusplus,
    lambda_r_degree,
    longest_element,
    weyl_act,
    weyl_elements,
)


class FormulaError(ValueError):
    """Invalid query for one of the evaluators."""


@dataclass(frozen=True)
class WSQuery:
    case: CaseDescriptor
    chars: CharacterTuple
    lam: Cocharacter

    def __post_init__(self) -> None:
        check_negative_cone(self.case, self.lam)


def _half_delta(case: CaseDescriptor, lam: Cocharacter, field: Any) -> Any:
    """delta_{B^+}(lambda)^{-1/2} as a power of v."""
    exp = delta_exponent(case, "B_plus", lam)
    if exp % 2:
        raise FormulaError("delta_{B+} exponent is odd; half power is not a power of v")
    return field.var("v") ** (-exp // 2)


def _weyl_pairs(case: CaseDescriptor):
    for wV in weyl_elements(case, "V"):
        for wW in weyl_elements(case, "W"):
            yield wV, wW


def _sum(terms, zero: Any) -> Any:
    total = zero
    for t in terms:
        total = total + t
    return total


def ws_summands(q: WSQuery, route: str = "b") -> list:
    """The individual Weyl-sum terms (without the Delta prefactor).

    Both routes index their terms by the same (w_V, w_W): the determinant
    route's term for (w_V, w_W) is the b route's term for w_0 (w_V, w_W).
    """
    case, chars, lam = q.case, q.chars, q.lam
    F = chars.field
    v = F.var("v")
    one = F.one
    w0V, w0W = longest_element(case, "V"), longest_element(case, "W")
    twisted = chars.twist("mu_bar")
    out = []
    for wV, wW in _weyl_pairs(case):
        if route == "b":
            chi = weyl_act(wV, chars.chi)
            eta = weyl_act(wW, chars.eta)
            term = b_factor(case, twisted.act(wV, wW))
            term = term * d_single(case, chi, "V", F) * d_single(case, eta, "W", F)
            term = term * character_on_cocharacter(weyl_act(w0V, chi), lam.lambda_V, one)
            term = term * character_on_cocharacter(eta, lam.lambda_W, one)
        elif route == "det":
            S_V, S_W = satake_from_characters(case, chars.act(wV, wW))
            rep = build_rep("R_minus", S_V, S_W, mu_unit=chars.mu_unit)
            term = rep.monomial.one_minus_det(v**-1, one) / d_quotient_G(S_V, S_W)
            term = term * character_on_cocharacter(weyl_act(wV, chars.chi), lam.lambda_V, one)
            term = term * character_on_cocharacter(
                weyl_act(w0W * wW, chars.eta), lam.lambda_W, one
            )
        else:
            raise FormulaError(f"unknown route {route!r}")
        out.append(term)
    return out


def ws_normalized(q: WSQuery, route: str = "b") -> Any:
    """The normalized Whittaker-Shintani value at lambda."""
    case, F = q.case, q.chars.field
    prefactor = delta_const(case, "U_W", F) / delta_const(case, "T_W", F)
    total = _sum(ws_summands(q, route), F.zero)
    return prefactor * total * _half_delta(case, q.lam, F)


def ws_cross_summands(q: WSQuery, route: str = "det") -> list:
    case, chars, lam = q.case, q.chars, q.lam
    if not case.is_split:
        raise FormulaError("the cross formula exists only in the split case")
    F = chars.field
    v = F.var("v")
    one = F.one
    w0V, w0W = longest_element(case, "V"), longest_element(case, "W")
    twisted = chars.twist("mu_bar")
    out = []
    for wV, wW in _weyl_pairs(case):
        if route == "det":
            S_V, S_W = satake_from_characters(case, chars.act(wV, wW))
            rep = build_rep("Y_mu", S_V, S_W, mu_unit=chars.mu_unit)
            term = rep.monomial.one_minus_det(v**-1, one) / d_quotient_G(S_V, S_W, "B_plus")
            term = term * character_on_cocharacter(weyl_act(w0V * wV, chars.chi), lam.lambda_V, one)
            term = term * character_on_cocharacter(weyl_act(w0W * wW, chars.eta), lam.lambda_W, one)
        elif route == "b":
            chi = weyl_act(wV, chars.chi)
            eta = weyl_act(wW, chars.eta)
            term = b_factor(case, twisted.act(wV, wW), "cross")
            term = term * d_single(case, chi, "V", F) * d_single(case, eta, "W", F)
            term = term * character_on_cocharacter(weyl_act(w0V, chi), lam.lambda_V, one)
            term = term * character_on_cocharacter(eta, lam.lambda_W, one)
        else:
            raise FormulaError(f"unknown route {route!r}")
        out.append(term)
    return out


def ws_cross(q: WSQuery, route: str = "det") -> Any:
    """Split-case pairing against the non-spherical vector, normalized at the identity."""
    F = q.chars.field
    total = _sum(ws_cross_summands(q, route), F.zero)
    return delta_const(q.case, "U_W", F) * total * _half_delta(q.case, q.lam, F)


# ---------------------------------------------------------------------------
# the G_r unfolding
# ---------------------------------------------------------------------------


def _rs_det(S_k: SatakeParam, S_l: SatakeParam, scalar: Any, mu_unit: Any, twist: bool = True) -> Any:
    rep = tensor_I_mu(S_k, S_l, twist, mu_unit)
    return rep.monomial.one_minus_det(scalar, scalar**0)


def unfolding_weights(case: CaseDescriptor, chars: CharacterTuple) -> list[tuple[SatakeParam, Any]]:
    """For each w in W_V: (w.S_V, det(1 - v^-1 (wS_V)^(r)* (x)_mu S_W) / D_{U(V)/B_V}(wS_V))."""
    F = chars.field
    v = F.var("v")
    _, S_W = satake_from_characters(case, chars)
    out = []
    for wV in weyl_elements(case, "V"):
        S_V, _ = satake_from_characters(case, chars.act(w_V=wV))
        S_rV, _ = levi_components(S_V)
        weight = _rs_det(star_L(S_rV), S_W, v**-1, chars.mu_unit) / d_quotient(S_V, "B")
        out.append((S_V, weight))
    return out


def ws_unfolded_r(case: CaseDescriptor, chars: CharacterTuple, lambda_r: Sequence[int]) -> Any:
    """The normalized value at an embedded lambda_r, through the G_r character sum."""
    if case.r < 1:
        raise FormulaError("the unfolded form needs r >= 1")
    if not is_in_Lambda_r_plusplus(case, lambda_r):
        raise FormulaError(f"{tuple(lambda_r)} is not in the doubly dominant cone")
    F = chars.field
    lam_V = embed_lambda_r(case, lambda_r)
    half = F.var("v") ** (delta_exponent(case, "B_V", lam_V) // 2)
    total = F.zero
    for S_V, weight in unfolding_weights(case, chars):
        S_rV, _ = levi_components(S_V)
        total = total + weight * ch_lambda(S_rV, lambda_r)
    return total * half


def lemma_unfolding_sides(
    case: CaseDescriptor, chars: CharacterTuple, S_r: SatakeParam
) -> tuple[Any, Any]:
    """Both sides of the determinant identity behind the unfolding."""
    F = chars.field
    v = F.var("v")
    _, S_W = satake_from_characters(case, chars)
    lhs = _rs_det(S_W, conj_c(S_r), v**-2, chars.mu_unit, twist=False)
    lhs = lhs * build_rep("Asai", S_r, sign=(-1) ** case.m).monomial.one_minus_det(v**-2, F.one)
    rhs = F.zero
    for S_V, weight in unfolding_weights(case, chars):
        S_rV, S_mV = levi_components(S_V)
        term = weight * _rs_det(star_L(S_rV), S_r, v**-1, chars.mu_unit)
        term = term * _rs_det(S_mV, S_r, v**-1, chars.mu_unit)
        rhs = rhs + term
    return lhs, rhs


def _scaled(S_r: SatakeParam, X: Any) -> SatakeParam:
    g1, g2 = S_r.pair()
    return SatakeParam.from_pair(S_r.case, [X * t for t in g1], [X * t for t in g2])


def _series(f: Any, order: int, zero: Any) -> TruncatedSeries:
    """Expand a Laurent polynomial in X (no negative powers) to a truncated series."""
    coeffs = f.coefficients_in("X")
    if any(k < 0 for k in coeffs):
        raise FormulaError("negative power of X in a series factor")
    dense = [coeffs.get(k, zero) for k in range(order + 1)]
    return TruncatedSeries.from_poly(dense, order, zero)


def l_unfold_sides(
    case: CaseDescriptor, chars: CharacterTuple, S_r: SatakeParam, order: int
) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Truncated X-series of both sides of the unfolded L-function identity.

    X stands for q_F^{-s}.  The left side sums over lambda_r in the doubly
    dominant cone, weighting each by |det lambda_r|^{1/2+s}; the right side
    is the ratio of determinants expanded as a power series.
    """
    if case.r < 1:
        raise FormulaError("the unfolded identity needs r >= 1")
    if order > 8:
        raise FormulaError("orders above 8 are not supported")
    F = chars.field
    v, X, zero, one = F.var("v"), F.var("X"), F.zero, F.one
    weights = [(levi_components(S_V)[0], wt) for S_V, wt in unfolding_weights(case, chars)]
    coeffs = [zero] * (order + 1)
    for lam in enumerate_Lambda_r_plusplus(case, order):
        deg = lambda_r_degree(case, lam)
        if deg > order:
            continue
        inner = zero
        for S_rV, wt in weights:
            inner = inner + wt * ch_lambda(mu_bar_twist(S_rV, chars.mu_unit), lam)
        coeffs[deg] = coeffs[deg] + v ** (-deg) * ch_lambda(S_r, lam) * inner
    lhs = TruncatedSeries(tuple(coeffs), order)

    S_V, S_W = satake_from_characters(case, chars)
    S_rs = _scaled(S_r, X)
    num1 = _rs_det(S_W, conj_c(S_rs), v**-2, chars.mu_unit, twist=False)
    num2 = build_rep("Asai", S_rs, sign=(-1) ** case.m).monomial.one_minus_det(v**-2, one)
    den = _rs_det(S_V, S_rs, v**-1, chars.mu_unit)
    rhs = _series(num1, order, zero) * _series(num2, order, zero) / _series(den, order, zero)
    return lhs, rhs


# ---------------------------------------------------------------------------
# the final L-function identity and the Ichino-Ikeda constant
# ---------------------------------------------------------------------------


def _ad_det(*S: SatakeParam, scalar: Any) -> Any:
    return build_rep("Ad", *S).monomial.one_minus_det(scalar, scalar**0)


def final_l_identity_parts(
    case: CaseDescriptor, S_V: SatakeParam, S_W: SatakeParam, S_r: SatakeParam, mu_unit: Any, v: Any
) -> tuple[Any, Any, Any]:
    """(lhs, rhs without |f|^2, f) for the L-function equality of the induced parameter.

    ``f`` is L(1/2, sigma_V x tau (x) mu-bar) / (L(1, sigma_W x tau^c) L(1, tau, As)).
    """
    one = v**0
    S_Sigma = levi_assemble(case, S_r, S_W)
    lhs = _ad_det(S_Sigma, scalar=v**-2) / _rs_det(S_V, S_Sigma, v**-1, mu_unit)
    f = (
        _rs_det(S_W, conj_c(S_r), v**-2, mu_unit, twist=False)
        * build_rep("Asai", S_r, sign=(-1) ** case.m).monomial.one_minus_det(v**-2, one)
        / _rs_det(S_V, S_r, v**-1, mu_unit)
    )
    rhs = (
        _ad_det(S_W, scalar=v**-2)
        * _ad_det(S_r, scalar=v**-2)
        / build_rep("R_mu", S_V, S_W, mu_unit=mu_unit).monomial.one_minus_det(v**-1, one)
    )
    return lhs, rhs, f


def conjugation_map(f: RatFunc) -> dict:
    """Inversion of the character, Satake and unit variables: complex conjugation on unitary parameters."""
    return {n: (n, -1) for n in f.varset.names if n[0] in "xyzu"}


def final_l_identity_sides(
    case: CaseDescriptor, S_V: SatakeParam, S_W: SatakeParam, S_r: SatakeParam, mu_unit: Any
) -> tuple[Any, Any]:
    """Both sides of the L-function equality for the induced parameter Sigma.

    The absolute value squared |f|^2 is realized as f times its conjugate,
    where conjugation inverts the character, Satake and unit variables.
    """
    x = S_V.diag[0]
    if not isinstance(x, RatFunc):
        raise FormulaError("use final_l_identity_parts at two conjugate points for modular checks")
    v = RatFunc.variable(x.varset, "v")
    lhs, rhs, f = final_l_identity_parts(case, S_V, S_W, S_r, mu_unit, v)
    f_bar = f.substitute_monomial(conjugation_map(f))
    return lhs, rhs * f * f_bar


def ii_constant(case: CaseDescriptor, chars: CharacterTuple) -> Any:
    """Delta_{U(V)} L(1/2, sigma (x) mu-bar) / L(1, sigma, Ad)."""
    F = chars.field
    v = F.var("v")
    S_V, S_W = satake_from_characters(case, chars)
    L_half_inv = build_rep("R_mu", S_V, S_W, mu_unit=chars.mu_unit).monomial.one_minus_det(v**-1, F.one)
    L_ad_inv = _ad_det(S_V, S_W, scalar=v**-2)
    return delta_const(case, "U_V", F) * L_ad_inv / L_half_inv
