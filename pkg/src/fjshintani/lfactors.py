"""Scalar local factors: zeta and L values, Gross constants, b, d, c, Gamma, Pi.

All functions take the ring through a ``field`` object (see
:mod:`fjshintani.algebra`), so the same code returns exact rational functions
or prime-field values.  The half power q_F^{1/2} is the variable ``v``;
q_E is ``v**4`` in the inert case and ``v**2`` in the split case.

The mu-twist is never applied implicitly: callers pass the twisted tuple
(see :meth:`CharacterTuple.twist`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .rootdata import (
    CaseDescriptor,
    Kind,
    Root,
    RootDataError,
    WeylElement,
    coroot_pairing,
    longest_element,
    positive_roots,
    simple_roots,
    weyl_act,
)


class FactorError(ValueError):
    """Invalid selector or index for a local factor."""


@dataclass(frozen=True)
class HalfInteger:
    """A number ``twice / 2``; the argument s of the local L-factors."""

    twice: int

    @classmethod
    def of(cls, value: Any) -> "HalfInteger":
        frac = Fraction(value)
        if (2 * frac).denominator != 1:
            raise FactorError(f"{value} is not a half-integer")
        return cls(int(2 * frac))

    def __str__(self) -> str:
        return str(Fraction(self.twice, 2))


HALF = HalfInteger(1)
ONE = HalfInteger(2)


@dataclass(frozen=True)
class CharacterTuple:
    """Unramified characters of T_V and T_W plus the value of mu at the uniformizer.

    ``mu_unit`` is the variable u in the split case and the constant -1 in
    the inert case; its conjugate is u**-1 (split) or -1 (inert).
    """

    chi: tuple
    eta: tuple
    mu_unit: Any
    field: Any

    @classmethod
    def generic(cls, case: CaseDescriptor, field: Any) -> "CharacterTuple":
        chi = tuple(field.var(f"x{i}") for i in range(1, case.n_minus + 1))
        eta = tuple(field.var(f"y{j}") for j in range(1, case.m_minus + 1))
        mu = field.var("u") if case.is_split else field.const(-1)
        return cls(chi, eta, mu, field)

    @property
    def mu_bar(self) -> Any:
        return self.mu_unit**-1

    def twist(self, which: str) -> "CharacterTuple":
        """Multiply eta coordinatewise by mu (``"mu"``) or its conjugate (``"mu_bar"``)."""
        factor = {"mu": self.mu_unit, "mu_bar": self.mu_bar}[which]
        return CharacterTuple(self.chi, tuple(factor * e for e in self.eta), self.mu_unit, self.field)

    def with_chars(self, chi: Sequence[Any] | None = None, eta: Sequence[Any] | None = None) -> "CharacterTuple":
        return CharacterTuple(
            tuple(self.chi if chi is None else chi),
            tuple(self.eta if eta is None else eta),
            self.mu_unit,
            self.field,
        )

    def act(self, w_V: WeylElement | None = None, w_W: WeylElement | None = None) -> "CharacterTuple":
        chi = self.chi if w_V is None else weyl_act(w_V, self.chi)
        eta = self.eta if w_W is None else weyl_act(w_W, self.eta)
        return self.with_chars(chi, eta)


# ---------------------------------------------------------------------------
# zeta and L values
# ---------------------------------------------------------------------------


def q_F_power(field: Any, s: HalfInteger) -> Any:
    """q_F^{-s}."""
    return field.var("v") ** (-s.twice)


def q_E_power(case: CaseDescriptor, field: Any, s: HalfInteger) -> Any:
    """q_E^{-s}."""
    scale = 2 if case.is_inert else 1
    return field.var("v") ** (-scale * s.twice)


def local_L(case: CaseDescriptor, which: str, s: HalfInteger, x: Any = None, field: Any = None) -> Any:
    """One of zeta_F(s), zeta_E(s), L_F(s, x), L_E(s, x)."""
    if field is None:
        raise FactorError("a field is required")
    one = field.one
    if which == "zeta_F":
        return (one - q_F_power(field, s)) ** -1
    if which == "zeta_E":
        if case.is_split:
            return (one - q_F_power(field, s)) ** -2
        return (one - q_E_power(case, field, s)) ** -1
    if x is None:
        raise FactorError(f"{which} needs an argument x")
    if which == "L_F":
        return (one - x * q_F_power(field, s)) ** -1
    if which == "L_E":
        return (one - x * q_E_power(case, field, s)) ** -1
    raise FactorError(f"unknown local factor {which!r}")


def inv_L(case: CaseDescriptor, which: str, s: HalfInteger, x: Any, field: Any) -> Any:
    """1 / L(s, x) as a polynomial expression, avoiding a division."""
    power = q_F_power(field, s) if which == "L_F" else q_E_power(case, field, s)
    return field.one - x * power


def eta_EF(case: CaseDescriptor) -> int:
    """Value of the quadratic character of E/F at the uniformizer."""
    return -1 if case.is_inert else 1


# ---------------------------------------------------------------------------
# Gross constants
# ---------------------------------------------------------------------------


def delta_const(case: CaseDescriptor, which: str, field: Any, k: int | None = None) -> Any:
    """Delta_{U(V)}, Delta_{U(W)}, Delta_{G_k}, Delta_{T_W} or Delta'_{T_W}.

    ``T_W`` uses the Theorem-style table (zeta_E(1) powers); ``T_W_gross``
    uses the Artin-Tate form.  They agree exactly.
    """
    eta = eta_EF(case)
    one = field.one

    def L_F(i: int, x: Any) -> Any:
        return local_L(case, "L_F", HalfInteger(2 * i), one * x, field)

    if which == "U_V":
        return _prod((L_F(i, eta**i) for i in range(1, case.n + 1)), one)
    if which == "U_W":
        return _prod((L_F(i, eta**i) for i in range(1, case.m + 1)), one)
    if which == "G_k":
        if k is None:
            raise FactorError("Delta_{G_k} needs k")
        return _prod((local_L(case, "zeta_E", HalfInteger(2 * i), field=field) for i in range(1, k + 1)), one)
    zeta_F1 = local_L(case, "zeta_F", ONE, field=field)
    zeta_E1 = local_L(case, "zeta_E", ONE, field=field)
    if which == "T_W":
        if case.kind is Kind.SPLIT:
            return zeta_F1 ** case.m
        value = zeta_E1 ** case.m_minus
        if case.kind is Kind.INERT_ODD:
            value = value * L_F(1, eta)
        return value
    if which == "T_W_gross":
        if case.is_split:
            return zeta_F1 ** case.m
        return zeta_F1 ** case.m_minus * L_F(1, eta) ** case.m_plus
    if which == "T_W_prime":
        if case.kind is Kind.INERT_ODD:
            return zeta_F1 ** case.m_minus * L_F(1, eta) ** case.m_minus
        return delta_const(case, "T_W", field)
    raise FactorError(f"unknown Delta selector {which!r}")


def _prod(items, one: Any) -> Any:
    out = one
    for item in items:
        out = out * item
    return out


# ---------------------------------------------------------------------------
# b, b^x and d
# ---------------------------------------------------------------------------


def b_factor(case: CaseDescriptor, chars: CharacterTuple, variant: str = "standard") -> Any:
    """Product of inverse L-factors attached to (chi, eta) by the three-case table.

    ``variant="cross"`` gives the split-only b^x.  Pass already-twisted eta.
    """
    F = chars.field
    chi, eta = chars.chi, chars.eta
    out = F.one
    if variant == "cross":
        if case.is_inert:
            raise FactorError("the cross variant exists only in the split case")
        rp = case.rprime
        for i in range(1, case.n + 1):
            for j in range(1, case.m + 1):
                if i + j <= rp + 1:
                    out = out * inv_L(case, "L_F", HALF, chi[i - 1] * eta[j - 1], F)
                else:
                    out = out * inv_L(case, "L_F", HALF, (chi[i - 1] * eta[j - 1]) ** -1, F)
        return out
    if variant != "standard":
        raise FactorError(f"unknown b variant {variant!r}")
    if case.is_split:
        rp = case.rprime
        for i in range(1, case.n + 1):
            for j in range(1, case.m + 1):
                if i + j < rp + 1:
                    out = out * inv_L(case, "L_F", HALF, chi[i - 1] * eta[j - 1], F)
                elif i + j > rp + 1:
                    out = out * inv_L(case, "L_F", HALF, (chi[i - 1] * eta[j - 1]) ** -1, F)
        return out
    r = case.r
    for i in range(1, case.n_minus + 1):
        for j in range(1, case.m_minus + 1):
            c, e = chi[i - 1], eta[j - 1]
            out = out * inv_L(case, "L_E", HALF, c * e, F)
            if i < r + j:
                out = out * inv_L(case, "L_E", HALF, c * e**-1, F)
            elif i > r + j:
                out = out * inv_L(case, "L_E", HALF, c**-1 * e, F)
    if case.kind is Kind.INERT_ODD:
        for i in range(1, case.n_minus + 1):
            out = out * inv_L(case, "L_E", HALF, -chi[i - 1], F)
        for j in range(1, case.m_minus + 1):
            out = out * inv_L(case, "L_E", HALF, eta[j - 1], F)
    return out


def d_single(case: CaseDescriptor, chars: Sequence[Any], group: str, field: Any, **kw) -> Any:
    """prod over positive non-divisible roots of 1 / (1 - <chars, coroot>)."""
    den = field.one
    for root in positive_roots(case, group):
        den = den * (field.one - coroot_pairing(case, chars, root, **kw))
    return den**-1


def d_factor(case: CaseDescriptor, chars: CharacterTuple, group: str = "combined", **kw) -> Any:
    """d_V(chi), d_W(eta), or the combined d_V(w_0 chi) d_W(eta)."""
    F = chars.field
    if group == "V":
        return d_single(case, chars.chi, "V", F, **kw)
    if group == "W":
        return d_single(case, chars.eta, "W", F, **kw)
    if group == "combined":
        w0 = longest_element(case, "V")
        return d_single(case, weyl_act(w0, chars.chi), "V", F, **kw) * d_single(
            case, chars.eta, "W", F, **kw
        )
    raise FactorError(f"unknown d group {group!r}")


# ---------------------------------------------------------------------------
# Casselman c-factors
# ---------------------------------------------------------------------------


def c_alpha(case: CaseDescriptor, chars: Sequence[Any], root: Root, field: Any) -> Any:
    """Casselman's c_alpha for a positive non-divisible root."""
    if not root.is_positive() or root not in positive_roots(case, root.group_tag):
        raise FactorError(f"{root} is not a positive non-divisible root")
    one = field.one
    v = field.var("v")
    form = root.form.name
    if form in ("DIFF", "SUM"):
        p = coroot_pairing(case, chars, root)
        q_inv = v**-4 if case.is_inert else v**-2
        return (one - q_inv * p) / (one - p)
    a = next(i for i, e in enumerate(root.vector) if e)
    x = chars[a]
    if form == "DOUBLE":
        return (one - v**-2 * x) / (one - x)
    return (one - v**-4 * x) * (one + v**-2 * x) / (one - x * x)


def c_factor(case: CaseDescriptor, chars: Sequence[Any], group: str, what: Any, field: Any) -> Any:
    """c_alpha (``what`` a Root), c_w (a WeylElement), or c_{w_0} (``"w0"``)."""
    if isinstance(what, Root):
        return c_alpha(case, chars, what, field)
    if what == "w0":
        what = longest_element(case, group)
    if not isinstance(what, WeylElement):
        raise FactorError(f"unknown c-factor selector {what!r}")
    out = field.one
    for root in positive_roots(case, group):
        if not root.act(what).is_positive():
            out = out * c_alpha(case, chars, root, field)
    return out


# ---------------------------------------------------------------------------
# Gamma factors
# ---------------------------------------------------------------------------


def gamma1(case: CaseDescriptor, chars: Sequence[Any], group: str, field: Any) -> Any:
    """Gamma_1 = c_{w_0} / d for one factor."""
    return c_factor(case, chars, group, "w0", field) / d_single(case, chars, group, field)


def gamma2(case: CaseDescriptor, chars: CharacterTuple) -> Any:
    F = chars.field
    chi, eta = chars.chi, chars.eta
    out = F.one
    if case.is_split:
        rp = case.rprime
        for i in range(1, case.n + 1):
            for j in range(1, case.m + 1):
                arg = chi[i - 1] * eta[j - 1] if i + j <= rp + 1 else (chi[i - 1] * eta[j - 1]) ** -1
                out = out * local_L(case, "L_F", HALF, arg, F)
        return out
    r = case.r
    for j in range(1, case.m_minus + 1):
        e = eta[j - 1]
        for i in range(1, case.n_minus + 1):
            c = chi[i - 1]
            out = out * local_L(case, "L_E", HALF, c * e, F) * local_L(case, "L_E", HALF, c**-1 * e, F)
        for i in range(1, r + j):
            c = chi[i - 1]
            out = out * local_L(case, "L_E", HALF, c * e**-1, F) / local_L(case, "L_E", HALF, c**-1 * e, F)
    if case.kind is Kind.INERT_ODD:
        for i in range(1, case.n_minus + 1):
            out = out * local_L(case, "L_F", ONE, -chi[i - 1], F)
        for j in range(1, case.m_minus + 1):
            out = out * local_L(case, "L_F", ONE, eta[j - 1], F)
    return out


def pi_factor(case: CaseDescriptor, chars: CharacterTuple) -> Any:
    F = chars.field
    chi, eta = chars.chi, chars.eta
    out = delta_const(case, "T_W_prime", F) ** -1
    if case.is_split:
        rp = case.rprime
        for j in range(1, case.m + 1):
            out = out * local_L(case, "L_F", HALF, eta[j - 1] * chi[rp - j], F)
    else:
        r = case.r
        for j in range(1, case.m_minus + 1):
            out = out * local_L(case, "L_E", HALF, eta[j - 1] * chi[r + j - 1] ** -1, F)
    return out


def gamma_factors(case: CaseDescriptor, chars: CharacterTuple, which: str = "Gamma") -> Any:
    """Gamma_1^V(chi), Gamma_1^W(mu eta), Gamma_2(chi, eta), their product, or Pi."""
    F = chars.field
    if which == "Gamma1_V":
        return gamma1(case, chars.chi, "V", F)
    if which == "Gamma1_W":
        return gamma1(case, chars.twist("mu").eta, "W", F)
    if which == "Gamma2":
        return gamma2(case, chars)
    if which == "Gamma":
        return (
            gamma_factors(case, chars, "Gamma1_V")
            * gamma_factors(case, chars, "Gamma1_W")
            * gamma2(case, chars)
        )
    if which == "Pi":
        return pi_factor(case, chars)
    raise FactorError(f"unknown Gamma selector {which!r}")


def _index(seq: Sequence[Any], i: int, what: str) -> Any:
    """1-based access that refuses out-of-range indices."""
    if not 1 <= i <= len(seq):
        raise FactorError(f"index {what}_{i} is out of range 1..{len(seq)}")
    return seq[i - 1]


def gamma_pairing_value(
    case: CaseDescriptor,
    chars: CharacterTuple,
    reflection: tuple[str, int],
    alpha_indices: str = "corrected",
    beta_subscripts: str = "swapped",
) -> Any:
    """Closed-form pairing value for a simple reflection, volume factors stripped.

    ``reflection`` is ``("alpha", i)`` for the i-th simple root of U(V) or
    ``("beta", j)`` for U(W), 1-based.  Two readings of the printed tables
    are available: ``alpha_indices`` in {"printed", "corrected"} for the
    split middle range, and ``beta_subscripts`` in {"printed", "swapped"}
    for the inert last row.  The printed readings raise on indices that
    fall outside the character tuple.
    """
    F = chars.field
    one = F.one
    v = F.var("v")
    q_F = v**2
    q_E = v**4 if case.is_inert else v**2
    chi, eta = chars.chi, chars.eta
    kind, idx = reflection
    r, rp = case.r, case.rprime

    def LF(s, x):
        return local_L(case, "L_F", s, x, F)

    def LE(s, x):
        return local_L(case, "L_E", s, x, F)

    def X(i):
        return _index(chi, i, "chi")

    def Y(j):
        return _index(eta, j, "eta")

    if kind == "alpha":
        k = case.n_minus
        if not 1 <= idx <= len(simple_roots(case, "V")):
            raise FactorError(f"alpha index {idx} outside the simple roots of U(V)")
        if case.is_split:
            if idx <= r or idx > rp:
                return q_F * LF(ONE, X(idx) * X(idx + 1) ** -1) ** -1
            if alpha_indices == "printed":
                a, b = idx - rp + 1, idx - r + 1
            elif alpha_indices == "corrected":
                a = b = rp - idx + 1
            else:
                raise FactorError(f"unknown alpha reading {alpha_indices!r}")
            return (
                (q_F - one)
                * LF(HALF, X(idx) * Y(a))
                * LF(HALF, X(idx + 1) ** -1 * Y(b) ** -1)
                / LF(ONE, X(idx) * X(idx + 1) ** -1)
            )
        if idx == k:
            if case.kind is Kind.INERT_EVEN:
                return q_F * LF(ONE, X(k)) ** -1
            return q_E * q_F * LE(ONE, X(k)) ** -1
        if idx < r:
            return q_E * LE(ONE, X(idx) * X(idx + 1) ** -1) ** -1
        j = idx - r + 1
        return (
            (q_E - one)
            * LE(HALF, X(idx) * Y(j) ** -1)
            * LE(HALF, X(idx + 1) ** -1 * Y(j))
            / LE(ONE, X(idx) * X(idx + 1) ** -1)
        )
    if kind != "beta":
        raise FactorError(f"unknown reflection kind {kind!r}")
    k = case.m_minus
    if not 1 <= idx <= len(simple_roots(case, "W")):
        raise FactorError(f"beta index {idx} outside the simple roots of U(W)")
    pi = pi_factor(case, chars)
    if case.is_split:
        j = idx
        return (
            pi
            * q_F
            * LF(HALF, Y(j) * X(rp - j))
            * LF(HALF, Y(j + 1) ** -1 * X(rp - j + 1) ** -1)
            / (LF(ONE, Y(j) * Y(j + 1) ** -1) * LF(ONE, X(rp - j) * X(rp - j + 1) ** -1))
        )
    if idx < k:
        j = idx
        return (
            pi
            * q_E
            * LE(HALF, Y(j) * X(r + j + 1) ** -1)
            * LE(HALF, X(r + j) * Y(j + 1) ** -1)
            / (LE(ONE, Y(j) * Y(j + 1) ** -1) * LE(ONE, X(r + j) * X(r + j + 1) ** -1))
        )
    nm = case.n_minus
    if beta_subscripts == "printed":
        mixed = X(k) * Y(nm)
    elif beta_subscripts == "swapped":
        mixed = X(nm) * Y(k)
    else:
        raise FactorError(f"unknown beta reading {beta_subscripts!r}")
    if case.kind is Kind.INERT_EVEN:
        return pi * q_F * LF(ONE, mixed) / (LF(ONE, -Y(k)) * LF(ONE, X(nm)))
    return pi * q_E * q_F * LF(ONE, mixed) / (LE(ONE, -Y(k)) * LE(ONE, X(nm)))


def apply_reflection(case: CaseDescriptor, chars: CharacterTuple, reflection: tuple[str, int]) -> CharacterTuple:
    """Act on chi (alpha) or eta (beta) by the chosen simple reflection."""
    from .rootdata import simple_reflections

    kind, idx = reflection
    group = "V" if kind == "alpha" else "W"
    refl = simple_reflections(case, group)
    if not 1 <= idx <= len(refl):
        raise RootDataError(f"{kind} index {idx} outside the simple roots")
    w = refl[idx - 1]
    return chars.act(w_V=w) if group == "V" else chars.act(w_W=w)
