"""Exact Laurent polynomials, rational functions, and modular evaluation.

Everything else in the package computes with the two value types defined
here:

* :class:`RatFunc`, an exact multivariate Laurent rational function with
  rational coefficients, kept in a canonical reduced form;
* :class:`ModP`, an element of a large prime field, used for randomized
  identity testing.

Both types support ``+ - * /`` and integer powers, so the higher modules are
written once and run over either backend.  A :class:`SymbolicField` or
:class:`ModularField` hands out the formal variables.

Canonical form
--------------
A nonzero rational function is stored as ``x^shift * num / den`` where

* ``num`` and ``den`` are ordinary polynomials (nonnegative exponents),
  neither divisible by any variable;
* ``gcd(num, den) = 1``;
* ``den`` has leading coefficient 1 for the graded lexicographic order over
  the variable order of the ambient :class:`VarSet`.

The Laurent numerator is ``x^shift * num`` and the denominator is ``den``.
Polynomial arithmetic and gcds are delegated to python-flint; the modular
evaluator below walks the stored terms itself and does not use flint.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Mapping, Sequence

import flint

PRIME = 2**62 - 57
"""Fixed 62-bit prime (larger than 2**61) used for modular identity tests."""

DEFAULT_TRIALS = 20

Exponents = tuple[int, ...]


class AlgebraError(ValueError):
    """Raised on malformed algebraic input (mismatched variables, bad shapes)."""


class SingularEvaluation(ZeroDivisionError):
    """A denominator vanished at the requested evaluation point."""


# ---------------------------------------------------------------------------
# Variable sets
# ---------------------------------------------------------------------------


class VarSet:
    """An ordered tuple of variable names together with its flint context.

    Instances are interned: equal name tuples give the same object.
    """

    __slots__ = ("names", "index", "ctx")

    def __new__(cls, names: Sequence[str]) -> "VarSet":
        return _intern_varset(tuple(names))

    @classmethod
    def _create(cls, names: tuple[str, ...]) -> "VarSet":
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate variable names in {names}")
        if not names:
            raise AlgebraError("a variable set needs at least one variable")
        obj = object.__new__(cls)
        obj.names = names
        obj.index = {name: i for i, name in enumerate(names)}
        obj.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
        return obj

    @classmethod
    def standard(cls, nx: int, ny: int, nz: int = 0) -> "VarSet":
        """The variable order ``v, u, x1.., y1.., z1.., X``.

        ``x`` carries the U(V) character, ``y`` the U(W) character, ``z`` the
        Satake parameter of an auxiliary representation of G_r, ``v`` the
        square root of q_F, ``u`` the value of the splitting character, and
        ``X`` the formal variable q_F^{-s}.
        """
        names = ["v", "u"]
        names += [f"x{i}" for i in range(1, nx + 1)]
        names += [f"y{j}" for j in range(1, ny + 1)]
        names += [f"z{k}" for k in range(1, nz + 1)]
        names.append("X")
        return cls(names)

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"VarSet({', '.join(self.names)})"

    def __reduce__(self):
        return (VarSet, (self.names,))


@lru_cache(maxsize=None)
def _intern_varset(names: tuple[str, ...]) -> VarSet:
    return VarSet._create(names)


def _monomial(vs: VarSet, exps: Exponents):
    return vs.ctx.term(exp_vec=exps)


def _strip_monomial(vs: VarSet, poly) -> tuple[Exponents, Any]:
    """Split ``poly`` as ``x^e * rest`` with ``rest`` free of monomial factors."""
    if poly.is_zero():
        return (0,) * len(vs), poly
    content = poly.term_content()
    exps = tuple(int(e) for e in content.monoms()[0])
    if not any(exps):
        return exps, poly
    return exps, poly / _monomial(vs, exps)


def _add_exps(a: Exponents, b: Exponents) -> Exponents:
    return tuple(int(x + y) for x, y in zip(a, b))


def _sub_exps(a: Exponents, b: Exponents) -> Exponents:
    return tuple(int(x - y) for x, y in zip(a, b))


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentPoly:
    """A Laurent polynomial ``x^shift * poly`` with rational coefficients."""

    __slots__ = ("varset", "shift", "poly")

    def __init__(self, varset: VarSet, shift: Exponents, poly) -> None:
        exps, rest = _strip_monomial(varset, poly)
        self.varset = varset
        self.shift = _add_exps(tuple(shift), exps) if not poly.is_zero() else (0,) * len(varset)
        self.poly = rest

    @classmethod
    def from_terms(cls, varset: VarSet, terms: Mapping[Exponents, Any]) -> "LaurentPoly":
        """Build from a mapping exponent-vector -> coefficient (zeros dropped)."""
        nvars = len(varset)
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise AlgebraError(
                    f"exponent vector {exps} has arity {len(exps)}, expected {nvars}"
                )
            coeff = Fraction(coeff)
            if coeff:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
        clean = {e: c for e, c in clean.items() if c}
        if not clean:
            return cls(varset, (0,) * nvars, varset.ctx.from_dict({}))
        low = tuple(min(e[i] for e in clean) for i in range(nvars))
        shifted = {
            _sub_exps(e, low): flint.fmpq(c.numerator, c.denominator) for e, c in clean.items()
        }
        return cls(varset, low, varset.ctx.from_dict(shifted))

    @classmethod
    def constant(cls, varset: VarSet, c: Any) -> "LaurentPoly":
        return cls.from_terms(varset, {(0,) * len(varset): c})

    @classmethod
    def variable(cls, varset: VarSet, name: str, power: int = 1) -> "LaurentPoly":
        exps = [0] * len(varset)
        exps[varset.index[name]] = power
        return cls.from_terms(varset, {tuple(exps): 1})

    @property
    def terms(self) -> dict[Exponents, Fraction]:
        return {
            _add_exps(e, self.shift): _to_fraction(c)
            for e, c in zip(self.poly.monoms(), self.poly.coeffs())
        }

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def _check(self, other: "LaurentPoly") -> None:
        if other.varset is not self.varset:
            raise AlgebraError("Laurent polynomials over different variable sets")

    def _coerce(self, other: Any) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.varset, other)
        return NotImplemented

    def __add__(self, other: Any) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        low = tuple(min(a, b) for a, b in zip(self.shift, other.shift))
        vs = self.varset
        total = self.poly * _monomial(vs, _sub_exps(self.shift, low)) + other.poly * _monomial(
            vs, _sub_exps(other.shift, low)
        )
        return LaurentPoly(vs, low, total)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.varset, self.shift, -self.poly)

    def __sub__(self, other: Any) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Any) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(self.varset, _add_exps(self.shift, other.shift), self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.poly.monoms()) != 1 or self.poly.is_zero():
                raise AlgebraError("only Laurent monomials have negative powers")
            coeff = _to_fraction(self.poly.coeffs()[0]) ** k
            shift = tuple(s * k for s in self.shift)
            return LaurentPoly.from_terms(self.varset, {shift: coeff})
        return LaurentPoly(self.varset, tuple(s * k for s in self.shift), self.poly**k)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.varset, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (
            other.varset is self.varset
            and self.shift == other.shift
            and self.poly == other.poly
        )

    def __hash__(self) -> int:
        return hash((self.varset.names, self.shift, str(self.poly)))

    def __repr__(self) -> str:
        return f"LaurentPoly({format_laurent(self)})"


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Exact Laurent rational function in canonical form (see module docstring)."""

    __slots__ = ("varset", "shift", "num", "den")

    # Construction -----------------------------------------------------------

    @classmethod
    def _raw(cls, varset: VarSet, shift: Exponents, num, den) -> "RatFunc":
        obj = object.__new__(cls)
        obj.varset = varset
        obj.shift = shift
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def _zero(cls, varset: VarSet) -> "RatFunc":
        ctx = varset.ctx
        return cls._raw(varset, (0,) * len(varset), ctx.from_dict({}), ctx.from_dict({(0,) * len(varset): 1}))

    @classmethod
    def _build(cls, varset: VarSet, shift: Exponents, num, den, gcd_with=None) -> "RatFunc":
        """Reduce ``x^shift * num / den``.

        ``den`` must already be free of monomial factors.  ``gcd_with``, if
        given, is a factor of ``den`` known to contain every common factor of
        ``num`` and ``den``.
        """
        if num.is_zero():
            return cls._zero(varset)
        e, num = _strip_monomial(varset, num)
        shift = _add_exps(shift, e)
        probe = den if gcd_with is None else gcd_with
        if not probe.is_one():
            g = num.gcd(probe)
            if not g.is_one():
                num = num / g
                den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return cls._raw(varset, shift, num, den)

    @classmethod
    def from_laurent(cls, num: LaurentPoly, den: LaurentPoly | None = None) -> "RatFunc":
        vs = num.varset
        if den is None:
            den = LaurentPoly.constant(vs, 1)
        if den.varset is not vs:
            raise AlgebraError("numerator and denominator over different variable sets")
        if den.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        shift = _sub_exps(num.shift, den.shift)
        return cls._build(vs, shift, num.poly, den.poly)

    @classmethod
    def constant(cls, varset: VarSet, c: Any) -> "RatFunc":
        return cls.from_laurent(LaurentPoly.constant(varset, c))

    @classmethod
    def variable(cls, varset: VarSet, name: str) -> "RatFunc":
        return cls.from_laurent(LaurentPoly.variable(varset, name))

    # Views --------------------------------------------------------------------

    @property
    def numerator(self) -> LaurentPoly:
        return LaurentPoly(self.varset, self.shift, self.num)

    @property
    def denominator(self) -> LaurentPoly:
        return LaurentPoly(self.varset, (0,) * len(self.varset), self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent_polynomial(self) -> bool:
        return self.den.is_one()

    def variables(self) -> set[str]:
        used = set()
        for poly in (self.num, self.den):
            for exps in poly.monoms():
                used.update(self.varset.names[i] for i, e in enumerate(exps) if e)
        used.update(self.varset.names[i] for i, e in enumerate(self.shift) if e)
        return used

    # Arithmetic -------------------------------------------------------------

    def _coerce(self, other: Any):
        if isinstance(other, RatFunc):
            if other.varset is not self.varset:
                raise AlgebraError("rational functions over different variable sets")
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(self.varset, other)
        if isinstance(other, LaurentPoly):
            return RatFunc.from_laurent(other)
        return NotImplemented

    def __add__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        vs = self.varset
        low = tuple(min(a, b) for a, b in zip(self.shift, other.shift))
        m1 = _monomial(vs, _sub_exps(self.shift, low))
        m2 = _monomial(vs, _sub_exps(other.shift, low))
        if self.den == other.den:
            total = self.num * m1 + other.num * m2
            return RatFunc._build(vs, low, total, self.den)
        g = self.den.gcd(other.den)
        d1 = self.den / g
        d2 = other.den / g
        total = self.num * m1 * d2 + other.num * m2 * d1
        return RatFunc._build(vs, low, total, self.den * d2, gcd_with=g)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(self.varset, self.shift, -self.num, self.den)

    def __sub__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Any) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFunc._zero(self.varset)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 / g, d1 / g
        den = d1 * d2
        num = n1 * n2
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc._raw(self.varset, _add_exps(self.shift, other.shift), num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lc = self.num.leading_coefficient()
        num, den = self.den, self.num
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc._raw(self.varset, tuple(-s for s in self.shift), num, den)

    def __truediv__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.den.is_one() and other.den.is_one() and not self.is_zero():
            # Fast path for exact quotients of Laurent polynomials, which is
            # what fraction-free elimination produces.
            try:
                q = self.num / other.num
            except Exception:
                q = None
            if q is not None:
                return RatFunc._raw(
                    self.varset, _sub_exps(self.shift, other.shift), q, self.den
                )
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if not isinstance(k, int):
            raise AlgebraError("only integer powers are supported")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RatFunc.constant(self.varset, 1)
        return RatFunc._raw(
            self.varset, tuple(s * k for s in self.shift), self.num**k, self.den**k
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (
            other.varset is self.varset
            and self.shift == other.shift
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.varset.names, self.shift, str(self.num), str(self.den)))

    def __repr__(self) -> str:
        return f"RatFunc({self.to_string()})"

    def __str__(self) -> str:
        return self.to_string()

    # Coefficient access -----------------------------------------------------

    def substitute_monomial(self, mapping: Mapping[str, tuple[str, int]]) -> "RatFunc":
        """Apply the variable change ``name -> target**power`` (power +1 or -1).

        Names absent from ``mapping`` are left alone.  This is a ring
        automorphism of the Laurent ring when the map is a signed bijection,
        which is how the Weyl groups act on the character variables.
        """
        vs = self.varset
        idx = [vs.index[n] for n in vs.names]
        target = list(range(len(vs)))
        sign = [1] * len(vs)
        for name, (dest, power) in mapping.items():
            if power not in (1, -1):
                raise AlgebraError("only the powers +1 and -1 are supported")
            target[vs.index[name]] = vs.index[dest]
            sign[vs.index[name]] = power

        def move(p: LaurentPoly) -> LaurentPoly:
            out: dict[Exponents, Fraction] = {}
            for exps, c in p.terms.items():
                new = [0] * len(vs)
                for i in idx:
                    new[target[i]] += sign[i] * exps[i]
                out[tuple(new)] = out.get(tuple(new), Fraction(0)) + c
            return LaurentPoly.from_terms(vs, out)

        return RatFunc.from_laurent(move(self.numerator), move(self.denominator))

    def coefficients_in(self, name: str) -> dict[int, "RatFunc"]:
        """Split a function whose denominator is free of ``name`` by powers of it."""
        vs = self.varset
        k = vs.index[name]
        for exps in self.den.monoms():
            if exps[k]:
                raise AlgebraError(f"denominator depends on {name}")
        groups: dict[int, dict[Exponents, Any]] = {}
        for exps, c in zip(self.num.monoms(), self.num.coeffs()):
            e = _add_exps(exps, self.shift)
            power = e[k]
            rest = e[:k] + (0,) + e[k + 1 :]
            groups.setdefault(power, {})[rest] = _to_fraction(c)
        den = RatFunc._raw(vs, (0,) * len(vs), self.den, vs.ctx.from_dict({(0,) * len(vs): 1}))
        out = {}
        for power, terms in groups.items():
            out[power] = RatFunc.from_laurent(LaurentPoly.from_terms(vs, terms)) / den
        return out

    # Evaluation -------------------------------------------------------------

    def eval_mod(self, assignment: Mapping[str, int], prime: int = PRIME) -> int:
        return rf_eval_mod(self, assignment, prime)

    def eval_exact(self, assignment: Mapping[str, Any]) -> Fraction:
        """Exact evaluation at rational values (all variables in use must be given)."""
        vals = _assignment_vector(self, assignment, Fraction)
        num = _eval_terms_exact(self.num.monoms(), self.num.coeffs(), vals)
        den = _eval_terms_exact(self.den.monoms(), self.den.coeffs(), vals)
        scale = Fraction(1)
        for val, e in zip(vals, self.shift):
            if e:
                if val == 0:
                    raise SingularEvaluation("singular evaluation point")
                scale *= val ** int(e)
        if den == 0:
            raise SingularEvaluation("singular evaluation point")
        return scale * num / den

    def term_count(self) -> int:
        """Number of stored terms in numerator plus denominator."""
        return len(self.num) + len(self.den)

    def digest(self) -> str:
        """Stable hex digest of the canonical form, cheap even for huge values."""
        text = f"{self.varset.names}|{self.shift}|{self.num}|{self.den}"
        return hashlib.sha256(text.encode()).hexdigest()

    def to_string(self) -> str:
        num = format_laurent(self.numerator)
        if self.den.is_one():
            return num
        den = format_laurent(self.denominator)
        return f"({num})/({den})"


# ---------------------------------------------------------------------------
# Canonical string grammar
# ---------------------------------------------------------------------------


def _format_monomial(names: Sequence[str], exps: Exponents) -> list[str]:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return parts


def format_laurent(p: LaurentPoly) -> str:
    """Render terms as ``coeff*v^a*u^b*x1^c...`` in descending graded-lex order.

    The order is the one flint uses for the stored polynomial, so it is
    deterministic; exponents may be negative and unit coefficients are
    omitted.
    """
    if p.is_zero():
        return "0"
    names = p.varset.names
    pieces = []
    for exps, c in zip(p.poly.monoms(), p.poly.coeffs()):
        coeff = _to_fraction(c)
        mono = _format_monomial(names, _add_exps(exps, p.shift))
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = "*".join(mono)
        else:
            body = "*".join([str(mag)] + mono)
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = [("-" if first_sign == "-" else "") + first_body]
    out.extend(f" {sign} {body}" for sign, body in pieces[1:])
    return "".join(out)


# ---------------------------------------------------------------------------
# Modular arithmetic (hand-written; independent of flint)
# ---------------------------------------------------------------------------


class ModP:
    """Element of the prime field GF(p)."""

    __slots__ = ("value", "prime")

    def __init__(self, value: int, prime: int = PRIME) -> None:
        self.value = value % prime
        self.prime = prime

    def _coerce(self, other: Any) -> "ModP":
        if isinstance(other, ModP):
            if other.prime != self.prime:
                raise AlgebraError("field elements modulo different primes")
            return other
        if isinstance(other, int):
            return ModP(other, self.prime)
        if isinstance(other, Fraction):
            if other.denominator % self.prime == 0:
                raise SingularEvaluation("singular evaluation point")
            return ModP(other.numerator * pow(other.denominator, -1, self.prime), self.prime)
        return NotImplemented

    def __add__(self, other: Any) -> "ModP":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModP(self.value + other.value, self.prime)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "ModP":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModP(self.value - other.value, self.prime)

    def __rsub__(self, other: Any) -> "ModP":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModP(other.value - self.value, self.prime)

    def __neg__(self) -> "ModP":
        return ModP(-self.value, self.prime)

    def __mul__(self, other: Any) -> "ModP":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModP(self.value * other.value, self.prime)

    __rmul__ = __mul__

    def inverse(self) -> "ModP":
        if self.value == 0:
            raise SingularEvaluation("singular evaluation point")
        return ModP(pow(self.value, -1, self.prime), self.prime)

    def __truediv__(self, other: Any) -> "ModP":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "ModP":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "ModP":
        if k < 0:
            return self.inverse() ** (-k)
        return ModP(pow(self.value, k, self.prime), self.prime)

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, ModP):
            return NotImplemented
        return self.value == other.value and self.prime == other.prime

    def __hash__(self) -> int:
        return hash((self.value, self.prime))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"ModP({self.value})"


def is_zero(x: Any) -> bool:
    """Zero test that works for RatFunc, ModP, and plain numbers."""
    if isinstance(x, (RatFunc, ModP)):
        return x.is_zero()
    return x == 0


def _assignment_vector(f: RatFunc, assignment: Mapping[str, Any], conv: Callable) -> list:
    used = f.variables()
    missing = sorted(used - set(assignment))
    if missing:
        raise AlgebraError(f"assignment does not cover variables {missing}")
    return [conv(assignment[name]) if name in assignment else conv(0) for name in f.varset.names]


def _eval_terms_exact(monoms, coeffs, vals) -> Fraction:
    total = Fraction(0)
    for exps, c in zip(monoms, coeffs):
        term = _to_fraction(c)
        for val, e in zip(vals, exps):
            if e:
                term *= val ** int(e)
        total += term
    return total


def _eval_terms_mod(monoms, coeffs, vals: Sequence[int], prime: int) -> int:
    cache: dict[tuple[int, int], int] = {}
    total = 0
    for exps, c in zip(monoms, coeffs):
        cq = int(c.q) % prime
        if cq == 0:
            raise SingularEvaluation("coefficient denominator divisible by the prime")
        term = int(c.p) * pow(cq, -1, prime)
        for i, e in enumerate(exps):
            if e:
                key = (i, e)
                pw = cache.get(key)
                if pw is None:
                    pw = pow(vals[i], e, prime)
                    cache[key] = pw
                term = term * pw % prime
        total = (total + term) % prime
    return total


def rf_eval_mod(f: RatFunc, assignment: Mapping[str, int], prime: int = PRIME) -> int:
    """Evaluate ``f`` in GF(prime) at an integer assignment of its variables."""
    vals = [int(v) % prime for v in _assignment_vector(f, assignment, int)]
    num = _eval_terms_mod(f.num.monoms(), f.num.coeffs(), vals, prime)
    den = _eval_terms_mod(f.den.monoms(), f.den.coeffs(), vals, prime)
    if den == 0:
        raise SingularEvaluation("singular evaluation point")
    for val, e in zip(vals, f.shift):
        if e:
            if val == 0:
                raise SingularEvaluation("singular evaluation point")
            num = num * pow(val, e, prime) % prime
    return num * pow(den, -1, prime) % prime


# ---------------------------------------------------------------------------
# Fields handing out variables
# ---------------------------------------------------------------------------


class SymbolicField:
    """Hands out :class:`RatFunc` variables over a fixed :class:`VarSet`."""

    def __init__(self, varset: VarSet) -> None:
        self.varset = varset
        self.one = RatFunc.constant(varset, 1)
        self.zero = RatFunc.constant(varset, 0)

    @classmethod
    def standard(cls, nx: int, ny: int, nz: int = 0) -> "SymbolicField":
        return cls(VarSet.standard(nx, ny, nz))

    def var(self, name: str) -> RatFunc:
        return RatFunc.variable(self.varset, name)

    def const(self, c: Any) -> RatFunc:
        return RatFunc.constant(self.varset, c)

    @property
    def symbolic(self) -> bool:
        return True


class ModularField:
    """Hands out :class:`ModP` values standing in for the formal variables."""

    def __init__(self, values: Mapping[str, int], prime: int = PRIME) -> None:
        self.values = {k: int(v) % prime for k, v in values.items()}
        self.prime = prime
        self.one = ModP(1, prime)
        self.zero = ModP(0, prime)

    @classmethod
    def random(
        cls, names: Iterable[str], rng: random.Random, prime: int = PRIME
    ) -> "ModularField":
        return cls({name: rng.randrange(2, prime - 1) for name in names}, prime)

    def var(self, name: str) -> ModP:
        try:
            return ModP(self.values[name], self.prime)
        except KeyError:
            raise AlgebraError(f"no value assigned to variable {name}") from None

    def const(self, c: Any) -> ModP:
        return self.one * c

    @property
    def symbolic(self) -> bool:
        return False


# ---------------------------------------------------------------------------
# Matrices and determinants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RFMatrix:
    """Dense row-major matrix over a field (RatFunc or ModP entries)."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self) -> None:
        if self.rows <= 0 or self.cols <= 0:
            raise AlgebraError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise AlgebraError("entry count does not match the shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> "RFMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise AlgebraError("ragged rows")
        return cls(nrows, ncols, tuple(x for r in rows for x in r))

    @classmethod
    def diagonal(cls, diag: Sequence[Any], zero: Any) -> "RFMatrix":
        k = len(diag)
        return cls.from_rows([[diag[i] if i == j else zero for j in range(k)] for i in range(k)])

    def __getitem__(self, ij: tuple[int, int]) -> Any:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Any]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def map(self, fn: Callable[[Any], Any]) -> "RFMatrix":
        return RFMatrix(self.rows, self.cols, tuple(fn(x) for x in self.entries))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int] | None = None) -> "RFMatrix":
        col_idx = row_idx if col_idx is None else col_idx
        return RFMatrix.from_rows([[self[i, j] for j in col_idx] for i in row_idx])

    def __matmul__(self, other: "RFMatrix") -> "RFMatrix":
        if self.cols != other.rows:
            raise AlgebraError("shape mismatch in matrix product")
        out = []
        for i in range(self.rows):
            row = self.row(i)
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    a = row[k]
                    if is_zero(a):
                        continue
                    b = other[k, j]
                    if is_zero(b):
                        continue
                    acc = a * b if acc is None else acc + a * b
                out.append(acc if acc is not None else row[0] * 0)
        return RFMatrix(self.rows, other.cols, tuple(out))


def rf_det(m: RFMatrix) -> Any:
    """Determinant by fraction-free (Bareiss) elimination with exact division.

    Zero entries are skipped, which matters for the sparse monomial matrices
    the dual-group code produces.
    """
    if not m.is_square:
        raise AlgebraError("determinant of a non-square matrix")
    n = m.rows
    a = m.to_rows()
    one = a[0][0] ** 0
    sign = 1
    prev = one
    for k in range(n - 1):
        if is_zero(a[k][k]):
            pivot = next((i for i in range(k + 1, n) if not is_zero(a[i][k])), None)
            if pivot is None:
                return a[0][0] * 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                aij = row_i[j]
                if is_zero(aik):
                    if is_zero(aij):
                        continue
                    new = aij * akk
                else:
                    akj = row_k[j]
                    if is_zero(akj):
                        if is_zero(aij):
                            continue
                        new = aij * akk
                    elif is_zero(aij):
                        new = -(aik * akj)
                    else:
                        new = aij * akk - aik * akj
                row_i[j] = new if prev == one else new / prev
            row_i[k] = akk * 0
        prev = akk
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


# ---------------------------------------------------------------------------
# Normalization and identity testing
# ---------------------------------------------------------------------------


def rf_normalize(raw_num: LaurentPoly, raw_den: LaurentPoly) -> RatFunc:
    """Canonical form of ``raw_num / raw_den``."""
    if raw_den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    return RatFunc.from_laurent(raw_num, raw_den)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of an identity check; truthy iff the identity held."""

    equal: bool
    mode: str
    trials: int = 0
    prime: int | None = None
    seed: int | None = None
    resampled: int = 0
    detail: str = ""
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.equal


def rf_identity_equal(
    lhs: RatFunc,
    rhs: RatFunc,
    mode: str = "symbolic",
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    prime: int = PRIME,
) -> IdentityReport:
    """Decide ``lhs == rhs`` exactly (symbolic) or by random evaluation (modular)."""
    if lhs.varset is not rhs.varset:
        raise AlgebraError("identity sides over different variable sets")
    if mode == "symbolic":
        # Cross-multiplied comparison of canonical numerators.
        left = lhs.numerator * rhs.denominator
        right = rhs.numerator * lhs.denominator
        return IdentityReport(left == right, "symbolic", detail=f"{lhs} vs {rhs}" if left != right else "")
    if mode != "modular":
        raise AlgebraError(f"unknown identity mode {mode!r}")
    rng = random.Random(seed)
    names = lhs.varset.names
    resampled = 0
    done = 0
    while done < trials:
        point = {name: rng.randrange(1, prime) for name in names}
        try:
            a = rf_eval_mod(lhs, point, prime)
            b = rf_eval_mod(rhs, point, prime)
        except SingularEvaluation:
            resampled += 1
            if resampled > 100 * trials:
                raise
            continue
        if a != b:
            return IdentityReport(
                False, "modular", done + 1, prime, seed, resampled, "values differ", point
            )
        done += 1
    return IdentityReport(True, "modular", trials, prime, seed, resampled)


# ---------------------------------------------------------------------------
# Truncated power series in the formal variable X
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series ``sum c_k X^k`` known through ``X^order``."""

    coeffs: tuple
    order: int

    @classmethod
    def from_poly(cls, coeffs: Sequence[Any], order: int, zero: Any) -> "TruncatedSeries":
        padded = list(coeffs[: order + 1]) + [zero] * max(0, order + 1 - len(coeffs))
        return cls(tuple(padded), order)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        out = []
        for k in range(order + 1):
            acc = self.coeffs[0] * 0
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if not is_zero(a) and not is_zero(b):
                    acc = acc + a * b
            out.append(acc)
        return TruncatedSeries(tuple(out), order)

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if is_zero(c0):
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = c0**-1
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = c0 * 0
            for i in range(1, k + 1):
                a = self.coeffs[i]
                if not is_zero(a):
                    acc = acc + a * out[k - i]
            out.append(-acc * inv0)
        return TruncatedSeries(tuple(out), self.order)

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self * other.inverse()

    def scale(self, c: Any) -> "TruncatedSeries":
        return TruncatedSeries(tuple(x * c for x in self.coeffs), self.order)
