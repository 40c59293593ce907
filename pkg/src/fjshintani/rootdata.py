"""Case taxonomy, cocharacter cones, relative roots, Weyl groups, modular characters.

Indices are 0-based in code and 1-based in user-facing strings.  A torus
character is a tuple of ring elements ``chi = (chi_1, ..., chi_k)``; a root is
an integer vector ``alpha`` in the character lattice of the split torus, so
the value of a character on a coroot is the Laurent monomial
``prod_i chi_i ** coroot(alpha)_i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Sequence


class RootDataError(ValueError):
    """Invalid case parameters, cocharacters, or root selectors."""


class Kind(Enum):
    SPLIT = "split"
    INERT_EVEN = "inert-even"
    INERT_ODD = "inert-odd"


# ---------------------------------------------------------------------------
# Cases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseDescriptor:
    """Which family the pair U(V) x U(W) belongs to, with its ranks."""

    kind: Kind
    n: int
    m: int

    @property
    def is_split(self) -> bool:
        return self.kind is Kind.SPLIT

    @property
    def is_inert(self) -> bool:
        return not self.is_split

    @property
    def field_kind(self) -> str:
        return "split" if self.is_split else "inert"

    @property
    def r(self) -> int:
        return (self.n - self.m) // 2

    @property
    def rprime(self) -> int:
        return self.m + self.r

    @property
    def n_minus(self) -> int:
        return self.n if self.is_split else self.n // 2

    @property
    def m_minus(self) -> int:
        return self.m if self.is_split else self.m // 2

    @property
    def n_plus(self) -> int:
        return self.n_minus + (1 if self.kind is Kind.INERT_ODD else 0)

    @property
    def m_plus(self) -> int:
        return self.m_minus + (1 if self.kind is Kind.INERT_ODD else 0)

    def rank(self, group: str) -> int:
        """Rank of the character tuple for ``group`` in {V, W}."""
        if group == "V":
            return self.n_minus
        if group == "W":
            return self.m_minus
        raise RootDataError(f"unknown group tag {group!r}")

    def label(self) -> str:
        return f"{self.kind.value} (n={self.n}, m={self.m})"

    def __str__(self) -> str:
        return self.label()


def build_case(field_kind: str, n: int, m: int) -> CaseDescriptor:
    """Validate ``(field_kind, n, m)`` and fill in the derived ranks."""
    if field_kind not in ("split", "inert"):
        raise RootDataError(f"field kind must be 'split' or 'inert', got {field_kind!r}")
    if n < 0 or m < 0 or n < m or (n - m) % 2:
        raise RootDataError("invalid corank")
    if field_kind == "split":
        kind = Kind.SPLIT
    else:
        kind = Kind.INERT_EVEN if n % 2 == 0 else Kind.INERT_ODD
    return CaseDescriptor(kind, n, m)


# ---------------------------------------------------------------------------
# Cocharacters and cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cocharacter:
    lambda_V: tuple[int, ...]
    lambda_W: tuple[int, ...]

    @classmethod
    def of(cls, lambda_V: Sequence[int], lambda_W: Sequence[int]) -> "Cocharacter":
        return cls(tuple(int(a) for a in lambda_V), tuple(int(a) for a in lambda_W))

    @classmethod
    def zero(cls, case: CaseDescriptor) -> "Cocharacter":
        return cls((0,) * case.n_minus, (0,) * case.m_minus)


def _check_length(vec: Sequence[int], k: int, what: str) -> None:
    if len(vec) != k:
        raise RootDataError(f"{what} has length {len(vec)}, expected {k}")


def is_dominant_V(case: CaseDescriptor, lam: Sequence[int]) -> bool:
    """Membership in the positive cone of the U(V) cocharacters."""
    _check_length(lam, case.n_minus, "lambda_V")
    nonincreasing = all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))
    if case.is_split:
        return nonincreasing
    return nonincreasing and (not lam or lam[-1] >= 0)


def is_antidominant_W(case: CaseDescriptor, lam: Sequence[int]) -> bool:
    """Membership in the antidominant cone of the U(W) cocharacters."""
    _check_length(lam, case.m_minus, "lambda_W")
    nondecreasing = all(lam[i] <= lam[i + 1] for i in range(len(lam) - 1))
    if case.is_split:
        return nondecreasing
    return nondecreasing and (not lam or lam[-1] <= 0)


def in_negative_cone(case: CaseDescriptor, lam: Cocharacter) -> bool:
    return is_dominant_V(case, lam.lambda_V) and is_antidominant_W(case, lam.lambda_W)


def check_negative_cone(case: CaseDescriptor, lam: Cocharacter) -> None:
    if not is_dominant_V(case, lam.lambda_V):
        raise RootDataError(f"lambda_V={list(lam.lambda_V)} is not dominant for {case}")
    if not is_antidominant_W(case, lam.lambda_W):
        raise RootDataError(f"lambda_W={list(lam.lambda_W)} is not antidominant for {case}")


def lambda_r_length(case: CaseDescriptor) -> int:
    """Length of a G_r cocharacter: r (inert) or 2r as two blocks (split)."""
    return 2 * case.r if case.is_split else case.r


def lambda_r_blocks(case: CaseDescriptor, lam_r: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    _check_length(lam_r, lambda_r_length(case), "lambda_r")
    r = case.r
    lam_r = tuple(int(a) for a in lam_r)
    if case.is_split:
        return (lam_r[:r], lam_r[r:])
    return (lam_r,)


def is_in_Lambda_r_plus(case: CaseDescriptor, lam_r: Sequence[int]) -> bool:
    """Dominant for the Borel of G_r (each block nonincreasing)."""
    return all(
        all(b[i] >= b[i + 1] for i in range(len(b) - 1)) for b in lambda_r_blocks(case, lam_r)
    )


def is_in_Lambda_r_plusplus(case: CaseDescriptor, lam_r: Sequence[int]) -> bool:
    """Dominant for G_{r+1} through g -> diag(g, 1): each block also ends >= 0."""
    return is_in_Lambda_r_plus(case, lam_r) and all(
        not b or b[-1] >= 0 for b in lambda_r_blocks(case, lam_r)
    )


def embed_lambda_r(case: CaseDescriptor, lam_r: Sequence[int]) -> tuple[int, ...]:
    """The U(V) cocharacter of a G_r cocharacter.

    Inert: ``(lam, 0, ..., 0)``.  Split: the first block occupies the first r
    coordinates and the second block enters the last r coordinates negated
    and reversed, since G_r acts on the dual flag through the inverse.
    """
    blocks = lambda_r_blocks(case, lam_r)
    out = [0] * case.n_minus
    for i, a in enumerate(blocks[0]):
        out[i] = a
    if case.is_split:
        for i, a in enumerate(blocks[1]):
            out[case.n - 1 - i] = -a
    return tuple(out)


def lambda_r_degree(case: CaseDescriptor, lam_r: Sequence[int]) -> int:
    """Exponent d with |det lambda_r(varpi)| = q_F^{-d}."""
    blocks = lambda_r_blocks(case, lam_r)
    total = sum(sum(b) for b in blocks)
    return total if case.is_split else 2 * total


def enumerate_Lambda_r_plusplus(case: CaseDescriptor, max_degree: int) -> list[tuple[int, ...]]:
    """All lambda_r in the doubly dominant cone with degree <= max_degree."""
    r = case.r
    out = []
    if case.is_split:
        parts = _partitions_upto(max_degree, r)
        for a in parts:
            for b in parts:
                lam = a + b
                if lambda_r_degree(case, lam) <= max_degree:
                    out.append(lam)
    else:
        for a in _partitions_upto(max_degree // 2, r):
            out.append(a)
    out.sort(key=lambda lam: (lambda_r_degree(case, lam), tuple(-x for x in lam)))
    return out


def _partitions_upto(total: int, parts: int) -> list[tuple[int, ...]]:
    """Nonincreasing nonnegative tuples of the given length with sum <= total."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, cap: int) -> None:
        if len(prefix) == parts:
            out.append(tuple(prefix))
            return
        for a in range(min(cap, remaining), -1, -1):
            prefix.append(a)
            rec(prefix, remaining - a, a)
            prefix.pop()

    rec([], total, total)
    return out


# ---------------------------------------------------------------------------
# Weyl groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylElement:
    """Signed permutation: the basis character e_i is sent to signs[i] * e_{perm[i]}.

    On a character tuple this reads ``(w chi)_{perm[i]} = chi_i ** signs[i]``.
    """

    perm: tuple[int, ...]
    signs: tuple[int, ...]
    group_tag: str = "V"
    is_longest: bool = False

    @property
    def rank(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if other.rank != self.rank:
            raise RootDataError("composition of Weyl elements of different ranks")
        perm = tuple(self.perm[other.perm[i]] for i in range(self.rank))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.rank))
        return WeylElement(perm, signs, self.group_tag)

    def inverse(self) -> "WeylElement":
        k = self.rank
        perm = [0] * k
        signs = [1] * k
        for i in range(k):
            perm[self.perm[i]] = i
            signs[self.perm[i]] = self.signs[i]
        return WeylElement(tuple(perm), tuple(signs), self.group_tag)

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.rank)) and all(s == 1 for s in self.signs)

    def same_as(self, other: "WeylElement") -> bool:
        return self.perm == other.perm and self.signs == other.signs

    def act_on_vector(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Action on an integer vector in the character lattice."""
        out = [0] * self.rank
        for i, a in enumerate(vec):
            out[self.perm[i]] = self.signs[i] * a
        return tuple(out)


def identity_element(k: int, group_tag: str = "V") -> WeylElement:
    return WeylElement(tuple(range(k)), (1,) * k, group_tag)


def longest_element(case: CaseDescriptor, group_tag: str) -> WeylElement:
    k = case.rank(group_tag)
    if case.is_split:
        return WeylElement(tuple(reversed(range(k))), (1,) * k, group_tag, True)
    return WeylElement(tuple(range(k)), (-1,) * k, group_tag, True)


@lru_cache(maxsize=None)
def _weyl_elements(case: CaseDescriptor, group_tag: str) -> tuple[WeylElement, ...]:
    k = case.rank(group_tag)
    w0 = longest_element(case, group_tag)
    out = []
    sign_choices = [(1,) * k] if case.is_split else list(itertools.product((1, -1), repeat=k))
    for perm in itertools.permutations(range(k)):
        for signs in sign_choices:
            longest = perm == w0.perm and signs == w0.signs
            out.append(WeylElement(tuple(perm), tuple(signs), group_tag, longest))
    return tuple(out)


def weyl_elements(case: CaseDescriptor, group_tag: str) -> tuple[WeylElement, ...]:
    """Every element of W_V or W_W once; the longest one carries ``is_longest``."""
    if group_tag not in ("V", "W"):
        raise RootDataError(f"unknown group tag {group_tag!r}")
    return _weyl_elements(case, group_tag)


def weyl_elements_G(case: CaseDescriptor) -> list[tuple[WeylElement, WeylElement]]:
    """The product group W_G = W_V x W_W as pairs."""
    return [(a, b) for a in weyl_elements(case, "V") for b in weyl_elements(case, "W")]


def weyl_group_order(case: CaseDescriptor, group_tag: str) -> int:
    k = case.rank(group_tag)
    return math.factorial(k) * (1 if case.is_split else 2**k)


def weyl_act(w: WeylElement, chars: Sequence[Any]) -> tuple:
    """Apply a signed permutation to a character tuple."""
    if len(chars) != w.rank:
        raise RootDataError(
            f"Weyl element of rank {w.rank} applied to {len(chars)} characters"
        )
    out: list[Any] = [None] * w.rank
    for i, c in enumerate(chars):
        out[w.perm[i]] = c if w.signs[i] == 1 else c**-1
    return tuple(out)


def simple_reflections(case: CaseDescriptor, group_tag: str) -> list[WeylElement]:
    """Reflections in the simple roots, in the order of :func:`simple_roots`."""
    k = case.rank(group_tag)
    out = []
    for i in range(k - 1):
        perm = list(range(k))
        perm[i], perm[i + 1] = i + 1, i
        out.append(WeylElement(tuple(perm), (1,) * k, group_tag))
    if case.is_inert and k >= 1:
        signs = [1] * k
        signs[k - 1] = -1
        out.append(WeylElement(tuple(range(k)), tuple(signs), group_tag))
    return out


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------


class RootForm(Enum):
    DIFF = "e_a - e_b"
    SUM = "e_a + e_b"
    DOUBLE = "2e_a"
    SINGLE = "e_a"


@dataclass(frozen=True)
class Root:
    """A relative root, stored as its integer vector in the character lattice."""

    vector: tuple[int, ...]
    group_tag: str = "V"

    @property
    def form(self) -> RootForm:
        nz = [a for a in self.vector if a]
        if len(nz) == 2:
            return RootForm.DIFF if nz[0] * nz[1] < 0 else RootForm.SUM
        if abs(nz[0]) == 2:
            return RootForm.DOUBLE
        return RootForm.SINGLE

    def is_positive(self) -> bool:
        first = next(a for a in self.vector if a)
        return first > 0

    def coroot(self) -> tuple[int, ...]:
        """Coroot vector: long roots 2e_a pair through e_a, short roots e_a through 2e_a."""
        form = self.form
        if form is RootForm.DOUBLE:
            return tuple(a // 2 for a in self.vector)
        if form is RootForm.SINGLE:
            return tuple(2 * a for a in self.vector)
        return self.vector

    def negate(self) -> "Root":
        return Root(tuple(-a for a in self.vector), self.group_tag)

    def act(self, w: WeylElement) -> "Root":
        return Root(w.act_on_vector(self.vector), self.group_tag)

    def __str__(self) -> str:
        terms = []
        for i, a in enumerate(self.vector):
            if a:
                coeff = {1: "+", -1: "-"}.get(a, f"{a:+d}")
                terms.append(f"{coeff}e{i + 1}")
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


def _basis(k: int, *entries: tuple[int, int]) -> tuple[int, ...]:
    vec = [0] * k
    for idx, val in entries:
        vec[idx] += val
    return tuple(vec)


@lru_cache(maxsize=None)
def positive_roots(case: CaseDescriptor, group_tag: str) -> tuple[Root, ...]:
    """Positive non-divisible roots for B_V (or B_W)."""
    k = case.rank(group_tag)
    roots = [
        Root(_basis(k, (a, 1), (b, -1)), group_tag) for a in range(k) for b in range(a + 1, k)
    ]
    if case.is_inert:
        roots += [
            Root(_basis(k, (a, 1), (b, 1)), group_tag) for a in range(k) for b in range(a + 1, k)
        ]
        coeff = 2 if case.kind is Kind.INERT_EVEN else 1
        roots += [Root(_basis(k, (a, coeff)), group_tag) for a in range(k)]
    return tuple(roots)


def all_roots(case: CaseDescriptor, group_tag: str) -> tuple[Root, ...]:
    pos = positive_roots(case, group_tag)
    return pos + tuple(r.negate() for r in pos)


def simple_roots(case: CaseDescriptor, group_tag: str) -> list[Root]:
    k = case.rank(group_tag)
    out = [Root(_basis(k, (i, 1), (i + 1, -1)), group_tag) for i in range(k - 1)]
    if case.is_inert and k >= 1:
        coeff = 2 if case.kind is Kind.INERT_EVEN else 1
        out.append(Root(_basis(k, (k - 1, coeff)), group_tag))
    return out


def coroot_pairing(
    case: CaseDescriptor, chars: Sequence[Any], root: Root, short_root_coroot: str = "square"
) -> Any:
    """Value of the character tuple on the coroot of ``root``.

    ``short_root_coroot`` selects the pairing for the inert-odd root e_a:
    ``"square"`` gives chi_a**2 (the default), ``"plain"`` gives chi_a.
    """
    if root not in all_roots(case, root.group_tag):
        raise RootDataError(f"root {root} is not in the root system of {case}")
    if len(chars) != len(root.vector):
        raise RootDataError("character tuple and root have different ranks")
    co = root.coroot()
    if root.form is RootForm.SINGLE and short_root_coroot == "plain":
        co = root.vector
    elif short_root_coroot not in ("square", "plain"):
        raise RootDataError(f"unknown coroot convention {short_root_coroot!r}")
    value = None
    for c, e in zip(chars, co):
        if e:
            term = c**e
            value = term if value is None else value * term
    return value


# ---------------------------------------------------------------------------
# Dominance order
# ---------------------------------------------------------------------------


def dominance_leq(
    case: CaseDescriptor, lam1: Sequence[int], lam2: Sequence[int], group_tag: str = "V"
) -> bool:
    """True iff lam2 - lam1 is a nonnegative integer sum of simple coroots."""
    k = case.rank(group_tag)
    _check_length(lam1, k, "first cocharacter")
    _check_length(lam2, k, "second cocharacter")
    diff = [b - a for a, b in zip(lam1, lam2)]
    partial = list(itertools.accumulate(diff))
    if any(p < 0 for p in partial[:-1]):
        return False
    total = partial[-1] if partial else 0
    if case.is_split:
        return total == 0
    if case.kind is Kind.INERT_EVEN:
        return total >= 0
    return total >= 0 and total % 2 == 0


def project_lambda_X(case: CaseDescriptor, lam: Cocharacter) -> tuple[int, ...]:
    """lambda_V minus lambda_W placed at the W positions r+1, ..., r+m_-."""
    check_negative_cone(case, lam)
    out = list(lam.lambda_V)
    for j, a in enumerate(lam.lambda_W):
        out[case.r + j] -= a
    return tuple(out)


# ---------------------------------------------------------------------------
# Modular characters
# ---------------------------------------------------------------------------


def _root_multiplicity(case: CaseDescriptor, root: Root) -> int:
    """F-dimension of the root space (counting the divisible companion of e_a)."""
    if case.is_split:
        return 1
    form = root.form
    if form in (RootForm.DIFF, RootForm.SUM):
        return 2
    if form is RootForm.DOUBLE:
        return 1
    # e_a has an E-valued root space, and 2e_a an F-line on top of it.
    return 4


def _pair(lam: Sequence[int], vec: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(lam, vec))


def _rho_exponent(case: CaseDescriptor, roots: Sequence[Root], lam: Sequence[int]) -> int:
    """Sum over roots of multiplicity * <lam, root>; e_a also carries 2e_a."""
    return sum(_root_multiplicity(case, root) * _pair(lam, root.vector) for root in roots)


def _gr_positive_roots(case: CaseDescriptor) -> list[Root]:
    """Positive roots of G_r inside U(V), as vectors on the U(V) torus."""
    k = case.n_minus
    r = case.r
    roots = [Root(_basis(k, (a, 1), (b, -1))) for a in range(r) for b in range(a + 1, r)]
    if case.is_split:
        n = case.n
        roots += [
            Root(_basis(k, (a, 1), (b, -1))) for a in range(n - r, n) for b in range(a + 1, n)
        ]
    return roots


def _w_roots_in_V(case: CaseDescriptor) -> set[tuple[int, ...]]:
    """Vectors of all U(W) roots seen on the U(V) torus (W sits at positions r..)."""
    k = case.n_minus
    r = case.r
    out = set()
    for root in all_roots(case, "W"):
        vec = [0] * k
        for j, a in enumerate(root.vector):
            vec[r + j] = a
        out.add(tuple(vec))
    return out


def _levi_MX_roots(case: CaseDescriptor) -> set[tuple[int, ...]]:
    gr = {root.vector for root in _gr_positive_roots(case)}
    gr |= {tuple(-a for a in v) for v in gr}
    return gr | _w_roots_in_V(case)


def delta_exponent(case: CaseDescriptor, which: str, lam: Any) -> int:
    """Integer e with delta_which(lambda(varpi)) = v**e, v**2 = q_F."""
    if which == "B_V":
        lam_v = tuple(lam)
        _check_length(lam_v, case.n_minus, "lambda_V")
        return -2 * _rho_exponent(case, positive_roots(case, "V"), lam_v)
    if which == "B_W":
        lam_w = tuple(lam)
        _check_length(lam_w, case.m_minus, "lambda_W")
        return -2 * _rho_exponent(case, positive_roots(case, "W"), lam_w)
    if which == "B_J":
        lam_w = tuple(lam)
        return delta_exponent(case, "B_W", lam_w) + abs_exponent(case, lam_w)
    if which == "B_plus":
        if not isinstance(lam, Cocharacter):
            raise RootDataError("B_plus needs a full cocharacter")
        return -delta_exponent(case, "B_V", lam.lambda_V) + delta_exponent(
            case, "B_W", lam.lambda_W
        )
    if which in ("B_r", "P_X", "P"):
        lam_v = tuple(lam)
        _check_length(lam_v, case.n_minus, "lambda_V")
        pos_v = positive_roots(case, "V")
        if which == "B_r":
            roots = _gr_positive_roots(case)
        elif which == "P_X":
            levi = _levi_MX_roots(case)
            roots = [root for root in pos_v if root.vector not in levi]
        else:
            w_roots = _w_roots_in_V(case)
            roots = [root for root in pos_v if root.vector not in w_roots]
        return -2 * _rho_exponent(case, roots, lam_v)
    raise RootDataError(f"unknown modular character selector {which!r}")


def abs_exponent(case: CaseDescriptor, lam_w: Sequence[int]) -> int:
    """Exponent e with |t(lam_w)| = v**e (|.|_E inert, |.|_F split)."""
    total = sum(lam_w)
    return -4 * total if case.is_inert else -2 * total


def delta_character(case: CaseDescriptor, which: str, lam: Any, field: Any) -> Any:
    """delta_which(lambda(varpi)) as a power of the field variable v."""
    return field.var("v") ** delta_exponent(case, which, lam)


def character_on_cocharacter(chars: Sequence[Any], lam: Sequence[int], one: Any) -> Any:
    """The unramified character value prod chi_i ** lam_i."""
    if len(chars) != len(lam):
        raise RootDataError("character tuple and cocharacter have different lengths")
    out = one
    for c, a in zip(chars, lam):
        if a:
            out = out * c**a
    return out
