"""Satake parameters and dual-group representations as explicit matrices.

Every element we need lives in a torus times Frobenius, so every
representation matrix is monomial: a diagonal matrix times a permutation.
:class:`MonomialMatrix` keeps that structure, which makes
``det(1 - c*M)`` a product over cycles.  The dense :class:`RFMatrix` form
is always available for the Bareiss route (:func:`l_factor_from_rep`).

Conventions
-----------
* An element of ^L G_k in the torus coset is a pair of diagonals
  ``(first, second)`` followed by Frobenius.  In the inert case Frobenius
  swaps the two copies; in the split case it acts trivially.
* Base change sends ``t`` to ``(t, t*)`` where ``t*`` is the reversed
  inverse of ``t``.
* The mu-bar twist multiplies the second argument of the twisted tensor by
  ``(I, -I)`` (inert) or ``(u^-1 I, u I)`` (split).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any, Sequence

from .algebra import RFMatrix, rf_det
from .lfactors import CharacterTuple
from .rootdata import CaseDescriptor, WeylElement, longest_element, weyl_act


class DualGroupError(ValueError):
    """Invalid dual-group construction."""


# ---------------------------------------------------------------------------
# Monomial matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialMatrix:
    """Matrix sending basis vector j to ``entries[j] * e[perm[j]]``."""

    perm: tuple[int, ...]
    entries: tuple

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise DualGroupError("perm is not a permutation")
        if len(self.entries) != len(self.perm):
            raise DualGroupError("entries and perm differ in length")

    @property
    def dim(self) -> int:
        return len(self.perm)

    def to_rfmatrix(self, zero: Any) -> RFMatrix:
        k = self.dim
        flat = [zero] * (k * k)
        for j, (i, e) in enumerate(zip(self.perm, self.entries)):
            flat[i * k + j] = e
        return RFMatrix(k, k, tuple(flat))

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        # (A B) e_j = A (b_j e_{q(j)}) = b_j a_{q(j)} e_{p(q(j))}
        perm = tuple(self.perm[other.perm[j]] for j in range(other.dim))
        entries = tuple(other.entries[j] * self.entries[other.perm[j]] for j in range(other.dim))
        return MonomialMatrix(perm, entries)

    def cycles(self) -> list[list[int]]:
        seen = [False] * self.dim
        out = []
        for start in range(self.dim):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.perm[j]
            out.append(cyc)
        return out

    def one_minus_det(self, scalar: Any, one: Any) -> Any:
        """det(1 - scalar*M) as the product over cycles of 1 - scalar^len * (entry product)."""
        out = one
        for cyc in self.cycles():
            prod = one
            for j in cyc:
                prod = prod * self.entries[j]
            out = out * (one - scalar ** len(cyc) * prod)
        return out

    def restrict(self, indices: Sequence[int]) -> "MonomialMatrix":
        """Restriction to the span of the chosen basis vectors, which must be stable."""
        pos = {b: a for a, b in enumerate(indices)}
        perm = []
        for j in indices:
            target = self.perm[j]
            if target not in pos:
                raise DualGroupError("subspace is not stable under the matrix")
            perm.append(pos[target])
        return MonomialMatrix(tuple(perm), tuple(self.entries[j] for j in indices))


def _block_sum(*blocks: MonomialMatrix) -> MonomialMatrix:
    perm, entries, offset = [], [], 0
    for b in blocks:
        perm.extend(p + offset for p in b.perm)
        entries.extend(b.entries)
        offset += b.dim
    return MonomialMatrix(tuple(perm), tuple(entries))


# ---------------------------------------------------------------------------
# Satake parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SatakeParam:
    """A representative ``diag(...) . Fr`` in a torus of an L-group.

    For ``block`` in {"V", "W", "U"} the diagonal has k entries (unitary
    group of a k-dimensional space); for ``"G"`` it has 2k entries, the two
    GL_k factors concatenated.
    """

    case: CaseDescriptor
    block: str
    diag: tuple
    frobenius: bool = True

    def __post_init__(self) -> None:
        if self.block not in ("V", "W", "U", "G"):
            raise DualGroupError(f"unknown Satake block {self.block!r}")
        if self.block == "G" and len(self.diag) % 2:
            raise DualGroupError("a G_k parameter needs an even number of entries")

    @property
    def inert(self) -> bool:
        return self.case.is_inert

    @property
    def rank(self) -> int:
        return len(self.diag) // 2 if self.block == "G" else len(self.diag)

    def pair(self) -> tuple[tuple, tuple]:
        """The image in ^L G_k: base change for unitary blocks."""
        if self.block == "G":
            k = self.rank
            return tuple(self.diag[:k]), tuple(self.diag[k:])
        return tuple(self.diag), star_diag(self.diag)

    @classmethod
    def from_pair(cls, case: CaseDescriptor, first: Sequence[Any], second: Sequence[Any]) -> "SatakeParam":
        if len(first) != len(second):
            raise DualGroupError("both GL factors must have the same rank")
        return cls(case, "G", tuple(first) + tuple(second))


def star_diag(diag: Sequence[Any]) -> tuple:
    """Star of a diagonal matrix: reverse the entries and invert them."""
    return tuple(d**-1 for d in reversed(diag))


def satake_from_characters(
    case: CaseDescriptor, chars: CharacterTuple, filling: str = "upper"
) -> tuple[SatakeParam, SatakeParam]:
    """Torus representatives (S_V, S_W) attached to (chi, eta).

    Split: ``diag(chi)`` and ``diag(eta)``.  Inert: the characters fill the
    first floor(k/2) slots and the rest are 1 (``filling="upper"``).  The
    alternative ``"symmetric"`` filling ``diag(chi, [1], chi^-1 reversed)``
    squares the Frobenius-invariant and is kept only as a negative control.
    """
    one = chars.field.one
    if case.is_split:
        return (
            SatakeParam(case, "V", tuple(chars.chi)),
            SatakeParam(case, "W", tuple(chars.eta)),
        )

    def fill(vals: Sequence[Any], k: int) -> tuple:
        if filling == "upper":
            return tuple(vals) + (one,) * (k - len(vals))
        if filling == "symmetric":
            mid = (one,) if k % 2 else ()
            return tuple(vals) + mid + star_diag(vals)
        raise DualGroupError(f"unknown filling {filling!r}")

    return (
        SatakeParam(case, "V", fill(chars.chi, case.n)),
        SatakeParam(case, "W", fill(chars.eta, case.m)),
    )


def satake_pair(case: CaseDescriptor, chars: CharacterTuple, filling: str = "upper") -> tuple[SatakeParam, SatakeParam]:
    return satake_from_characters(case, chars, filling)


def weyl_satake(
    case: CaseDescriptor, chars: CharacterTuple, w_V: WeylElement | None, w_W: WeylElement | None
) -> tuple[SatakeParam, SatakeParam]:
    """The representative of w.S obtained by acting on the characters."""
    return satake_from_characters(case, chars.act(w_V, w_W))


def generic_S_r(case: CaseDescriptor, field: Any, names: str = "z") -> SatakeParam:
    """A generic element of ^L T_r, using variables z1..z_{2r}."""
    r = case.r
    if r < 1:
        raise DualGroupError("the auxiliary group G_r needs r >= 1")
    vals = tuple(field.var(f"{names}{k}") for k in range(1, 2 * r + 1))
    return SatakeParam(case, "G", vals)


def levi_components(S_V: SatakeParam) -> tuple[SatakeParam, SatakeParam]:
    """(S^(r), S^(m)) for a representative of ^L T_V viewed inside ^L M(X)."""
    case = S_V.case
    r, n = case.r, case.n
    d = S_V.diag
    first = tuple(d[:r])
    second = star_diag(d[n - r :])
    return (
        SatakeParam.from_pair(case, first, second),
        SatakeParam(case, "U", tuple(d[r : n - r])),
    )


def levi_assemble(case: CaseDescriptor, S_r: SatakeParam, S_W: SatakeParam) -> SatakeParam:
    """The representative of ^L U(V) with Levi components (S_r, S_W)."""
    t1, t2 = S_r.pair()
    return SatakeParam(case, "V", tuple(t1) + tuple(S_W.diag) + star_diag(t2))


def star_L(S: SatakeParam) -> SatakeParam:
    """(g1, g2) -> (g2*, g1*) on ^L G_k."""
    g1, g2 = S.pair()
    return SatakeParam.from_pair(S.case, star_diag(g2), star_diag(g1))


def conj_c(S: SatakeParam) -> SatakeParam:
    """Conjugate by c: swap the two GL factors."""
    g1, g2 = S.pair()
    return SatakeParam.from_pair(S.case, g2, g1)


def mu_bar_scalars(case: CaseDescriptor, mu_unit: Any) -> tuple[Any, Any]:
    """The scalars multiplying the two GL factors in the mu-bar twist."""
    if case.is_inert:
        return mu_unit**0, -(mu_unit**0)
    return mu_unit**-1, mu_unit


def mu_bar_twist(S: SatakeParam, mu_unit: Any) -> SatakeParam:
    c1, c2 = mu_bar_scalars(S.case, mu_unit)
    g1, g2 = S.pair()
    return SatakeParam.from_pair(S.case, [c1 * x for x in g1], [c2 * x for x in g2])


# ---------------------------------------------------------------------------
# star on matrices
# ---------------------------------------------------------------------------


def J_matrix(k: int, field: Any) -> RFMatrix:
    """The antidiagonal J_k with entries 1, -1, 1, ... read from the top row."""
    flat = [field.zero] * (k * k)
    for i in range(k):
        flat[i * k + (k - 1 - i)] = field.const((-1) ** i)
    return RFMatrix(k, k, tuple(flat))


def mat_inverse(m: RFMatrix, field: Any) -> RFMatrix:
    """Gauss-Jordan inverse over the field."""
    k = m.rows
    if m.cols != k:
        raise DualGroupError("only square matrices are invertible")
    a = [list(m.row(i)) + [field.one if i == j else field.zero for j in range(k)] for i in range(k)]
    for col in range(k):
        piv = next((i for i in range(col, k) if not _is_zero(a[i][col])), None)
        if piv is None:
            raise DualGroupError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col] ** -1
        a[col] = [x * inv for x in a[col]]
        for i in range(k):
            if i != col and not _is_zero(a[i][col]):
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return RFMatrix.from_rows([row[k:] for row in a])


def _is_zero(x: Any) -> bool:
    return x.is_zero()


def transpose(m: RFMatrix) -> RFMatrix:
    return RFMatrix.from_rows([[m[i, j] for i in range(m.rows)] for j in range(m.cols)])


def star(g_block: RFMatrix, k: int, field: Any) -> RFMatrix:
    """g* = J_k g^{-T} J_k^{-1}."""
    if g_block.rows != k or g_block.cols != k:
        raise DualGroupError(f"expected a {k}x{k} matrix")
    J = J_matrix(k, field)
    return J @ transpose(mat_inverse(g_block, field)) @ mat_inverse(J, field)


def kron(a: RFMatrix, b: RFMatrix) -> RFMatrix:
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            rows.append([a[i, j] * b[k, l] for j in range(a.cols) for l in range(b.cols)])
    return RFMatrix.from_rows(rows)


def block_diag(blocks: Sequence[RFMatrix], zero: Any) -> RFMatrix:
    size = sum(b.rows for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for i in range(b.rows):
            row = [zero] * size
            for j in range(b.cols):
                row[offset + j] = b[i, j]
            rows.append(row)
        offset += b.cols
    return RFMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepMatrix:
    """A representation matrix with its monomial structure and a label."""

    label: str
    monomial: MonomialMatrix
    zero: Any = dc_field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.monomial.dim

    @cached_property
    def mat(self) -> RFMatrix:
        return self.monomial.to_rfmatrix(self.zero)

    def restrict(self, indices: Sequence[int], label: str | None = None) -> "RepMatrix":
        return RepMatrix(label or self.label + "|sub", self.monomial.restrict(indices), self.zero)


def _zero_of(x: Any) -> Any:
    return x * 0


def _tensor_pair(a: Sequence[Any], b: Sequence[Any]) -> list:
    return [x * y for x in a for y in b]


def tensor_I_mu(
    S_k: SatakeParam, S_l: SatakeParam, mu_twist: bool = True, mu_unit: Any = None
) -> RepMatrix:
    """S_k (x)^I S_l on C^k(x)C^l + C^k(x)C^l, optionally twisting S_l by mu-bar."""
    if S_k.case.is_inert != S_l.case.is_inert:
        raise DualGroupError("the two parameters belong to different field kinds")
    if mu_twist:
        if mu_unit is None:
            raise DualGroupError("the mu-bar twist needs mu_unit")
        S_l = mu_bar_twist(S_l, mu_unit)
    a1, a2 = S_k.pair()
    b1, b2 = S_l.pair()
    diag = _tensor_pair(a1, b1) + _tensor_pair(a2, b2)
    half = len(a1) * len(b1)
    if S_k.inert:
        # (D . swap) e_j = D_{j'} e_{j'} with j' the matching index in the other copy
        perm = tuple((j + half) % (2 * half) for j in range(2 * half))
        entries = tuple(diag[p] for p in perm)
    else:
        perm = tuple(range(2 * half))
        entries = tuple(diag)
    zero = _zero_of(diag[0]) if diag else None
    return RepMatrix(f"tensorI(k={S_k.rank},l={S_l.rank},mu={mu_twist})", MonomialMatrix(perm, entries), zero)


def rs_index(i: int, j: int, copy: int, n: int, m: int) -> int:
    """Position of (0,...,e_i (x) e_j,...) (1-based i, j; copy 0 or 1)."""
    return copy * n * m + (i - 1) * m + (j - 1)


def v_minus_indices(case: CaseDescriptor) -> list[int]:
    n, m, rp = case.n, case.m, case.rprime
    return [
        rs_index(i, j, c, n, m)
        for c in (0, 1)
        for i in range(1, n + 1)
        for j in range(1, m + 1)
        if i + j > rp + 1
    ]


def v_tilde_minus_indices(m: int) -> list[int]:
    return [
        rs_index(i, j, c, m, m)
        for c in (0, 1)
        for i in range(1, m + 1)
        for j in range(1, m + 1)
        if i + j > m + 1
    ]


def y_minus_indices(case: CaseDescriptor) -> list[int]:
    n, m, r = case.n, case.m, case.r
    extra = [rs_index(j + r, m - j + 1, 0, n, m) for j in range(1, m + 1)]
    return v_minus_indices(case) + extra


def y_lagrangian_indices(case: CaseDescriptor) -> list[int]:
    """Y = R(w_{0,V}) Y_-; in the split case w_{0,V} sends e_i to +-e_{n+1-i} in both copies."""
    if case.is_inert:
        raise DualGroupError("no ^LT-stable Lagrangian in the inert case")
    n, m = case.n, case.m
    out = []
    for idx in y_minus_indices(case):
        c, rest = divmod(idx, n * m)
        i, j = divmod(rest, m)
        out.append(rs_index(n - i, j + 1, c, n, m))
    return sorted(out)


def asai(S_r: SatakeParam, sign: int) -> RepMatrix:
    """g1 (x) g2, with Frobenius acting by sign * (u (x) v -> v (x) u) in the inert case."""
    if sign not in (1, -1):
        raise DualGroupError("the Asai sign is +1 or -1")
    t1, t2 = S_r.pair()
    k = len(t1)
    diag = _tensor_pair(t1, t2)
    zero = _zero_of(diag[0])
    if not S_r.inert:
        return RepMatrix(f"Asai({sign})", MonomialMatrix(tuple(range(k * k)), tuple(diag)), zero)
    # M = D . (sign * s);  s e_{(a,b)} = e_{(b,a)}
    perm = tuple((j % k) * k + j // k for j in range(k * k))
    entries = tuple(sign * diag[perm[j]] for j in range(k * k))
    return RepMatrix(f"Asai({sign})", MonomialMatrix(perm, entries), zero)


def _theta_target(a: int, b: int, k: int) -> tuple[int, int, int]:
    """theta(E_ab) = sgn * E_{a'b'}, 0-based indices."""
    sgn = -((-1) ** (a + b))
    return k - 1 - b, k - 1 - a, sgn


def adjoint_unitary(S: SatakeParam, entries_filter=None) -> MonomialMatrix:
    """Ad(t.Fr) on gl_k for a unitary block; Frobenius acts by X -> -J X^T J^-1 when inert."""
    t = S.diag
    k = len(t)
    basis = [(a, b) for a in range(k) for b in range(k)]
    if entries_filter is not None:
        basis = [ab for ab in basis if entries_filter(*ab)]
    pos = {ab: i for i, ab in enumerate(basis)}
    perm, entries = [], []
    for a, b in basis:
        if S.inert:
            a2, b2, sgn = _theta_target(a, b, k)
        else:
            a2, b2, sgn = a, b, 1
        if (a2, b2) not in pos:
            raise DualGroupError("subspace is not stable under the adjoint action")
        perm.append(pos[(a2, b2)])
        entries.append(sgn * t[a2] * t[b2] ** -1)
    return MonomialMatrix(tuple(perm), tuple(entries))


def adjoint_G(S: SatakeParam, entries_filter=None) -> MonomialMatrix:
    """Ad on gl_k + gl_k; Frobenius swaps the two copies in the inert case."""
    t1, t2 = S.pair()
    k = len(t1)
    basis = [(a, b) for a in range(k) for b in range(k)]
    if entries_filter is not None:
        basis = [ab for ab in basis if entries_filter(*ab)]
    size = len(basis)
    ad1 = [t1[a] * t1[b] ** -1 for a, b in basis]
    ad2 = [t2[a] * t2[b] ** -1 for a, b in basis]
    diag = ad1 + ad2
    if S.inert:
        perm = tuple((j + size) % (2 * size) for j in range(2 * size))
        entries = tuple(diag[p] for p in perm)
    else:
        perm = tuple(range(2 * size))
        entries = tuple(diag)
    return MonomialMatrix(perm, entries)


def _zero_like(S: SatakeParam) -> Any:
    return _zero_of(S.diag[0]) if S.diag else None


def build_rep(which: str, *S: SatakeParam, mu_unit: Any = None, sign: int | None = None) -> RepMatrix:
    """R_mu, R_minus, R_tilde_minus, Y_mu, Asai, Ad or BC evaluated at Satake parameters.

    * ``R_mu``, ``R_minus``, ``Y_mu``: arguments (S_V, S_W), keyword ``mu_unit``.
    * ``R_tilde_minus``: arguments (S_W1, S_W2) for ^L(U(W) x U(W)).
    * ``Asai``: argument S_r and keyword ``sign``.
    * ``Ad``: any number of blocks, summed; unitary blocks use the Galois twist.
    * ``BC``: one unitary block, returned as the 2k-dimensional (g, g*) . Fr.
    """
    if which in ("R_mu", "R_minus", "Y_mu"):
        S_V, S_W = S
        rep = tensor_I_mu(S_V, S_W, True, mu_unit)
        case = S_V.case
        if which == "R_mu":
            return RepMatrix("R_mu", rep.monomial, rep.zero)
        if which == "R_minus":
            return rep.restrict(v_minus_indices(case), "R_minus")
        return rep.restrict(y_lagrangian_indices(case), "Y_mu")
    if which == "R_tilde_minus":
        S1, S2 = S
        rep = tensor_I_mu(S1, S2, True, mu_unit)
        return rep.restrict(v_tilde_minus_indices(S1.rank), "R_tilde_minus")
    if which == "Asai":
        if sign is None:
            raise DualGroupError("Asai needs a sign")
        return asai(S[0], sign)
    if which == "Ad":
        blocks = [adjoint_G(x) if x.block == "G" else adjoint_unitary(x) for x in S]
        return RepMatrix("Ad", _block_sum(*blocks), _zero_like(S[0]))
    if which == "BC":
        (x,) = S
        g1, g2 = x.pair()
        k = len(g1)
        diag = list(g1) + list(g2)
        if x.inert:
            perm = tuple((j + k) % (2 * k) for j in range(2 * k))
            entries = tuple(diag[p] for p in perm)
        else:
            perm, entries = tuple(range(2 * k)), tuple(diag)
        return RepMatrix("BC", MonomialMatrix(perm, entries), _zero_like(x))
    raise DualGroupError(f"unknown representation {which!r}")


# ---------------------------------------------------------------------------
# Weyl denominators and characters
# ---------------------------------------------------------------------------


def _block_of(i: int, sizes: Sequence[int]) -> int:
    acc = 0
    for b, s in enumerate(sizes):
        acc += s
        if i < acc:
            return b
    raise IndexError(i)


def d_quotient(S: SatakeParam, parabolic: str = "B", one: Any = None) -> Any:
    """det(1 - Ad(S)) on Lie(G^)/Lie(Q^) for one block.

    ``parabolic``: ``"B"`` (upper Borel, complement strictly lower),
    ``"B_minus"`` (complement strictly upper), ``"P_X"`` (unitary block of
    U(V) only: block-lower part for the Levi sizes (r, m, r)), or ``"G"``
    (the whole group, giving 1).
    """
    if one is None:
        one = S.diag[0] ** 0
    if parabolic == "G":
        return one
    if parabolic == "B":
        filt = lambda a, b: a > b  # noqa: E731
    elif parabolic == "B_minus":
        filt = lambda a, b: a < b  # noqa: E731
    elif parabolic == "P_X":
        if S.block != "V":
            raise DualGroupError("P_X is a parabolic of U(V)")
        c = S.case
        sizes = (c.r, c.m, c.r)
        filt = lambda a, b: _block_of(a, sizes) > _block_of(b, sizes)  # noqa: E731
    else:
        raise DualGroupError(f"unknown parabolic {parabolic!r}")
    mono = adjoint_G(S, filt) if S.block == "G" else adjoint_unitary(S, filt)
    if mono.dim == 0:
        return one
    return mono.one_minus_det(one, one)


def d_quotient_G(S_V: SatakeParam, S_W: SatakeParam, parabolic: str = "B") -> Any:
    """D_{G^/B^}(S) for G = U(V) x U(W); ``"B_plus"`` uses the opposite Borel on U(V)."""
    if parabolic == "B":
        return d_quotient(S_V, "B") * d_quotient(S_W, "B")
    if parabolic == "B_plus":
        return d_quotient(S_V, "B_minus") * d_quotient(S_W, "B")
    raise DualGroupError(f"unknown parabolic {parabolic!r}")


def _permutations(k: int):
    return itertools.permutations(range(k))


def weyl_group_G_r(S_r: SatakeParam) -> list[SatakeParam]:
    """The orbit {w.S_r : w in W_{G_r}}: diagonal S_r (inert) or S_r x S_r (split)."""
    t1, t2 = S_r.pair()
    k = len(t1)
    out = []
    if S_r.inert:
        for p in _permutations(k):
            out.append(SatakeParam.from_pair(S_r.case, [t1[i] for i in p], [t2[i] for i in p]))
    else:
        for p in _permutations(k):
            for q in _permutations(k):
                out.append(SatakeParam.from_pair(S_r.case, [t1[i] for i in p], [t2[i] for i in q]))
    return out


def chi_lambda(S_r: SatakeParam, lambda_r: Sequence[int]) -> Any:
    """The character of ^L T_r attached to lambda_r."""
    t1, t2 = S_r.pair()
    k = len(t1)
    one = t1[0] ** 0
    out = one
    if S_r.inert:
        if len(lambda_r) != k:
            raise DualGroupError("inert lambda_r has r entries")
        for a, e in enumerate(lambda_r):
            out = out * (t1[a] * t2[a]) ** e
        return out
    if len(lambda_r) != 2 * k:
        raise DualGroupError("split lambda_r has 2r entries")
    for a in range(k):
        out = out * t1[a] ** lambda_r[a] * t2[a] ** lambda_r[k + a]
    return out


def _dominant_blocks(lambda_r: Sequence[int], k: int, inert: bool) -> bool:
    blocks = [lambda_r] if inert else [lambda_r[:k], lambda_r[k:]]
    return all(all(b[i] >= b[i + 1] for i in range(len(b) - 1)) for b in blocks)


def ch_lambda(S_r: SatakeParam, lambda_r: Sequence[int]) -> Any:
    """Character of the irreducible representation of ^L G_r, via the Weyl sum."""
    k = S_r.rank
    if not _dominant_blocks(lambda_r, k, S_r.inert):
        raise DualGroupError(f"{tuple(lambda_r)} is not dominant")
    total = None
    for wS in weyl_group_G_r(S_r):
        term = chi_lambda(wS, lambda_r) / d_quotient(wS, "B")
        total = term if total is None else total + term
    return total


def schur_weyl(diag: Sequence[Any], lam: Sequence[int]) -> Any:
    """Schur polynomial of GL_k through the same Weyl-sum formula."""
    k = len(diag)
    lam = tuple(lam) + (0,) * (k - len(lam))
    total = None
    one = diag[0] ** 0
    for p in _permutations(k):
        x = [diag[i] for i in p]
        num = one
        for a in range(k):
            num = num * x[a] ** lam[a]
        den = one
        for a in range(k):
            for b in range(a):
                den = den * (one - x[a] * x[b] ** -1)
        term = num / den
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# L-factors from representations
# ---------------------------------------------------------------------------


def l_factor_from_rep(rep: RepMatrix, X: Any) -> Any:
    """det(1 - X * rep) by fraction-free elimination on the dense matrix."""
    k = rep.dim
    if k == 0:
        return X**0
    one = X**0
    m = rep.mat
    flat = []
    for i in range(k):
        for j in range(k):
            e = -(X * m[i, j])
            flat.append(one + e if i == j else e)
    return rf_det(RFMatrix(k, k, tuple(flat)))


def l_factor_cycles(rep: RepMatrix, X: Any) -> Any:
    """det(1 - X * rep) from the cycle structure of the monomial matrix."""
    return rep.monomial.one_minus_det(X, X**0)


def eigen_factors(rep: RepMatrix, X: Any) -> list:
    """The factors 1 - X^len * (cycle product), one per cycle."""
    one = X**0
    out = []
    for cyc in rep.monomial.cycles():
        prod = one
        for j in cyc:
            prod = prod * rep.monomial.entries[j]
        out.append(one - X ** len(cyc) * prod)
    return out


def symplectic_form(n: int, m: int, field: Any) -> RFMatrix:
    """Gram matrix of the pairing <(u,v),(u',v')> = u^T K v' - u'^T K v, K = J_n^-1 (x) J_m^-1."""
    K = kron(mat_inverse(J_matrix(n, field), field), mat_inverse(J_matrix(m, field), field))
    zero = RFMatrix.from_rows([[field.zero] * (n * m) for _ in range(n * m)])
    negKT = transpose(K).map(lambda x: -x)
    rows = []
    for i in range(n * m):
        rows.append(list(zero.row(i)) + list(K.row(i)))
    for i in range(n * m):
        rows.append(list(negKT.row(i)) + list(zero.row(i)))
    return RFMatrix.from_rows(rows)


def identity_component_R(g: RFMatrix, h: RFMatrix, field: Any) -> RFMatrix:
    """R_mu-bar of ((g, h), 1): g (x) h on the first copy and g* (x) h* on the second."""
    n, m = g.rows, h.rows
    return block_diag([kron(g, h), kron(star(g, n, field), star(h, m, field))], field.zero)


def longest_satake(case: CaseDescriptor, chars: CharacterTuple) -> tuple[SatakeParam, SatakeParam]:
    """w_{0,G} . S."""
    return satake_from_characters(
        case, chars.act(longest_element(case, "V"), longest_element(case, "W"))
    )


def select_satake_filling(case: CaseDescriptor) -> str:
    """Pick the inert Satake filling by checking both reformulation identities.

    Each candidate filling is tried at w_0 . S: the d-factors must equal the
    inverse Weyl denominator and the b-factor must equal det(1 - q^{-1/2}
    R_-).  Returns the unique passing filling; the split case has only one.
    """
    from .algebra import SymbolicField
    from .lfactors import b_factor, d_factor

    if case.is_split:
        return "upper"
    field = SymbolicField.standard(case.n_minus, case.m_minus)
    chars = CharacterTuple.generic(case, field)
    v = field.var("v")
    flipped = chars.act(longest_element(case, "V"), longest_element(case, "W"))
    d_target = d_factor(case, chars, "V") * d_factor(case, chars, "W")
    b_target = b_factor(case, chars.twist("mu_bar"))
    passing = []
    for filling in ("upper", "symmetric"):
        S_V, S_W = satake_from_characters(case, flipped, filling)
        R = build_rep("R_minus", S_V, S_W, mu_unit=chars.mu_unit)
        if d_quotient_G(S_V, S_W) ** -1 == d_target and l_factor_cycles(R, v**-1) == b_target:
            passing.append(filling)
    if len(passing) != 1:
        raise DualGroupError(f"expected exactly one valid filling, found {passing}")
    return passing[0]


__all__ = [
    "select_satake_filling",
    "DualGroupError",
    "MonomialMatrix",
    "RepMatrix",
    "SatakeParam",
    "asai",
    "build_rep",
    "ch_lambda",
    "chi_lambda",
    "conj_c",
    "d_quotient",
    "d_quotient_G",
    "eigen_factors",
    "generic_S_r",
    "identity_component_R",
    "l_factor_cycles",
    "l_factor_from_rep",
    "levi_assemble",
    "levi_components",
    "longest_satake",
    "mu_bar_twist",
    "satake_from_characters",
    "schur_weyl",
    "star",
    "star_L",
    "star_diag",
    "symplectic_form",
    "tensor_I_mu",
    "weyl_act",
    "weyl_group_G_r",
    "weyl_satake",
]
