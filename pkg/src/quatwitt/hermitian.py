"""Skew-hermitian forms over a quaternion algebra, their exact
diagonalization, and the good-reduction certificate at a valuation of
the base field.

A form is an n x n Gram matrix G over the algebra with conj(G[l][k])
equal to -G[k][l]; the pairing is conjugate-linear in the first slot.
Nondegeneracy is checked on the 4n x 4n base-field model built from
left-regular blocks, which detects singular Gram matrices over split
algebras as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from . import faults
from .errors import (
    AlgebraMismatch,
    Degenerate,
    DimensionMismatch,
    RamifiedAlgebra,
    ZeroScalar,
)
from .quadforms import mat_det
from .quaternions import (
    QuaternionAlgebra,
    QuaternionElement,
    extval,
    left_regular_matrix,
    ramification,
)

CERTIFIED = "certified"
NO_CERTIFICATE = "no-certificate"


class SkewHermitianForm:
    """A nondegenerate skew-hermitian Gram matrix over a quaternion algebra."""

    __slots__ = ("algebra", "gram")

    def __init__(self, algebra: QuaternionAlgebra, gram):
        n = len(gram)
        if n == 0:
            raise DimensionMismatch("the form needs at least one basis vector")
        rows = []
        for row in gram:
            if len(row) != n:
                raise DimensionMismatch("gram matrix must be square")
            out = []
            for u in row:
                if isinstance(u, QuaternionElement):
                    if u.algebra != algebra:
                        raise AlgebraMismatch("gram entry from a different algebra")
                    out.append(u)
                else:
                    out.append(algebra.scalar(u))
            rows.append(tuple(out))
        for k in range(n):
            for l in range(n):
                if rows[l][k].conj() != -rows[k][l]:
                    raise ValueError("gram matrix is not skew-hermitian")
        self.algebra = algebra
        self.gram = tuple(rows)
        base = algebra.base
        big = []
        for k in range(n):
            blocks = [left_regular_matrix(self.gram[k][l]) for l in range(n)]
            for r in range(4):
                big.append([blocks[l][r][c] for l in range(n) for c in range(4)])
        if mat_det(base, big).is_zero():
            raise Degenerate("skew-hermitian gram matrix is singular")

    @classmethod
    def diagonal(cls, algebra: QuaternionAlgebra, entries) -> "SkewHermitianForm":
        entries = list(entries)
        n = len(entries)
        zero = algebra.zero()
        gram = [
            [entries[k] if k == l else zero for l in range(n)] for k in range(n)
        ]
        return cls(algebra, gram)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def is_diagonal(self) -> bool:
        return all(
            self.gram[k][l].is_zero()
            for k in range(self.rank)
            for l in range(self.rank)
            if k != l
        )

    def diagonal_entries(self) -> Tuple[QuaternionElement, ...]:
        return tuple(self.gram[k][k] for k in range(self.rank))

    def evaluate(self, xs, ys) -> QuaternionElement:
        """h(x, y), conjugate-linear in x and linear in y."""
        n = self.rank
        if len(xs) != n or len(ys) != n:
            raise DimensionMismatch(f"vectors must have length {n}")
        acc = self.algebra.zero()
        for k in range(n):
            xc = _as_element(self.algebra, xs[k]).conj()
            for l in range(n):
                acc = acc + xc * self.gram[k][l] * _as_element(self.algebra, ys[l])
        return acc

    def scale(self, lam) -> "SkewHermitianForm":
        lam = self.algebra.base(lam)
        if lam.is_zero():
            raise ZeroScalar("scaling by zero destroys the form")
        return SkewHermitianForm(
            self.algebra,
            [[u * lam for u in row] for row in self.gram],
        )

    def transform(self, p) -> "SkewHermitianForm":
        """Base change conj(P)^t * G * P; P singular raises Degenerate."""
        n = self.rank
        p = [
            [_as_element(self.algebra, p[r][c]) for c in range(n)] for r in range(n)
        ]
        pc = [[p[r][c].conj() for r in range(n)] for c in range(n)]
        gp = _qmat_mul(self.algebra, [list(r) for r in self.gram], p)
        return SkewHermitianForm(self.algebra, _qmat_mul(self.algebra, pc, gp))

    def __eq__(self, other):
        return (
            isinstance(other, SkewHermitianForm)
            and other.algebra == self.algebra
            and other.gram == self.gram
        )

    def __repr__(self):
        rows = "; ".join(
            "[" + ", ".join(repr(u) for u in row) + "]" for row in self.gram
        )
        return f"skew-hermitian [{rows}]"


def _as_element(algebra, u) -> QuaternionElement:
    if isinstance(u, QuaternionElement):
        if u.algebra != algebra:
            raise AlgebraMismatch("element from a different algebra")
        return u
    return algebra.scalar(u)


def _qmat_mul(algebra, m1, m2):
    n, k, m = len(m1), len(m2), len(m2[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = algebra.zero()
            for l in range(k):
                acc = acc + m1[i][l] * m2[l][j]
            row.append(acc)
        out.append(row)
    return out


def diagonalize_h(h: SkewHermitianForm):
    """Diagonalize by congruence over the algebra.

    Returns (entries, P) with conj(P)^t * G * P = diag(entries) checked
    exactly; every diagonal entry has nonzero reduced norm.  Pivots with
    reduced norm zero are repaired by mixing in another basis vector
    scaled by a small unit multiple.
    """
    alg = h.algebra
    n = h.rank
    g = [list(row) for row in h.gram]
    p = [
        [alg.one() if r == c else alg.zero() for c in range(n)] for r in range(n)
    ]

    def add_col(dst, src, lam):
        for r in range(n):
            g[r][dst] = g[r][dst] + g[r][src] * lam
        lc = lam.conj()
        for c in range(n):
            g[dst][c] = g[dst][c] + lc * g[src][c]
        for r in range(n):
            p[r][dst] = p[r][dst] + p[r][src] * lam

    def swap_cols(i, j):
        for r in range(n):
            g[r][i], g[r][j] = g[r][j], g[r][i]
        g[i], g[j] = g[j], g[i]
        for r in range(n):
            p[r][i], p[r][j] = p[r][j], p[r][i]

    for r in range(n):
        if g[r][r].nrd().is_zero():
            k = next(
                (i for i in range(r + 1, n) if not g[i][i].nrd().is_zero()), None
            )
            if k is not None:
                swap_cols(r, k)
            else:
                repaired = False
                for k in range(r, n):
                    for l in range(k + 1, n):
                        for mu in (alg.one(), alg.i(), alg.j(), alg.ij()):
                            for m in (1, 2, 3):
                                lam = mu * m
                                lc = lam.conj()
                                cand = (
                                    g[k][k]
                                    + g[k][l] * lam
                                    + lc * g[l][k]
                                    + lc * g[l][l] * lam
                                )
                                if not cand.nrd().is_zero():
                                    add_col(k, l, lam)
                                    if k != r:
                                        swap_cols(r, k)
                                    repaired = True
                                    break
                            if repaired:
                                break
                        if repaired:
                            break
                    if repaired:
                        break
                if not repaired:
                    raise Degenerate("no invertible pivot could be produced")
        piv_inv = g[r][r].inv()
        for k in range(r + 1, n):
            lam = -(piv_inv * g[r][k])
            if not lam.is_zero():
                add_col(k, r, lam)
    entries = tuple(g[i][i] for i in range(n))
    for u in entries:
        assert u.coeffs[0].is_zero(), "diagonal entry of a skew form must be pure"
    g0 = [list(row) for row in h.gram]
    pc = [[p[r][c].conj() for r in range(n)] for c in range(n)]
    check = _qmat_mul(alg, pc, _qmat_mul(alg, g0, p))
    for i in range(n):
        for j in range(n):
            want = entries[i] if i == j else alg.zero()
            assert check[i][j] == want, "congruence certificate failed"
    return entries, tuple(tuple(row) for row in p)


@dataclass(frozen=True)
class GoodReductionCertificate:
    status: str
    scaling: Optional[int]
    extvals: Tuple[Fraction, ...]
    diagonal: Tuple[QuaternionElement, ...]
    scaled_diagonal: Optional[Tuple[QuaternionElement, ...]]

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED


def good_reduction_certificate(h: SkewHermitianForm, v) -> GoodReductionCertificate:
    """Search for a central scaling pi^m making the diagonalized form a
    unimodular integral model at v.

    Certified needs every scaled entry to have extended value 0 with all
    coordinates of value >= 0; the scaling window is bounded by the
    largest entry value.  The algebra must be unramified at v.
    NoCertificate is a failed search, not a proof of bad reduction.
    """
    report = ramification(h.algebra, v)
    if report.ramified:
        raise RamifiedAlgebra(
            f"{h.algebra!r} is ramified at {v!r}; no residue data exists"
        )
    entries, _p = diagonalize_h(h)
    evals = tuple(extval(v, u) for u in entries)
    window = max(math.ceil(abs(e)) for e in evals)
    pi = v.uniformizer
    for m in range(-window, window + 1):
        lam = pi**m
        if faults.is_active(faults.DROP_UNIT_REP):
            # corrupted variant for sensitivity tests: the scaling is
            # found but never applied to the diagonal
            scaled = entries
        else:
            scaled = tuple(u * lam for u in entries)
        if any(extval(v, u) != 0 for u in scaled):
            continue
        if any(v.value(c) < 0 for u in scaled for c in u.coeffs):
            continue
        return GoodReductionCertificate(CERTIFIED, m, evals, entries, scaled)
    return GoodReductionCertificate(NO_CERTIFICATE, None, evals, entries, None)
