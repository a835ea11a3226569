"""Quaternion algebras (d, t) over a tower field, with reduced norms,
valuation extension data, and ramification analysis at a discrete
valuation of the base field.

Basis 1, i, j, ij with i^2 = d, j^2 = t, ij = -ji.  The base field must
have characteristic different from 2, which every tower field satisfies
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from . import faults
from .errors import (
    AlgebraMismatch,
    RamifiedAlgebra,
    ZeroElement,
)
from .fields import (
    FieldElement,
    FiniteField,
    FunctionField,
    poly_deg,
    poly_divmod,
    poly_monic_irreducible_factors,
    poly_mul,
    poly_pow_mod,
)
from .valuations import INF

_BASIS_NAMES = ("1", "i", "j", "ij")


class QuaternionAlgebra:
    """The quaternion algebra (d, t) over a base field."""

    __slots__ = ("base", "d", "t")

    def __init__(self, base, d, t):
        d = base(d)
        t = base(t)
        if d.is_zero() or t.is_zero():
            raise ValueError("quaternion parameters must be nonzero")
        self.base = base
        self.d = d
        self.t = t

    def el(self, w=0, a=0, b=0, c=0) -> "QuaternionElement":
        return QuaternionElement(
            self, (self.base(w), self.base(a), self.base(b), self.base(c))
        )

    def zero(self) -> "QuaternionElement":
        return self.el()

    def one(self) -> "QuaternionElement":
        return self.el(1)

    def i(self) -> "QuaternionElement":
        return self.el(0, 1)

    def j(self) -> "QuaternionElement":
        return self.el(0, 0, 1)

    def ij(self) -> "QuaternionElement":
        return self.el(0, 0, 0, 1)

    def scalar(self, c) -> "QuaternionElement":
        return self.el(c)

    def from_coeffs(self, coeffs) -> "QuaternionElement":
        w, a, b, c = coeffs
        return self.el(w, a, b, c)

    def __eq__(self, other):
        return (
            isinstance(other, QuaternionAlgebra)
            and other.base == self.base
            and other.d == self.d
            and other.t == self.t
        )

    def __hash__(self):
        return hash((self.base, self.d, self.t))

    def __repr__(self):
        return f"({self.d!r}, {self.t!r}) over {self.base!r}"


class QuaternionElement:
    """w + a*i + b*j + c*ij with coefficients in the base field."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: QuaternionAlgebra, coeffs):
        self.algebra = algebra
        self.coeffs = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, QuaternionElement):
            if other.algebra != self.algebra:
                raise AlgebraMismatch("operands live in different quaternion algebras")
            return other
        try:
            s = self.algebra.base(other)
        except Exception:
            return None
        return self.algebra.scalar(s)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_scalar(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuaternionElement(
            self.algebra, tuple(x + y for x, y in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return QuaternionElement(self.algebra, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        w1, a1, b1, c1 = self.coeffs
        w2, a2, b2, c2 = other.coeffs
        d = self.algebra.d
        t = self.algebra.t
        return QuaternionElement(
            self.algebra,
            (
                w1 * w2 + a1 * a2 * d + b1 * b2 * t - c1 * c2 * d * t,
                w1 * a2 + a1 * w2 + t * (c1 * b2 - b1 * c2),
                w1 * b2 + b1 * w2 + d * (a1 * c2 - c1 * a2),
                w1 * c2 + c1 * w2 + (a1 * b2 - b1 * a2),
            ),
        )

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        out = self.algebra.one()
        acc = self
        e = n
        while e:
            if e & 1:
                out = out * acc
            acc = acc * acc
            e >>= 1
        return out

    def conj(self) -> "QuaternionElement":
        w, a, b, c = self.coeffs
        return QuaternionElement(self.algebra, (w, -a, -b, -c))

    def trd(self) -> FieldElement:
        return self.coeffs[0] + self.coeffs[0]

    def nrd(self) -> FieldElement:
        w, a, b, c = self.coeffs
        d = self.algebra.d
        t = self.algebra.t
        return w * w - d * a * a - t * b * b + d * t * c * c

    def inv(self) -> "QuaternionElement":
        n = self.nrd()
        if n.is_zero():
            raise ZeroElement("element with zero reduced norm is not invertible")
        ninv = n.inv()
        return QuaternionElement(self.algebra, tuple(c * ninv for c in self.conj().coeffs))

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, QuaternionElement) else other
        if not isinstance(other, QuaternionElement) or other.algebra != self.algebra:
            return False
        return other.coeffs == self.coeffs

    def __hash__(self):
        return hash((self.algebra, self.coeffs))

    def __repr__(self):
        terms = []
        for name, c in zip(_BASIS_NAMES, self.coeffs):
            if c.is_zero():
                continue
            cs = repr(c)
            if name == "1":
                terms.append(cs)
            elif cs == "1":
                terms.append(name)
            elif cs == "-1":
                terms.append(f"-{name}")
            elif any(ch in cs for ch in "+-*/ ") and not (
                cs.startswith("-") and not any(ch in cs[1:] for ch in "+-*/ ")
            ):
                terms.append(f"({cs})*{name}")
            else:
                terms.append(f"{cs}*{name}")
        if not terms:
            return "0"
        out = terms[0]
        for term in terms[1:]:
            if term.startswith("-"):
                out += " - " + term[1:]
            else:
                out += " + " + term
        return out


def left_regular_matrix(u: QuaternionElement):
    """Matrix of x -> u*x on the basis (1, i, j, ij); columns are images.

    Its determinant equals nrd(u)^2, which serves as an independent
    cross-check on the multiplication table.
    """
    alg = u.algebra
    cols = []
    for gen in (alg.one(), alg.i(), alg.j(), alg.ij()):
        cols.append((u * gen).coeffs)
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def extval(v, u: QuaternionElement) -> Fraction:
    """The value (1/2) v(nrd(u)) of the extended valuation on the algebra.

    Returns INF on the zero element.
    """
    n = u.nrd()
    vn = v.value(n)
    if vn is INF:
        if not u.is_zero():
            raise ZeroElement(
                "reduced norm vanished on a nonzero element; the extended "
                "valuation needs a division algebra over the completion"
            )
        return INF
    return Fraction(vn, 2)


# ---------------------------------------------------------------------------
# ramification at a discrete valuation of the base field


@dataclass(frozen=True)
class RamificationReport:
    ramified: bool
    tame_class: FieldElement
    unit_rep: Optional[Tuple[FieldElement, FieldElement]]
    residue_params: Optional[Tuple[FieldElement, FieldElement]]
    split_over_residue: Optional[bool]


def _square_in_residue_field(rf, a: FieldElement) -> bool:
    return rf.is_square(a.value)


def _strip_even(v, a: FieldElement) -> Tuple[FieldElement, int]:
    """Scale a by an even uniformizer power into value 0 or 1."""
    m = v.value(a)
    a0 = a * v.uniformizer ** (-2 * (m // 2))
    return a0, m % 2


def _unit_parameters(alg: QuaternionAlgebra, v):
    """Unit parameters (d0, t0) of an isomorphic algebra, or None if the
    algebra is ramified at v."""
    d, t = alg.d, alg.t
    d0, pd = _strip_even(v, d)
    t0, pt = _strip_even(v, t)
    if pd == 0 and pt == 0:
        return d0, t0
    if pd == 1 and pt == 1:
        # (d, t) = (d, -d*t); the second slot then has even value
        return _unit_parameters(QuaternionAlgebra(alg.base, d0, -(d0 * t0)), v)
    unit = d0 if pd == 0 else t0
    # one slot has odd value: the algebra splits over the completion iff
    # the unit slot residue is a square, and is ramified otherwise
    if _square_in_residue_field(v.residue_field, v.residue(unit)):
        one = alg.base(1)
        return one, one
    return None


def tame_class(alg: QuaternionAlgebra, v) -> FieldElement:
    """Residue of (-1)^(v(d)v(t)) * d^v(t) * t^(-v(d)); a square in the
    residue field exactly when the algebra is unramified at v."""
    d, t = alg.d, alg.t
    vd, vt = v.value(d), v.value(t)
    sign = alg.base(-1) if (vd * vt) % 2 else alg.base(1)
    u = sign * d**vt * t ** (-vd)
    return v.residue(u)


def ramification(alg: QuaternionAlgebra, v) -> RamificationReport:
    """Ramification analysis of (d, t) at a valuation of the base field.

    Unramified means the algebra admits unit parameters up to isomorphism;
    the residue algebra is then the quaternion algebra of their residues,
    and `split_over_residue` records whether that algebra splits.
    """
    tc = tame_class(alg, v)
    if faults.is_active(faults.DROP_UNIT_REP):
        # corrupted variant for sensitivity tests: the raw parameters are
        # treated as unit representatives without any scaling
        rep = (alg.d, alg.t)
    else:
        rep = _unit_parameters(alg, v)
    if rep is None:
        return RamificationReport(
            ramified=True,
            tame_class=tc,
            unit_rep=None,
            residue_params=None,
            split_over_residue=None,
        )
    d0, t0 = rep
    dbar = v.residue(d0)
    tbar = v.residue(t0)
    split = residue_algebra_splits(v.residue_field, dbar, tbar)
    return RamificationReport(
        ramified=False,
        tame_class=tc,
        unit_rep=rep,
        residue_params=(dbar, tbar),
        split_over_residue=split,
    )


def residue_quaternion(alg: QuaternionAlgebra, v) -> QuaternionAlgebra:
    """The residue quaternion algebra at v; RamifiedAlgebra if none exists."""
    report = ramification(alg, v)
    if report.ramified:
        raise RamifiedAlgebra(f"{alg!r} is ramified at {v!r}")
    dbar, tbar = report.residue_params
    return QuaternionAlgebra(v.residue_field, dbar, tbar)


# ---------------------------------------------------------------------------
# splitting decision for the residue algebra


def residue_algebra_splits(rf, a: FieldElement, b: FieldElement) -> bool:
    if a.is_zero() or b.is_zero():
        raise ZeroElement("residue parameters must be nonzero units")
    if isinstance(rf, FiniteField):
        # every quaternion algebra over a finite field splits
        return True
    if isinstance(rf, FunctionField) and isinstance(rf.base, FiniteField):
        return _splits_over_rational_function_field(rf, a, b)
    raise NotImplementedError(f"no splitting decision over {rf!r}")


def _place_value(factor, num, den, base):
    def mult(poly):
        if not poly:
            return 0
        count = 0
        while True:
            q, r = poly_divmod(base, poly, factor)
            if r:
                return count
            poly = q
            count += 1

    return mult(num) - mult(den)


def _residue_at_place(base: FiniteField, factor, num, den):
    """Residue of num/den in GF(p^deg f) = base[s]/(f); needs place value 0."""

    def strip(poly):
        while True:
            q, r = poly_divmod(base, poly, factor)
            if r:
                return poly
            poly = q

    q = base.p ** poly_deg(factor)
    n0 = poly_divmod(base, strip(num), factor)[1]
    d0 = poly_divmod(base, strip(den), factor)[1]
    d_inv = poly_pow_mod(base, d0, q - 2, factor)
    return poly_divmod(base, poly_mul(base, n0, d_inv), factor)[1]


def _is_square_mod(base: FiniteField, poly, factor) -> bool:
    """Euler criterion for a nonzero class of GF(p^deg f)."""
    q = base.p ** poly_deg(factor)
    power = poly_pow_mod(base, poly, (q - 1) // 2, factor)
    return poly_deg(power) == 0 and power[0] == base.one()


def _splits_over_rational_function_field(rf: FunctionField, a, b) -> bool:
    """Split test for (a, b) over GF(p)(s): the tame class must be a
    square in the residue field of every place where either slot has a
    nonzero value (elsewhere the class is 1).  Finite places run over the
    monic irreducible factors of both slots; the degree place uses 1/s."""
    base = rf.base
    num_a, den_a = a.value
    num_b, den_b = b.value
    places = set()
    for poly in (num_a, den_a, num_b, den_b):
        places.update(poly_monic_irreducible_factors(base, poly))
    for f in sorted(places, key=lambda f: (poly_deg(f), f)):
        va = _place_value(f, num_a, den_a, base)
        vb = _place_value(f, num_b, den_b, base)
        if va == 0 and vb == 0:
            continue
        u = _tame_element(rf, a, b, va, vb)
        un, ud = u.value
        r = _residue_at_place(base, f, un, ud)
        if not _is_square_mod(base, r, f):
            return False
    va = poly_deg(den_a) - poly_deg(num_a)
    vb = poly_deg(den_b) - poly_deg(num_b)
    if va != 0 or vb != 0:
        u = _tame_element(rf, a, b, va, vb)
        un, ud = u.value
        # a unit at the degree place has num and den of equal degree; its
        # residue there is the ratio of leading coefficients
        lc = base.div(un[-1], ud[-1])
        if not base.is_square(lc):
            return False
    return True


def _tame_element(rf, a, b, va: int, vb: int):
    sign = rf(-1) if (va * vb) % 2 else rf(1)
    return sign * a**vb * b ** (-va)
