"""Discrete valuations on the tower, with residue-field projections.

Three kinds, mirroring the tower levels they live on:

    PAdicValuation(p)            on Rationals; residue field F_p
    GaussValuation(inner, L)     on a FunctionField L = K(var); the value of
                                 a polynomial is the minimum inner value of
                                 its coefficients, of a fraction the
                                 difference; residue field kbar(var)
    ConicValuation(inner, C)     on a ConicExtension C with unit parameters;
                                 value is half the Gauss value of the norm
                                 A^2 - B^2*theta, which equals
                                 min(v'(A), v'(B)) when the residue conic is
                                 nonsplit; residue field is the conic
                                 extension of the residue field by the
                                 parameter residues

All values are normalized integers; v(0) is the +infinity sentinel INF.
Residues require value >= 0 and are functorial ring maps.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import faults
from .errors import (
    LevelMismatch,
    NegativeValue,
    NonIntegralValue,
    RamifiedParameters,
)
from .fields import (
    ConicExtension,
    FieldElement,
    FiniteField,
    FunctionField,
    Rationals,
    poly_trim,
)

INF = math.inf


class _ValuationBase:
    def value(self, a: FieldElement):
        raise NotImplementedError

    def residue(self, a: FieldElement) -> FieldElement:
        raise NotImplementedError

    def _check_domain(self, a):
        if not isinstance(a, FieldElement) or a.field != self.domain:
            raise LevelMismatch(f"element is not at the level of {self!r}")

    def is_unit(self, a: FieldElement) -> bool:
        return self.value(a) == 0


class PAdicValuation(_ValuationBase):
    """The p-adic valuation on the rationals, p an odd prime."""

    kind = "padic"

    def __init__(self, p: int):
        self.residue_field = FiniteField(p)  # rejects p = 2
        self.p = p
        self.domain = Rationals()
        self.uniformizer = self.domain(p)

    def __repr__(self):
        return f"PAdicValuation({self.p})"

    def __eq__(self, other):
        return isinstance(other, PAdicValuation) and other.p == self.p

    def __hash__(self):
        return hash(("PAdicValuation", self.p))

    def descriptor(self):
        return {"kind": "padic", "p": self.p}

    def _vp(self, n: int) -> int:
        if n == 0:
            return INF
        out = 0
        while n % self.p == 0:
            n //= self.p
            out += 1
        return out

    def value(self, a):
        self._check_domain(a)
        fr: Fraction = a.value
        if fr == 0:
            return INF
        return self._vp(fr.numerator) - self._vp(fr.denominator)

    def residue(self, a):
        self._check_domain(a)
        v = self.value(a)
        if v < 0:
            raise NegativeValue(f"value {v} < 0, no residue")
        fr = a.value
        k = self.residue_field
        if v > 0 or fr == 0:
            return k(0)
        num = k.from_int(fr.numerator)
        den = k.from_int(fr.denominator)
        return k.el(k.div(num, den))


class GaussValuation(_ValuationBase):
    """Coefficientwise extension of an inner valuation to base(var)."""

    kind = "gauss"

    def __init__(self, inner, domain: FunctionField):
        if not isinstance(domain, FunctionField):
            raise LevelMismatch("Gauss valuation lives on a FunctionField level")
        if inner.domain != domain.base:
            raise LevelMismatch("inner valuation does not match the coefficient field")
        self.inner = inner
        self.domain = domain
        self.residue_field = FunctionField(inner.residue_field, domain.var)
        self.uniformizer = domain.lift(inner.uniformizer)

    def __repr__(self):
        return f"GaussValuation({self.inner!r}, {self.domain!r})"

    def __eq__(self, other):
        return (
            isinstance(other, GaussValuation)
            and other.inner == self.inner
            and other.domain == self.domain
        )

    def __hash__(self):
        return hash(("GaussValuation", self.inner, self.domain))

    def descriptor(self):
        return {"kind": "gauss", "inner": self.inner.descriptor()}

    def _poly_value(self, coeffs):
        base = self.domain.base
        vals = [self.inner.value(base.el(c)) for c in coeffs]
        return min(vals, default=INF)

    def value(self, a):
        self._check_domain(a)
        num, den = a.value
        if not num:
            return INF
        return self._poly_value(num) - self._poly_value(den)

    def residue(self, a):
        self._check_domain(a)
        v = self.value(a)
        if v < 0:
            raise NegativeValue(f"value {v} < 0, no residue")
        rf = self.residue_field
        if v > 0 or v is INF:
            return rf(0)
        base = self.domain.base
        num, den = a.value
        m = self._poly_value(den)
        # scale so the denominator has value exactly 0, then reduce
        # coefficientwise; the scaled numerator has value v >= 0
        scale = self.inner.uniformizer ** (-m)
        rnum = [self.inner.residue(base.el(c) * scale).value for c in num]
        rden = [self.inner.residue(base.el(c) * scale).value for c in den]
        k = rf.base
        return rf.el(rf.make(poly_trim(k, rnum), poly_trim(k, rden)))


class ConicValuation(_ValuationBase):
    """Half-norm extension of a Gauss valuation to a conic extension.

    Requires unit conic parameters (the unramified setting).  The norm
    formula v(alpha) = (1/2) v'(A^2 - B^2*theta) always produces an
    integer here; when the residue conic is nonsplit the cheaper
    min(v'(A), v'(B)) is used instead.  residue_split selects the branch
    and must state whether the residue conic has a rational point.
    """

    kind = "conic-half-norm"

    def __init__(self, inner: GaussValuation, domain: ConicExtension, residue_split: bool):
        if not isinstance(domain, ConicExtension):
            raise LevelMismatch("conic valuation lives on a ConicExtension level")
        if not isinstance(inner, GaussValuation) or inner.domain != domain.inner:
            raise LevelMismatch("inner Gauss valuation must live on base(x)")
        base_val = inner.inner
        vd = base_val.value(domain.base.el(domain.d))
        vt = base_val.value(domain.base.el(domain.t))
        if vd != 0 or vt != 0:
            raise RamifiedParameters(
                f"conic parameters have values ({vd}, {vt}); both must be units"
            )
        self.inner = inner
        self.domain = domain
        self.residue_split = residue_split
        dbar = base_val.residue(domain.base.el(domain.d))
        tbar = base_val.residue(domain.base.el(domain.t))
        self.residue_field = ConicExtension(base_val.residue_field, dbar, tbar)
        self.uniformizer = domain.lift(inner.uniformizer)

    def __repr__(self):
        return f"ConicValuation({self.inner!r}, {self.domain!r})"

    def __eq__(self, other):
        return (
            isinstance(other, ConicValuation)
            and other.inner == self.inner
            and other.domain == self.domain
        )

    def __hash__(self):
        return hash(("ConicValuation", self.inner, self.domain))

    def descriptor(self):
        return {"kind": "conic-half-norm", "inner": self.inner.descriptor()}

    def value_min_pair(self, a):
        """min(v'(A), v'(B)); valid whenever the residue conic is nonsplit."""
        self._check_domain(a)
        A, B = self.domain.pair(a.value)
        va, vb = self.inner.value(A), self.inner.value(B)
        if faults.is_active(faults.NEGATE_FAST_PATH):
            if va is INF:
                return vb
            if vb is INF:
                return va
            return max(va, vb)
        return min(va, vb)

    def value_half_norm(self, a):
        """(1/2) v'(A^2 - B^2*theta); must be an integer for unit parameters."""
        self._check_domain(a)
        n = self.domain.norm(a.value)
        vn = self.inner.value(self.domain.inner.el(n))
        if vn is INF:
            return INF
        if vn % 2 != 0:
            raise NonIntegralValue(
                "odd norm value over unit conic parameters; internal inconsistency"
            )
        return vn // 2

    def value(self, a):
        if self.residue_split:
            return self.value_half_norm(a)
        return self.value_min_pair(a)

    def residue(self, a):
        self._check_domain(a)
        v = self.value(a)
        if v < 0:
            raise NegativeValue(f"value {v} < 0, no residue")
        rf = self.residue_field
        if v is INF:
            return rf(0)
        A, B = self.domain.pair(a.value)
        # value >= 0 forces both coordinates to have value >= 0: the norm
        # residue theta-bar is a nonsquare in the residue function field
        ra = self.inner.residue(A)
        rb = self.inner.residue(B)
        return rf.el((ra.value, rb.value))


class TransportedConicValuation(_ValuationBase):
    """Valuation on a conic extension whose parameters have even nonzero
    values at the base valuation.

    With d = d0 * pi^(2*alpha) and t = t0 * pi^(2*beta) for units d0, t0,
    the substitution x -> pi^(-alpha) * x, y -> pi^(-beta) * y identifies
    the conic of (d, t) with the unit-parameter conic of (d0, t0);
    elements are pushed through it and valued in the unit model.
    """

    kind = "conic-transported"

    def __init__(self, domain: ConicExtension, target: ConicValuation, alpha: int, beta: int):
        if not isinstance(domain, ConicExtension):
            raise LevelMismatch("transported valuation lives on a ConicExtension level")
        if target.domain.base != domain.base:
            raise LevelMismatch("unit model must share the coefficient field")
        self.domain = domain
        self.target = target
        self.alpha = alpha
        self.beta = beta
        self.residue_split = target.residue_split
        self.residue_field = target.residue_field
        self._base_val = target.inner.inner
        self.uniformizer = domain.lift(self._base_val.uniformizer)

    def _push_poly(self, cs, extra: int):
        base = self.domain.base
        pi = self._base_val.uniformizer
        out = [
            (base.el(c) * pi ** (-self.alpha * k + extra)).value
            for k, c in enumerate(cs)
        ]
        return poly_trim(base, out)

    def _push(self, a: FieldElement) -> FieldElement:
        A, B = a.value
        f0 = self.target.domain.inner

        def frac(payload, extra):
            num, den = payload
            return f0.make(self._push_poly(num, extra), self._push_poly(den, 0))

        return self.target.domain.el((frac(A, 0), frac(B, -self.beta)))

    def value(self, a):
        self._check_domain(a)
        return self.target.value(self._push(a))

    def residue(self, a):
        self._check_domain(a)
        return self.target.residue(self._push(a))

    def __repr__(self):
        return f"TransportedConicValuation({self.target!r}, {self.alpha}, {self.beta})"

    def __eq__(self, other):
        return (
            isinstance(other, TransportedConicValuation)
            and other.domain == self.domain
            and other.target == self.target
            and (other.alpha, other.beta) == (self.alpha, self.beta)
        )

    def __hash__(self):
        return hash(("TransportedConicValuation", self.domain, self.target, self.alpha, self.beta))

    def descriptor(self):
        return {
            "kind": "conic-transported",
            "target": self.target.descriptor(),
            "alpha": self.alpha,
            "beta": self.beta,
        }
