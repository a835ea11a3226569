"""Exact arithmetic in a tower of fields.

Levels, built inductively:

    Rationals()                  reduced integer fractions
    FiniteField(p)               prime field, p an odd prime
    FunctionField(base, var)     rational functions base(var)
    ConicExtension(base, d, t)   function field of the conic d*x^2 + t*y^2 = 1

A field object implements a raw-value protocol (zero, one, add, mul, inv,
...) over canonical hashable payloads; user-facing arithmetic goes through
the FieldElement wrapper, which overloads the operators.  Canonical forms
are unique, so equality of payloads is equality of elements:

    Rationals        Fraction in lowest terms
    FiniteField      least nonnegative residue, an int
    FunctionField    pair (num, den) of dense coefficient tuples,
                     gcd-reduced, den monic
    ConicExtension   pair (A, B) of FunctionField payloads in the inner
                     field base(x), standing for A + B*y with the rewrite
                     y^2 -> (1 - d*x^2)/t always applied

Characteristic 2 is rejected everywhere.  Elements parse from a small
expression grammar (integers, the tower's symbols, + - * / ^, parentheses)
and print back in a form the parser accepts.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import (
    DivisionByZero,
    EvenResidueChar,
    LevelMismatch,
    NotASquare,
    ParseError,
)


class FieldElement:
    """A raw payload tagged with its field; operators dispatch to the field."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return other
            lifted = self.field.lift(other)
            if lifted is not None:
                return lifted
            raise LevelMismatch(
                f"cannot combine an element of {other.field} with one of {self.field}"
            )
        if isinstance(other, int):
            return FieldElement(self.field, self.field.from_int(other))
        if isinstance(other, Fraction):
            return FieldElement(self.field, self.field.from_fraction(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.value, o.value))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(o.value, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.value, o.value))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(o.value, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        f = self.field
        if n < 0:
            base = f.inv(self.value)
            n = -n
        else:
            base = self.value
        out = f.one()
        for _ in range(n):
            out = f.mul(out, base)
        return FieldElement(f, out)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.value == o.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return not self.field.is_zero(self.value)

    def is_zero(self):
        return self.field.is_zero(self.value)

    def inv(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __repr__(self):
        return self.field.to_str(self.value)


class _FieldBase:
    """Shared conveniences over the raw-value protocol."""

    def el(self, value):
        return FieldElement(self, value)

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_fraction(self, fr: Fraction):
        return self.div(self.from_int(fr.numerator), self.from_int(fr.denominator))

    def is_zero(self, a):
        return a == self.zero()

    def lift(self, elem):
        """Embed an element of a lower level, or None if not embeddable."""
        return None

    def symbols(self):
        """Names available to the expression parser at this level."""
        return {}

    def parse(self, text: str) -> FieldElement:
        return _Parser(self, _tokenize(text)).parse()

    def __call__(self, v):
        if isinstance(v, FieldElement):
            if v.field == self:
                return v
            lifted = self.lift(v)
            if lifted is None:
                raise LevelMismatch(f"cannot view an element of {v.field} in {self}")
            return lifted
        if isinstance(v, int):
            return self.el(self.from_int(v))
        if isinstance(v, Fraction):
            return self.el(self.from_fraction(v))
        if isinstance(v, str):
            return self.parse(v)
        raise LevelMismatch(f"cannot interpret {v!r} in {self}")

    def is_square(self, a) -> bool:
        try:
            self.sqrt(a)
        except NotASquare:
            return False
        return True


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Rationals(_FieldBase):
    """The rational numbers with Fraction payloads."""

    characteristic = 0

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Rationals")

    def __repr__(self):
        return "Rationals()"

    def from_int(self, n: int):
        return Fraction(n)

    def from_fraction(self, fr: Fraction):
        return fr

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def sqrt(self, a):
        if a < 0:
            raise NotASquare(f"{a} is negative")
        rn, rd = isqrt(a.numerator), isqrt(a.denominator)
        if rn * rn != a.numerator or rd * rd != a.denominator:
            raise NotASquare(f"{a} is not a rational square")
        return Fraction(rn, rd)

    def to_str(self, a):
        return str(a)


class FiniteField(_FieldBase):
    """Prime field of odd order p; payloads are least nonnegative residues."""

    def __init__(self, p: int):
        if p == 2:
            raise EvenResidueChar("characteristic 2 is outside scope")
        if not _is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        self.p = p
        self.characteristic = p

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.p == self.p

    def __hash__(self):
        return hash(("FiniteField", self.p))

    def __repr__(self):
        return f"FiniteField({self.p})"

    def from_int(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero("inverse of 0 mod %d" % self.p)
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def elements(self):
        return range(self.p)

    def is_square(self, a) -> bool:
        if a % self.p == 0:
            return True
        return pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a):
        p = self.p
        a %= p
        if a == 0:
            return 0
        if not self.is_square(a):
            raise NotASquare(f"{a} is not a square mod {p}")
        if p % 4 == 3:
            return pow(a, (p + 1) // 4, p)
        # Tonelli-Shanks, p = 1 mod 4
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
        return r

    def to_str(self, a):
        return str(a % self.p)


# ---------------------------------------------------------------------------
# dense polynomial helpers over an arbitrary base field
#
# A polynomial is a tuple of base payloads, lowest degree first, with no
# trailing zeros; () is the zero polynomial.


def poly_trim(base, cs):
    cs = list(cs)
    while cs and base.is_zero(cs[-1]):
        cs.pop()
    return tuple(cs)


def poly_deg(cs) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(cs) - 1


def poly_const(base, c):
    return () if base.is_zero(c) else (c,)


def poly_add(base, f, g):
    n = max(len(f), len(g))
    out = []
    for k in range(n):
        a = f[k] if k < len(f) else base.zero()
        b = g[k] if k < len(g) else base.zero()
        out.append(base.add(a, b))
    return poly_trim(base, out)


def poly_neg(base, f):
    return tuple(base.neg(c) for c in f)


def poly_sub(base, f, g):
    return poly_add(base, f, poly_neg(base, g))


def poly_scale(base, f, c):
    if base.is_zero(c):
        return ()
    return tuple(base.mul(a, c) for a in f)


def poly_mul(base, f, g):
    if not f or not g:
        return ()
    out = [base.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = base.add(out[i + j], base.mul(a, b))
    return poly_trim(base, out)


def poly_divmod(base, f, g):
    if not g:
        raise DivisionByZero("polynomial division by zero")
    q = [base.zero()] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    inv_lead = base.inv(g[-1])
    while len(r) >= len(g) and any(not base.is_zero(c) for c in r):
        if base.is_zero(r[-1]):
            r.pop()
            continue
        shift = len(r) - len(g)
        coef = base.mul(r[-1], inv_lead)
        q[shift] = coef
        for k in range(len(g)):
            r[shift + k] = base.sub(r[shift + k], base.mul(coef, g[k]))
        r.pop()
    return poly_trim(base, q), poly_trim(base, r)


def poly_gcd(base, f, g):
    """Monic gcd, or () when both inputs are zero."""
    a, b = f, g
    while b:
        if len(b) == 1:
            return (base.one(),)
        if len(b) == 2:
            c = base.div(b[0], b[1])
            if base.is_zero(poly_eval(base, a, base.neg(c))):
                return (c, base.one())
            return (base.one(),)
        a, b = b, poly_divmod(base, a, b)[1]
    if not a:
        return ()
    return poly_scale(base, a, base.inv(a[-1]))


def poly_eval(base, f, v):
    out = base.zero()
    for c in reversed(f):
        out = base.add(base.mul(out, v), c)
    return out


def poly_pow_mod(base, f, e: int, mod):
    if poly_deg(mod) <= 0:
        return ()
    out = poly_const(base, base.one())
    f = poly_divmod(base, f, mod)[1]
    while e > 0:
        if e & 1:
            out = poly_divmod(base, poly_mul(base, out, f), mod)[1]
        f = poly_divmod(base, poly_mul(base, f, f), mod)[1]
        e >>= 1
    return out


def poly_sqrt(base, f):
    """Exact polynomial square root, or None.  Char != 2 assumed."""
    if not f:
        return ()
    n = poly_deg(f)
    if n % 2 != 0:
        return None
    if not base.is_square(f[-1]):
        return None
    half = n // 2
    r = [base.zero()] * (half + 1)
    r[half] = base.sqrt(f[-1])
    lead2 = base.inv(base.add(r[half], r[half]))
    for k in range(half - 1, -1, -1):
        # coefficient of x^(half+k) in r^2, using entries above k only
        acc = base.zero()
        for i in range(k + 1, half + 1):
            j = half + k - i
            if k + 1 <= j <= half:
                acc = base.add(acc, base.mul(r[i], r[j]))
        target = f[half + k] if half + k < len(f) else base.zero()
        r[k] = base.mul(base.sub(target, acc), lead2)
    r = poly_trim(base, r)
    if poly_mul(base, r, r) != poly_trim(base, f):
        return None
    return r


def poly_monic_irreducible_factors(base, f):
    """Multiset of monic irreducible factors over a finite base field.

    Returns a dict factor -> multiplicity.  Trial division by monic
    polynomials of increasing degree; fine at desk-scale degrees.
    """
    out = {}
    f = poly_scale(base, f, base.inv(f[-1]))
    deg = poly_deg(f)
    d = 1
    while poly_deg(f) >= 1 and d <= poly_deg(f) // 2:
        for g in _monic_polys(base, d):
            if poly_deg(f) < d:
                break
            q, r = poly_divmod(base, f, g)
            while not r:
                out[g] = out.get(g, 0) + 1
                f = q
                q, r = poly_divmod(base, f, g)
        d += 1
    if poly_deg(f) >= 1:
        out[f] = out.get(f, 0) + 1
    return out


def _monic_polys(base, d: int):
    """All monic polynomials of degree d over a finite base field."""

    def rec(k):
        if k == d:
            yield (base.one(),)
            return
        for tail in rec(k + 1):
            for c in base.elements():
                yield (c,) + tail

    yield from rec(0)


def _join_terms(terms):
    out = terms[0]
    for s in terms[1:]:
        if s.startswith("-"):
            out += " - " + s[1:]
        else:
            out += " + " + s
    return out


_SAFE_CHARS = set("0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_/^")


def _factor_safe(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return bool(body) and all(ch in _SAFE_CHARS for ch in body)


def _term_safe(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return bool(body) and not any(ch in "+-" for ch in body)


def poly_to_str(base, cs, var: str) -> str:
    if not cs:
        return "0"
    terms = []
    for k in range(len(cs) - 1, -1, -1):
        c = cs[k]
        if base.is_zero(c):
            continue
        cstr = base.to_str(c)
        if k == 0:
            terms.append(cstr if _term_safe(cstr) else "(" + cstr + ")")
            continue
        vp = var if k == 1 else f"{var}^{k}"
        if cstr == "1":
            terms.append(vp)
        elif cstr == "-1":
            terms.append("-" + vp)
        elif _factor_safe(cstr):
            terms.append(cstr + "*" + vp)
        else:
            terms.append("(" + cstr + ")*" + vp)
    return _join_terms(terms)


class FunctionField(_FieldBase):
    """Rational functions base(var) as reduced fractions of polynomials."""

    def __init__(self, base, var: str):
        if not var.isidentifier():
            raise ValueError(f"variable name {var!r} is not an identifier")
        if var in base.symbols():
            raise ValueError(f"variable {var!r} shadows a symbol of {base}")
        self.base = base
        self.var = var
        self.characteristic = base.characteristic

    def __eq__(self, other):
        return (
            isinstance(other, FunctionField)
            and other.base == self.base
            and other.var == self.var
        )

    def __hash__(self):
        return hash(("FunctionField", self.base, self.var))

    def __repr__(self):
        return f"FunctionField({self.base!r}, {self.var!r})"

    def make(self, num, den):
        """Canonicalize a numerator/denominator pair of coefficient tuples."""
        base = self.base
        num = poly_trim(base, num)
        den = poly_trim(base, den)
        if not den:
            raise DivisionByZero(f"zero denominator in {self.var}-fraction")
        if not num:
            return ((), (base.one(),))
        if poly_deg(num) > 0 and poly_deg(den) > 0:
            g = poly_gcd(base, num, den)
            if poly_deg(g) > 0:
                num = poly_divmod(base, num, g)[0]
                den = poly_divmod(base, den, g)[0]
        lc = den[-1]
        if lc != base.one():
            ilc = base.inv(lc)
            num = poly_scale(base, num, ilc)
            den = poly_scale(base, den, ilc)
        return (num, den)

    def from_int(self, n: int):
        c = self.base.from_int(n)
        return (poly_const(self.base, c), (self.base.one(),))

    def constant(self, c):
        """Embed a base payload as a constant."""
        return (poly_const(self.base, c), (self.base.one(),))

    def gen(self) -> FieldElement:
        return self.el(((self.base.zero(), self.base.one()), (self.base.one(),)))

    def from_polys(self, num, den=None) -> FieldElement:
        den = den if den is not None else (self.base.one(),)
        return self.el(self.make(num, den))

    def num(self, a):
        return a[0]

    def den(self, a):
        return a[1]

    def add(self, a, b):
        base = self.base
        one = (base.one(),)
        if a[1] == one and b[1] == one:
            n = poly_trim(base, poly_add(base, a[0], b[0]))
            return (n, one) if n else ((), one)
        n = poly_add(base, poly_mul(base, a[0], b[1]), poly_mul(base, b[0], a[1]))
        return self.make(n, poly_mul(base, a[1], b[1]))

    def neg(self, a):
        return (poly_neg(self.base, a[0]), a[1])

    def mul(self, a, b):
        base = self.base
        one = (base.one(),)
        if a[1] == one and b[1] == one:
            if not a[0] or not b[0]:
                return ((), one)
            return (poly_mul(base, a[0], b[0]), one)
        return self.make(poly_mul(base, a[0], b[0]), poly_mul(base, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise DivisionByZero("inverse of the zero rational function")
        return self.make(a[1], a[0])

    def is_zero(self, a):
        return a[0] == ()

    def lift(self, elem):
        if isinstance(elem, FieldElement):
            if elem.field == self.base:
                return self.el(self.constant(elem.value))
            via = self.base.lift(elem)
            if via is not None:
                return self.el(self.constant(via.value))
        return None

    def symbols(self):
        syms = {}
        for name, e in self.base.symbols().items():
            syms[name] = self.lift(e)
        syms[self.var] = self.gen()
        return syms

    def sqrt(self, a):
        # reduced with monic denominator, so num and den must separately
        # be polynomial squares
        rn = poly_sqrt(self.base, a[0])
        rd = poly_sqrt(self.base, a[1])
        if rn is None or rd is None:
            raise NotASquare(f"{self.to_str(a)} is not a square in {self}")
        return self.make(rn, rd)

    def to_str(self, a):
        num, den = a
        if den == (self.base.one(),):
            return poly_to_str(self.base, num, self.var)
        ns = poly_to_str(self.base, num, self.var)
        ds = poly_to_str(self.base, den, self.var)
        return f"({ns})/({ds})"


class ConicExtension(_FieldBase):
    """Function field of the smooth conic d*x^2 + t*y^2 = 1 over base.

    The level adjoins two generators: x, transcendental over base, and y,
    quadratic over base(x).  Payloads are pairs (A, B) of inner base(x)
    payloads standing for A + B*y; products rewrite y^2 to
    theta = (1 - d*x^2)/t.  Division is always possible for nonzero
    elements: theta is a nonsquare in base(x) (1 - d*x^2 is squarefree of
    degree 2), so the norm A^2 - B^2*theta only vanishes at (0, 0).
    """

    def __init__(self, base, d, t):
        if isinstance(d, FieldElement):
            d = base(d).value
        elif isinstance(d, (int, Fraction)):
            d = base(d).value
        if isinstance(t, FieldElement):
            t = base(t).value
        elif isinstance(t, (int, Fraction)):
            t = base(t).value
        if base.is_zero(d) or base.is_zero(t):
            raise ValueError("conic parameters d, t must be nonzero")
        for taken in ("x", "y"):
            if taken in base.symbols():
                raise ValueError(f"base level already uses the symbol {taken!r}")
        self.base = base
        self.d = d
        self.t = t
        self.inner = FunctionField(base, "x")
        self.characteristic = base.characteristic
        one = base.one()
        # theta = (1 - d*x^2)/t
        self.theta = self.inner.make(
            (base.inv(t), base.zero(), base.neg(base.div(d, t))), (one,)
        )

    def __eq__(self, other):
        return (
            isinstance(other, ConicExtension)
            and other.base == self.base
            and other.d == self.d
            and other.t == self.t
        )

    def __hash__(self):
        return hash(("ConicExtension", self.base, self.d, self.t))

    def __repr__(self):
        ds = self.base.to_str(self.d)
        ts = self.base.to_str(self.t)
        return f"ConicExtension({self.base!r}, {ds}, {ts})"

    def from_int(self, n: int):
        return (self.inner.from_int(n), self.inner.from_int(0))

    def from_inner(self, a) -> FieldElement:
        return self.el((a, self.inner.from_int(0)))

    def x_gen(self) -> FieldElement:
        return self.from_inner(self.inner.gen().value)

    def y_gen(self) -> FieldElement:
        return self.el((self.inner.from_int(0), self.inner.from_int(1)))

    def pair(self, a):
        """The (A, B) pair of a payload as inner FieldElements."""
        return self.inner.el(a[0]), self.inner.el(a[1])

    def add(self, a, b):
        inner = self.inner
        return (inner.add(a[0], b[0]), inner.add(a[1], b[1]))

    def neg(self, a):
        inner = self.inner
        return (inner.neg(a[0]), inner.neg(a[1]))

    def mul(self, a, b):
        inner = self.inner
        a0b0 = inner.mul(a[0], b[0])
        a1b1 = inner.mul(a[1], b[1])
        cross = inner.add(inner.mul(a[0], b[1]), inner.mul(a[1], b[0]))
        return (inner.add(a0b0, inner.mul(a1b1, self.theta)), cross)

    def conj(self, a):
        """The base(x)-automorphism y -> -y."""
        return (a[0], self.inner.neg(a[1]))

    def norm(self, a):
        """Norm to the inner field: A^2 - B^2*theta."""
        inner = self.inner
        return inner.sub(
            inner.mul(a[0], a[0]), inner.mul(inner.mul(a[1], a[1]), self.theta)
        )

    def inv(self, a):
        inner = self.inner
        if self.is_zero(a):
            raise DivisionByZero("inverse of 0 in the conic extension")
        n = self.norm(a)
        # nonzero elements have nonzero norm since theta is a nonsquare
        assert not inner.is_zero(n)
        ninv = inner.inv(n)
        return (inner.mul(a[0], ninv), inner.neg(inner.mul(a[1], ninv)))

    def is_zero(self, a):
        return self.inner.is_zero(a[0]) and self.inner.is_zero(a[1])

    def lift(self, elem):
        if isinstance(elem, FieldElement):
            if elem.field == self.inner:
                return self.from_inner(elem.value)
            if elem.field == self.base:
                return self.from_inner(self.inner.constant(elem.value))
            via = self.base.lift(elem)
            if via is not None:
                return self.from_inner(self.inner.constant(via.value))
            via = self.inner.lift(elem)
            if via is not None:
                return self.from_inner(via.value)
        return None

    def symbols(self):
        syms = {}
        for name, e in self.base.symbols().items():
            syms[name] = self.lift(e)
        syms["x"] = self.x_gen()
        syms["y"] = self.y_gen()
        return syms

    def sqrt(self, a):
        inner = self.inner
        A, B = a
        if inner.is_zero(B):
            # either A = C^2 or A = theta*C^2 with root C*y
            try:
                return (inner.sqrt(A), inner.from_int(0))
            except NotASquare:
                pass
            q = inner.div(A, self.theta)
            try:
                return (inner.from_int(0), inner.sqrt(q))
            except NotASquare:
                raise NotASquare(f"{self.to_str(a)} is not a square") from None
        n = self.norm(a)
        try:
            r = inner.sqrt(n)
        except NotASquare:
            raise NotASquare(f"{self.to_str(a)} is not a square") from None
        two = inner.from_int(2)
        for root in (r, inner.neg(r)):
            csq = inner.div(inner.add(A, root), two)
            if inner.is_zero(csq):
                continue
            try:
                c = inner.sqrt(csq)
            except NotASquare:
                continue
            dcoef = inner.div(B, inner.mul(two, c))
            cand = (c, dcoef)
            if self.mul(cand, cand) == a:
                return cand
        raise NotASquare(f"{self.to_str(a)} is not a square")

    def to_str(self, a):
        inner = self.inner
        A, B = a
        if inner.is_zero(B):
            return inner.to_str(A)
        bs = inner.to_str(B)
        if bs == "1":
            ypart = "y"
        elif bs == "-1":
            ypart = "-y"
        elif _factor_safe(bs):
            ypart = bs + "*y"
        else:
            ypart = "(" + bs + ")*y"
        if inner.is_zero(A):
            return ypart
        astr = inner.to_str(A)
        aterm = astr if _term_safe(astr) else "(" + astr + ")"
        return _join_terms([ypart, aterm])


# ---------------------------------------------------------------------------
# expression parsing


def _tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("int", int(text[i:j])))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j]))
            i = j
            continue
        if ch in "+-*/^()":
            out.append(("op", ch))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r} at position {i}")
    out.append(("end", None))
    return out


class _Parser:
    """Recursive descent over: expr -> term (+|- term)*;
    term -> factor (*|/ factor)*; factor -> - factor | power;
    power -> atom [^ [-] int]; atom -> int | name | ( expr )."""

    def __init__(self, field, tokens):
        self.field = field
        self.toks = tokens
        self.pos = 0
        self.syms = field.symbols()

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val!r}")

    def parse(self):
        e = self.expr()
        kind, val = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input at {val!r}")
        return e

    def expr(self):
        node = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = node + rhs if val == "+" else node - rhs
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                node = node * rhs if val == "*" else node / rhs
            else:
                return node

    def factor(self):
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            kind, val = self.peek()
            if kind == "op" and val == "-":
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "int":
                raise ParseError("exponent must be an integer literal")
            return base ** (sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return self.field(val)
        if kind == "name":
            if val not in self.syms:
                raise ParseError(f"unknown symbol {val!r} at this level")
            return self.syms[val]
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(f"unexpected token {val!r}")
