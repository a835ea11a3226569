"""Shared strategies and small builders for the test suite."""

from fractions import Fraction

from hypothesis import strategies as st

from quatwitt.fields import (
    ConicExtension,
    FiniteField,
    FunctionField,
    Rationals,
)


def fractions(max_num=60, max_den=12):
    return st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )


def nonzero_fractions(max_num=60, max_den=12):
    return fractions(max_num, max_den).filter(lambda f: f != 0)


def rational_functions(field: FunctionField, max_deg=3, coeffs=None):
    """Elements of a rational function field built from coefficient lists."""
    if coeffs is None:
        coeffs = fractions(max_num=9, max_den=4)

    def build(num, den):
        gen = field.gen()
        top = field(0)
        for k, c in enumerate(num):
            top = top + field(c) * gen**k
        bottom = field(0)
        for k, c in enumerate(den):
            bottom = bottom + field(c) * gen**k
        if bottom.is_zero():
            bottom = field(1)
        return top / bottom

    return st.builds(
        build,
        st.lists(coeffs, min_size=1, max_size=max_deg + 1),
        st.lists(coeffs, min_size=1, max_size=max_deg + 1),
    )


def nonzero_rational_functions(field, max_deg=3, coeffs=None):
    return rational_functions(field, max_deg, coeffs).filter(
        lambda f: not f.is_zero()
    )


def finite_elements(field: FiniteField):
    return st.integers(0, field.p - 1).map(field)


def conic_elements(conic: ConicExtension, coord=None):
    """Elements A + B*y of a conic extension with rational-function coords."""
    inner = conic.inner
    if coord is None:
        coord = rational_functions(inner, max_deg=2)

    def build(a, b):
        return conic.from_inner(a.value) + conic.from_inner(b.value) * conic.y_gen()

    return st.builds(build, coord, coord)


def quaternions(alg, coeffs=None):
    if coeffs is None:
        coeffs = fractions(max_num=9, max_den=3)
    return st.builds(
        lambda w, a, b, c: alg.el(alg.base(w), alg.base(a), alg.base(b), alg.base(c)),
        coeffs,
        coeffs,
        coeffs,
        coeffs,
    )


def pure_quaternions(alg, coeffs=None):
    if coeffs is None:
        coeffs = st.integers(-9, 9)
    return st.builds(
        lambda a, b, c: alg.el(alg.base(0), alg.base(a), alg.base(b), alg.base(c)),
        coeffs,
        coeffs,
        coeffs,
    ).filter(lambda u: not u.is_zero())
