"""Quaternion algebra arithmetic, reduced norms, and ramification of
the algebra at a discrete valuation."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import support
from quatwitt import faults
from quatwitt.errors import RamifiedAlgebra, ZeroElement
from quatwitt.fields import FiniteField, FunctionField, Rationals
from quatwitt.quadforms import mat_det
from quatwitt.quaternions import (
    QuaternionAlgebra,
    extval,
    left_regular_matrix,
    ramification,
    residue_algebra_splits,
    residue_quaternion,
)
from quatwitt.valuations import INF, GaussValuation, PAdicValuation


@pytest.fixture(scope="module")
def A23():
    Q = Rationals()
    return QuaternionAlgebra(Q, Q(2), Q(3))


# ---------------------------------------------------------------------------
# multiplication and the standard involution


def test_generator_relations(A23):
    i, j, ij = A23.i(), A23.j(), A23.ij()
    assert i * i == A23.scalar(A23.base(2))
    assert j * j == A23.scalar(A23.base(3))
    assert i * j == ij
    assert j * i == -ij
    assert (ij) * (ij) == A23.scalar(A23.base(-6))


def test_product_frozen(A23):
    u = (A23.one() + A23.i()) * (A23.one() + A23.j())
    assert u == A23.el(1, 1, 1, 1)
    assert u.nrd() == A23.base(2)


def test_rejects_zero_parameters(Q):
    with pytest.raises(ValueError):
        QuaternionAlgebra(Q, Q(0), Q(1))


def test_norm_and_trace_frozen(A23):
    u = A23.el(1, 2, 3, 4)
    # w^2 - d a^2 - t b^2 + d t c^2
    assert u.nrd() == A23.base(1 - 2 * 4 - 3 * 9 + 6 * 16)
    assert u.trd() == A23.base(2)
    assert u.conj() == A23.el(1, -2, -3, -4)


@given(
    support.quaternions(QuaternionAlgebra(Rationals(), 2, 3)),
    support.quaternions(QuaternionAlgebra(Rationals(), 2, 3)),
)
def test_reduced_norm_is_multiplicative(u, w):
    assert ((u * w).nrd() - u.nrd() * w.nrd()).is_zero()


@given(
    support.quaternions(QuaternionAlgebra(Rationals(), 2, 3)),
    support.quaternions(QuaternionAlgebra(Rationals(), 2, 3)),
)
def test_conjugation_is_an_anti_automorphism(u, w):
    assert (u * w).conj() == w.conj() * u.conj()
    assert u.conj().conj() == u
    assert u * u.conj() == u.algebra.scalar(u.nrd())
    assert (u + u.conj()) == u.algebra.scalar(u.trd())


@given(support.quaternions(QuaternionAlgebra(Rationals(), 2, 3)))
def test_inverse(u):
    if u.nrd().is_zero():
        with pytest.raises(ZeroElement):
            u.inv()
        return
    assert u * u.inv() == u.algebra.one()


def test_zero_divisors_in_a_split_algebra(Q):
    alg = QuaternionAlgebra(Q, Q(1), Q(1))
    u = alg.one() + alg.i()
    assert not u.is_zero() and u.nrd().is_zero()
    with pytest.raises(ZeroElement):
        u.inv()
    v3 = PAdicValuation(3)
    with pytest.raises(ZeroElement):
        extval(v3, u)


@given(support.quaternions(QuaternionAlgebra(Rationals(), 2, 3)))
def test_left_regular_matrix_determinant(u):
    m = left_regular_matrix(u)
    det = mat_det(u.algebra.base, m)
    assert (det - u.nrd() ** 2).is_zero()


# ---------------------------------------------------------------------------
# the half-norm value of a quaternion


def test_extval_frozen(Q, v3):
    alg = QuaternionAlgebra(Q, Q(-1), Q(1))
    assert extval(v3, alg.i()) == 0
    assert extval(v3, alg.i() * 3) == 1
    assert extval(v3, alg.el(0, 3, 1, 1)) == 0
    assert extval(v3, alg.zero()) == INF


def test_extval_halves_odd_norm_values(Q, v3):
    alg = QuaternionAlgebra(Q, Q(-1), Q(3))
    # nrd(j) = -3 has value 1
    assert extval(v3, alg.j()) == Fraction(1, 2)


# ---------------------------------------------------------------------------
# ramification reports


def test_ramified_frozen(Q, v3):
    assert ramification(QuaternionAlgebra(Q, Q(3), Q(3)), v3).ramified
    assert ramification(QuaternionAlgebra(Q, Q(3), Q(12)), v3).ramified
    rep = ramification(QuaternionAlgebra(Q, Q(5), Q(2)), PAdicValuation(5))
    assert rep.ramified
    assert str(rep.tame_class) == "3"
    assert rep.unit_rep is None


def test_unramified_frozen(Q, v3):
    rep = ramification(QuaternionAlgebra(Q, Q(3), Q(6)), v3)
    assert not rep.ramified
    assert rep.unit_rep == (Q(1), Q(1))
    rep2 = ramification(QuaternionAlgebra(Q, Q(18), Q(7)), v3)
    assert not rep2.ramified
    assert rep2.unit_rep == (Q(2), Q(7))
    assert rep2.split_over_residue is True
    rep3 = ramification(QuaternionAlgebra(Q, Q(2), Q(3)), PAdicValuation(7))
    assert not rep3.ramified and rep3.split_over_residue


def test_residue_division_algebra_over_function_field(K, g3):
    alg = QuaternionAlgebra(K, K(-1), K.gen())
    rep = ramification(alg, g3)
    assert not rep.ramified
    assert rep.split_over_residue is False
    res = residue_quaternion(alg, g3)
    assert res.base.characteristic == 3


def test_residue_quaternion_needs_an_unramified_algebra(Q, v3):
    with pytest.raises(RamifiedAlgebra):
        residue_quaternion(QuaternionAlgebra(Q, Q(3), Q(3)), v3)


def test_ramification_of_unit_algebras_never_depends_on_twists(Q, v3):
    # (d, t) and (d*u^2, t*w^2) have identical reports for units u, w
    for d, t in [(2, 5), (-1, 7), (5, -2)]:
        base = ramification(QuaternionAlgebra(Q, Q(d), Q(t)), v3)
        twisted = ramification(
            QuaternionAlgebra(Q, Q(d * 16), Q(t * 25)), v3
        )
        assert base.ramified == twisted.ramified
        assert base.split_over_residue == twisted.split_over_residue


# ---------------------------------------------------------------------------
# splitting of the residue algebra


def test_residue_split_over_finite_fields(F3):
    assert residue_algebra_splits(F3, F3(1), F3(2)) is True
    assert residue_algebra_splits(F3, F3(2), F3(2)) is True


def test_residue_split_over_function_fields(F3):
    L = FunctionField(F3, "s")
    s = L.gen()
    assert residue_algebra_splits(L, L(1), s) is True
    assert residue_algebra_splits(L, s, s) is False
    assert residue_algebra_splits(L, s**2 + 1, s) is True
    assert residue_algebra_splits(L, s, L(2)) is False
    assert residue_algebra_splits(L, L(-1), s) is False


def test_residue_split_rejects_zero_parameters(F3):
    L = FunctionField(F3, "s")
    with pytest.raises(ZeroElement):
        residue_algebra_splits(L, L(0), L.gen())


def test_drop_unit_rep_is_observable(Q, v3):
    alg = QuaternionAlgebra(Q, Q(18), Q(7))
    with faults.injected(faults.DROP_UNIT_REP):
        with pytest.raises(ZeroElement):
            ramification(alg, v3)
    assert ramification(alg, v3).unit_rep == (Q(2), Q(7))
