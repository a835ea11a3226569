"""Skew-hermitian forms over quaternion algebras: construction,
diagonalization, and good-reduction certificates."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

import support
from quatwitt import faults
from quatwitt.errors import (
    Degenerate,
    DimensionMismatch,
    RamifiedAlgebra,
    ZeroScalar,
)
from quatwitt.fields import Rationals
from quatwitt.hermitian import (
    CERTIFIED,
    NO_CERTIFICATE,
    SkewHermitianForm,
    diagonalize_h,
    good_reduction_certificate,
)
from quatwitt.quaternions import QuaternionAlgebra
from quatwitt.valuations import PAdicValuation


@pytest.fixture(scope="module")
def A23():
    Q = Rationals()
    return QuaternionAlgebra(Q, Q(2), Q(3))


@pytest.fixture(scope="module")
def A_m1_1():
    Q = Rationals()
    return QuaternionAlgebra(Q, Q(-1), Q(1))


# ---------------------------------------------------------------------------
# construction


def test_diagonal_constructor(A23):
    h = SkewHermitianForm.diagonal(A23, [A23.i(), A23.j()])
    assert h.rank == 2
    assert h.is_diagonal()
    assert h.diagonal_entries() == (A23.i(), A23.j())


def test_rejects_non_pure_diagonal(A23):
    with pytest.raises(ValueError):
        SkewHermitianForm.diagonal(A23, [A23.one()])


def test_rejects_non_skew_gram(A23):
    i = A23.i()
    one = A23.one()
    with pytest.raises(ValueError):
        SkewHermitianForm(A23, [[i, one], [one, i]])


def test_rejects_singular_gram(A23):
    i = A23.i()
    with pytest.raises(Degenerate):
        SkewHermitianForm(A23, [[i, i], [i, i]])


def test_rejects_empty_and_ragged(A23):
    with pytest.raises(DimensionMismatch):
        SkewHermitianForm(A23, [])
    with pytest.raises(DimensionMismatch):
        SkewHermitianForm(A23, [[A23.i(), A23.j()]])


def test_off_diagonal_gram_is_accepted(A23):
    i = A23.i()
    zero = A23.zero()
    h = SkewHermitianForm(A23, [[zero, i], [i, zero]])
    assert not h.is_diagonal()
    assert h.rank == 2


# ---------------------------------------------------------------------------
# evaluation


def test_evaluate_frozen(A23):
    h = SkewHermitianForm.diagonal(A23, [A23.i()])
    j = A23.j()
    assert h.evaluate([j], [j]) == A23.i() * 3


def test_evaluate_is_conjugate_linear_in_the_first_slot(A23):
    h = SkewHermitianForm.diagonal(A23, [A23.i(), A23.ij()])
    xs = [A23.el(1, 1, 0, 0), A23.el(0, 0, 1, 0)]
    ys = [A23.el(0, 1, 1, 0), A23.el(2, 0, 0, 1)]
    lam = A23.el(1, 2, 0, 1)
    scaled_first = h.evaluate([x * lam for x in xs], ys)
    assert scaled_first == lam.conj() * h.evaluate(xs, ys)
    scaled_second = h.evaluate(xs, [y * lam for y in ys])
    assert scaled_second == h.evaluate(xs, ys) * lam


def test_skew_symmetry_of_values(A23):
    h = SkewHermitianForm.diagonal(A23, [A23.i(), A23.j()])
    xs = [A23.el(1, 0, 2, 0), A23.el(0, 1, 0, 0)]
    ys = [A23.el(0, 0, 1, 1), A23.el(3, 0, 0, 2)]
    assert h.evaluate(xs, ys) == -h.evaluate(ys, xs).conj()


# ---------------------------------------------------------------------------
# scaling and base change


def test_scale_rejects_zero(A23):
    h = SkewHermitianForm.diagonal(A23, [A23.i()])
    with pytest.raises(ZeroScalar):
        h.scale(A23.base(0))


def test_transform_congruence(A23):
    h = SkewHermitianForm.diagonal(A23, [A23.i(), A23.j()])
    p = [[A23.one(), A23.i()], [A23.zero(), A23.one()]]
    moved = h.transform(p)
    assert moved.rank == 2
    # entry (0,0) is unchanged by an upper-triangular change with unit pivot
    assert moved.gram[0][0] == A23.i()


# ---------------------------------------------------------------------------
# diagonalization


def test_diagonalize_h_frozen(A23):
    i = A23.i()
    zero = A23.zero()
    h = SkewHermitianForm(A23, [[zero, i], [i, zero]])
    entries, p = diagonalize_h(h)
    assert entries[0] == i * 2
    assert entries[1] == -i * A23.base("1/2")


def test_diagonalize_h_repair_path(A23):
    u = A23.one() + A23.i()
    zero = A23.zero()
    h = SkewHermitianForm(A23, [[zero, u], [-u.conj(), zero]])
    entries, p = diagonalize_h(h)
    assert entries[0] == A23.i() * 2
    assert entries[1] == -A23.i() * A23.base("1/4")


def test_diagonalize_h_leaves_diagonals_alone(A23):
    h = SkewHermitianForm.diagonal(A23, [A23.i(), A23.j()])
    entries, p = diagonalize_h(h)
    assert entries == (A23.i(), A23.j())


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_diagonalize_h_random_congruent_grams(a, b, c):
    Q = Rationals()
    alg = QuaternionAlgebra(Q, Q(2), Q(3))
    h = SkewHermitianForm.diagonal(alg, [alg.i(), alg.j()])
    p = [[alg.one(), alg.el(a, b, c, 0)], [alg.zero(), alg.one()]]
    moved = h.transform(p)
    entries, change = diagonalize_h(moved)
    for u in entries:
        w, x, y, z = u.coeffs
        assert w.is_zero()
        assert not u.is_zero()


# ---------------------------------------------------------------------------
# good-reduction certificates


def test_certificate_unit_entries(A_m1_1, v3):
    h = SkewHermitianForm.diagonal(A_m1_1, [A_m1_1.i(), A_m1_1.j()])
    cert = good_reduction_certificate(h, v3)
    assert cert.status == CERTIFIED
    assert cert.scaling == 0
    assert cert.extvals == (0, 0)
    assert cert.scaled_diagonal == h.diagonal_entries()


def test_certificate_uniform_twist(A_m1_1, v3):
    h = SkewHermitianForm.diagonal(A_m1_1, [A_m1_1.i() * 3, A_m1_1.j() * 3])
    cert = good_reduction_certificate(h, v3)
    assert cert.certified
    assert cert.scaling == -1
    assert cert.scaled_diagonal == (A_m1_1.i(), A_m1_1.j())


def test_certificate_mixed_values_fail(A_m1_1, v3):
    h = SkewHermitianForm.diagonal(A_m1_1, [A_m1_1.i(), A_m1_1.j() * 3])
    cert = good_reduction_certificate(h, v3)
    assert cert.status == NO_CERTIFICATE
    assert cert.extvals == (0, 1)
    assert cert.scaled_diagonal is None


def test_certificate_requires_integral_coordinates(Q, v3):
    alg = QuaternionAlgebra(Q, Q(1), Q(1))
    u = alg.el(0, 3, 1, 1)
    h = SkewHermitianForm.diagonal(alg, [u])
    # nrd = -9 has even value but no central twist makes the entry integral
    cert = good_reduction_certificate(h, v3)
    assert cert.status == NO_CERTIFICATE


def test_certificate_rejects_ramified_algebras(Q, v3):
    alg = QuaternionAlgebra(Q, Q(3), Q(3))
    h = SkewHermitianForm.diagonal(alg, [alg.i()])
    with pytest.raises(RamifiedAlgebra):
        good_reduction_certificate(h, v3)


def test_certificate_drop_unit_rep_fault(A_m1_1, v3):
    h = SkewHermitianForm.diagonal(A_m1_1, [A_m1_1.i() * 3, A_m1_1.j() * 3])
    with faults.injected(faults.DROP_UNIT_REP):
        cert = good_reduction_certificate(h, v3)
        assert cert.status == NO_CERTIFICATE
    assert good_reduction_certificate(h, v3).certified
