"""Diagonal quadratic forms, diagonalization, residue forms, and the
Witt-triviality oracle."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import support
from quatwitt import faults
from quatwitt.errors import Degenerate, NegativeValue
from quatwitt.fields import FiniteField, FunctionField, Rationals
from quatwitt.quadforms import (
    FALSE,
    INDETERMINATE,
    TRUE,
    QuadraticForm,
    diagonalize,
    is_unramified,
    mat_mul,
    mat_transpose,
    reconstruction,
    residue_forms,
    witt_trivial,
)
from quatwitt.valuations import GaussValuation, PAdicValuation


def qform(field, *entries):
    return QuadraticForm(field, [field(e) for e in entries])


# ---------------------------------------------------------------------------
# construction and basic invariants


def test_rejects_zero_entries(Q):
    with pytest.raises(Degenerate):
        qform(Q, 1, 0)


def test_rank_det_apply(Q):
    q = qform(Q, 1, -2, 3)
    assert q.rank == 3
    assert q.det() == Q(-6)
    assert q.apply([Q(1), Q(1), Q(2)]) == Q(11)
    assert q.scaled(Q(2)).entries[1] == Q(-4)
    assert q.neg().entries[0] == Q(-1)
    assert q.perp(qform(Q, 5)).rank == 4


# ---------------------------------------------------------------------------
# diagonalization


def test_diagonalize_hyperbolic_plane(Q):
    gram = [[Q(0), Q(1)], [Q(1), Q(0)]]
    q, p = diagonalize(Q, gram)
    assert [str(e) for e in q.entries] == ["2", "-1/2"]


def test_diagonalize_frozen(Q):
    gram = [[Q(2), Q(1)], [Q(1), Q(2)]]
    q, p = diagonalize(Q, gram)
    assert [str(e) for e in q.entries] == ["2", "3/2"]


def test_diagonalize_rejects_singular(Q):
    with pytest.raises(Degenerate):
        diagonalize(Q, [[Q(1), Q(1)], [Q(1), Q(1)]])


@given(
    st.lists(st.integers(-5, 5), min_size=6, max_size=6),
)
def test_diagonalize_certifies_congruence(raw):
    Q = Rationals()
    gram = [
        [Q(raw[0]), Q(raw[1]), Q(raw[2])],
        [Q(raw[1]), Q(raw[3]), Q(raw[4])],
        [Q(raw[2]), Q(raw[4]), Q(raw[5])],
    ]
    try:
        q, p = diagonalize(Q, gram)
    except Degenerate:
        return
    lhs = mat_mul(Q, mat_mul(Q, mat_transpose(p), gram), p)
    for k in range(3):
        for l in range(3):
            expect = q.entries[k] if k == l else Q(0)
            assert (lhs[k][l] - expect).is_zero()


# ---------------------------------------------------------------------------
# residue forms at a valuation


def test_residue_forms_frozen(Q, v3):
    pair = residue_forms(qform(Q, 2, 15, 18, Fraction(1, 3)), v3)
    assert [str(e) for e in pair.first.entries] == ["2", "2"]
    assert [str(e) for e in pair.second.entries] == ["2", "1"]


def test_residue_forms_negative_value(Q, v3):
    pair = residue_forms(qform(Q, Fraction(1, 3)), v3)
    assert pair.first.rank == 0
    assert [str(e) for e in pair.second.entries] == ["1"]


def test_residue_forms_function_field(K, g3):
    s = K.gen()
    q = QuadraticForm(K, [s, 3 * s])
    pair = residue_forms(q, g3)
    assert [str(e) for e in pair.first.entries] == ["s"]
    assert [str(e) for e in pair.second.entries] == ["s"]


def test_reconstruction_recovers_the_witt_class(Q, v3):
    q = qform(Q, 2, 15, 18, Fraction(1, 3))
    rec = reconstruction(q, v3)
    probe = q.perp(rec.neg())
    assert witt_trivial(probe).state == TRUE


@given(st.lists(st.integers(-40, 40).filter(lambda n: n != 0), min_size=1, max_size=4))
def test_reconstruction_is_witt_equivalent(entries):
    Q = Rationals()
    v = PAdicValuation(3)
    q = qform(Q, *entries)
    rec = reconstruction(q, v)
    assert witt_trivial(q.perp(rec.neg())).state == TRUE


# ---------------------------------------------------------------------------
# Witt-triviality oracle


def test_witt_trivial_frozen_rationals(Q):
    assert witt_trivial(qform(Q, 1, -1)).state == TRUE
    assert witt_trivial(qform(Q, 1)).state == FALSE
    assert witt_trivial(qform(Q, 1, 1, 1, -3)).state == FALSE
    assert witt_trivial(qform(Q, 3, -12)).state == TRUE


def test_witt_trivial_frozen_finite(F3, F5):
    assert witt_trivial(qform(F3, 1, -1, 1, -1)).state == TRUE
    assert witt_trivial(qform(F3, 1, 2)).state == TRUE
    assert witt_trivial(qform(F3, 1, 1)).state == FALSE
    assert witt_trivial(qform(F5, 1, 2, 1, 2, 1)).state == FALSE


def test_witt_trivial_budget_exhaustion(Q):
    verdict = witt_trivial(qform(Q, 1, 1, 1, 1), budget=500)
    assert verdict.state == INDETERMINATE
    assert verdict.searched >= 500


def test_rank_zero_form_is_trivial(Q):
    assert witt_trivial(QuadraticForm(Q, [])).state == TRUE


@given(
    st.lists(st.integers(-9, 9).filter(lambda n: n != 0), min_size=1, max_size=3),
    st.randoms(use_true_random=False),
)
def test_shuffled_hyperbolic_forms_are_recognized(scalars, rng):
    Q = Rationals()
    entries = []
    for a in scalars:
        entries.extend([Q(a), Q(-a)])
    rng.shuffle(entries)
    assert witt_trivial(QuadraticForm(Q, entries)).state == TRUE


@given(
    st.lists(st.integers(1, 4).filter(lambda n: n != 0), min_size=1, max_size=2),
    st.randoms(use_true_random=False),
)
def test_shuffled_hyperbolic_forms_over_finite_fields(scalars, rng):
    F5 = FiniteField(5)
    entries = []
    for a in scalars:
        entries.extend([F5(a), F5(-a)])
    rng.shuffle(entries)
    assert witt_trivial(QuadraticForm(F5, entries)).state == TRUE


@given(st.lists(st.integers(1, 6), min_size=1, max_size=5))
def test_odd_rank_forms_are_never_trivial(entries):
    F7 = FiniteField(7)
    if len(entries) % 2 == 0:
        entries = entries[:-1] if len(entries) > 1 else entries + [1]
    q = QuadraticForm(F7, [F7(e) for e in entries])
    assert witt_trivial(q).state == FALSE


def test_finite_field_verdicts_are_decided(F7):
    # every form over a finite field must come back true or false
    for entries in [(1,), (1, 2), (3, 3, 5), (1, 2, 3, 4), (2, 2, 2, 2, 2)]:
        state = witt_trivial(qform(F7, *entries)).state
        assert state in (TRUE, FALSE)


def test_is_unramified(Q, v3):
    assert is_unramified(qform(Q, 2, 15, 18, Fraction(1, 3)), v3).state == TRUE
    assert is_unramified(qform(Q, 1, 3), v3).state == FALSE
    assert is_unramified(qform(Q, 1, 2), v3).state == TRUE


# ---------------------------------------------------------------------------
# fault observability


def test_skip_even_scaling_is_observable(Q, v3):
    with faults.injected(faults.SKIP_EVEN_SCALING):
        with pytest.raises(Degenerate):
            residue_forms(qform(Q, 18), v3)
        with pytest.raises(NegativeValue):
            residue_forms(qform(Q, Fraction(1, 3)), v3)
        pair = residue_forms(qform(Q, 2, 15), v3)
        assert [str(e) for e in pair.first.entries] == ["2"]
        assert [str(e) for e in pair.second.entries] == ["2"]
    # the guard restores honest behavior on exit
    pair = residue_forms(qform(Q, 18), v3)
    assert [str(e) for e in pair.first.entries] == ["2"]
