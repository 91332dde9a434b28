from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypgeom import (FiniteMeasure, GraphError, SignedMeasure,
                     counting_restriction, dirac, hahn_split, tv_distance)

weights = st.dictionaries(st.integers(0, 30),
                          st.fractions(min_value=-5, max_value=5), max_size=12)


def test_tv_of_two_diracs():
    assert tv_distance(dirac("a"), dirac("b")) == 2


def test_counting_restriction():
    m = counting_restriction([3, 5, 9])
    assert m.total() == 1
    assert m[5] == Fraction(1, 3)
    with pytest.raises(GraphError):
        counting_restriction([])


def test_finite_measure_rejects_negative():
    with pytest.raises(GraphError):
        FiniteMeasure({1: -Fraction(1, 2)})


def test_hahn_examples():
    m = SignedMeasure({"a": Fraction(1), "b": Fraction(-1)})
    pos, neg = hahn_split(m)
    assert pos.weights == {"a": Fraction(1)}
    assert neg.weights == {"b": Fraction(1)}
    pos2, neg2 = hahn_split(SignedMeasure({"a": 2, "b": 3}))
    assert neg2.total() == 0


@given(weights)
def test_hahn_recombines_exactly(w):
    m = SignedMeasure(w)
    pos, neg = hahn_split(m)
    assert not (pos.support() & neg.support())
    assert (pos - neg).weights == m.weights
    assert pos.tv_norm() + neg.tv_norm() == m.tv_norm()


@given(weights, weights, weights)
def test_tv_triangle_inequality(a, b, c):
    ma, mb, mc = SignedMeasure(a), SignedMeasure(b), SignedMeasure(c)
    assert tv_distance(ma, mc) <= tv_distance(ma, mb) + tv_distance(mb, mc)


@given(weights)
def test_tv_self_zero(a):
    m = SignedMeasure(a)
    assert tv_distance(m, m) == 0


def test_normalized():
    m = FiniteMeasure({1: 3, 2: 1})
    nm = m.normalized()
    assert nm.total() == 1 and nm[1] == Fraction(3, 4)
    with pytest.raises(GraphError):
        FiniteMeasure({}).normalized()


def test_max_atom_and_probability():
    m = FiniteMeasure({1: Fraction(1, 2), 2: Fraction(1, 2)})
    assert m.is_probability()
    assert m.max_atom() == Fraction(1, 2)


def test_integrate():
    m = FiniteMeasure({1: Fraction(1, 4), 2: Fraction(3, 4)})
    assert m.integrate({1: 4.0, 2: 0.0}) == 1.0
