import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeflow.interval import DomainError, ParityInterval, otimes, otimes_bounds, split

LIMIT = 12


def all_intervals(limit=LIMIT):
    return [ParityInterval(a, b) for a in range(limit + 1) for b in range(a, limit + 1, 2)]


def product_set(A, B):
    return {x1 + x2 - 2 * y for x1 in A for x2 in B for y in range(min(x1, x2) + 1)}


def assert_witness(A, B, x, triple):
    x1, x2, y = triple
    assert x1 in A and x2 in B
    assert 0 <= y <= min(x1, x2)
    assert x1 + x2 - 2 * y == x


@pytest.mark.parametrize("lo,hi", [(-1, 1), (2, 1), (0, 1), (3, 6)])
def test_rejects_malformed_interval(lo, hi):
    with pytest.raises(ValueError):
        ParityInterval(lo, hi)


def test_membership_and_iteration():
    A = ParityInterval(3, 9)
    assert list(A) == [3, 5, 7, 9] and len(A) == 4
    assert 5 in A and 4 not in A and 11 not in A and 1 not in A
    assert "5" not in A
    assert ParityInterval.point(7) == ParityInterval(7, 7)


@pytest.mark.parametrize(
    "A,B,want",
    [
        ((1, 1), (1, 1), (0, 2)),
        ((2, 4), (7, 9), (3, 13)),
        ((0, 0), (5, 9), (5, 9)),
        ((1, 3), (2, 6), (1, 9)),  # overlapping ranges, different parity
    ],
)
def test_otimes_examples(A, B, want):
    assert otimes(ParityInterval(*A), ParityInterval(*B)) == ParityInterval(*want)


def test_otimes_matches_enumeration_exhaustively():
    ivs = all_intervals()
    for A, B in itertools.product(ivs, repeat=2):
        P = otimes(A, B)
        assert set(P) == product_set(A, B), (A, B)
        assert P == otimes(B, A)
        assert otimes(A, ParityInterval(0, 0)) == A


def test_split_examples():
    A, B = ParityInterval(1, 3), ParityInterval(2, 6)
    assert split(A, B, 1) == (3, 4, 3)
    assert split(A, B, 7) == (3, 6, 1)
    one = ParityInterval(1, 1)
    assert split(one, one, 0) == (1, 1, 1)


def test_split_witness_exhaustively():
    ivs = all_intervals()
    for A, B in itertools.product(ivs, repeat=2):
        for x in otimes(A, B):
            assert_witness(A, B, x, split(A, B, x))


def test_split_rejects_non_members():
    A, B = ParityInterval(2, 4), ParityInterval(7, 9)
    for x in (1, 2, 4, 15):
        with pytest.raises(DomainError):
            split(A, B, x)


def test_larger_upper_end_gets_the_large_role():
    # a dominating side (a1 >= b2 + 2) always has the larger upper end,
    # and then receives its own maximum whenever x is large enough
    A, B = ParityInterval(6, 8), ParityInterval(1, 3)
    for x in otimes(A, B):
        x1, x2, _ = split(A, B, x)
        assert x2 == B.hi
        if x >= A.hi - B.hi:
            assert x1 == A.hi


def test_equal_upper_ends_split_symmetrically():
    ivs = all_intervals()
    for A, B in itertools.product(ivs, repeat=2):
        if A.hi != B.hi:
            continue
        for x in otimes(A, B):
            x1, x2, y = split(A, B, x)
            assert split(B, A, x) == (x2, x1, y)


@st.composite
def interval(draw, top=10**6):
    lo = draw(st.integers(0, top))
    return ParityInterval(lo, lo + 2 * draw(st.integers(0, top)))


@given(interval(), interval(), st.integers(0, 10**7))
def test_split_witness_large_values(A, B, k):
    lo, hi = otimes_bounds(A.lo, A.hi, B.lo, B.hi)
    x = lo + 2 * (k % ((hi - lo) // 2 + 1))
    assert_witness(A, B, x, split(A, B, x))
