import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from combsim.hankel import (
    HankelVector,
    NotHankel,
    ShorthandSyntaxError,
    hankel_to_matrix,
    is_hankel,
    matrix_to_hankel,
    parse_hankel_shorthand,
    print_hankel_shorthand,
)
from combsim.instances import balanced_square_coupling


def test_parse_g1():
    v = parse_hankel_shorthand("[0,0,0/1/0,0,0]")
    assert v.top == (0, 0, 0) and v.center == 1 and v.right == (0, 0, 0)


def test_parse_run_length():
    v = parse_hankel_shorthand("[0_11/1/0_5,1,0_5]")
    assert len(v) == 23
    assert np.flatnonzero(v.values).tolist() == [11, 17]  # 1-based positions 12, 18


def test_parse_scale():
    v = parse_hankel_shorthand("scale=1/sqrt(2) [-1/1/1]")
    s = 1 / math.sqrt(2)
    assert v.top == (-s,) and v.center == s and v.right == (s,)


def test_parse_decimal_scale_and_whitespace():
    v = parse_hankel_shorthand("  scale = 0.5 [ 2 , -4e0 / 1.5 / 0_2 ] ")
    assert v.values.tolist() == [1, -2, 0.75, 0, 0]


@pytest.mark.parametrize(
    "text, pos",
    [
        ("[0,0/1/0]", 7),
        ("[0,0,0/1,0,0]", 8),
        ("[1/2/3", 6),
        ("[a/1/0]", 1),
        ("[//]", 2),
        ("[1_3/1/0]", 1),
        ("scale=2/sqrt(2) [1/1/1]", 6),
        ("[1/1/1] x", 8),
    ],
)
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ShorthandSyntaxError) as err:
        parse_hankel_shorthand(text)
    assert err.value.position == pos


def test_empty_text():
    with pytest.raises(ShorthandSyntaxError):
        parse_hankel_shorthand("   ")


@pytest.mark.parametrize(
    "values, text",
    [
        ((0, 0, 0, 1, 0, 0, 0), "[0_3/1/0_3]"),
        ((0, 0, 0), "[0/0/0]"),
        ((0, 0, 1, 0, 0), "[0,0/1/0,0]"),
        ((2.5,), "[/2.5/]"),
    ],
)
def test_print(values, text):
    assert print_hankel_shorthand(HankelVector.from_values(values)) == text


def test_print_g3():
    v = parse_hankel_shorthand("[0_11/1/0_5,1,0_5]")
    assert print_hankel_shorthand(v) == "[0_11/1/0_5,1,0_5]"


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
entries = st.one_of(st.just(0.0), st.integers(-3, 3).map(float), finite)


@given(st.integers(1, 12).flatmap(lambda m: st.lists(entries, min_size=2 * m - 1, max_size=2 * m - 1)))
def test_round_trip(values):
    v = HankelVector.from_values(values)
    text = print_hankel_shorthand(v)
    assert parse_hankel_shorthand(text) == v
    assert print_hankel_shorthand(parse_hankel_shorthand(text)) == text
    assert matrix_to_hankel(hankel_to_matrix(v)) == v


def test_hankel_to_matrix_g2():
    G = hankel_to_matrix("[0,0,0/1/0,1,0]")
    expected = np.zeros((4, 4))
    for a, b in [(0, 3), (1, 2), (2, 3)]:
        expected[a, b] = expected[b, a] = 1
    assert np.array_equal(G, expected)


def test_hankel_to_matrix_smallest():
    assert np.array_equal(hankel_to_matrix("[0/3/0]"), [[0, 3], [3, 0]])


@given(st.lists(finite, min_size=1, max_size=15).filter(lambda x: len(x) % 2))
def test_matrix_symmetric_and_skew_constant(values):
    G = hankel_to_matrix(HankelVector.from_values(values))
    assert np.array_equal(G, G.T)
    m = G.shape[0]
    for i in range(m):
        for j in range(m):
            assert G[i, j] == values[i + j]


def test_matrix_to_hankel_zero():
    assert matrix_to_hankel(np.zeros((3, 3))).values.tolist() == [0] * 5


def test_balanced_square_not_hankel():
    with pytest.raises(NotHankel) as err:
        matrix_to_hankel(balanced_square_coupling())
    # (1,3) = -1 and (2,2) = 0 share the skew-diagonal m+n=4
    assert err.value.diagonal == 3
    assert err.value.deviation == 1.0
    assert not is_hankel(balanced_square_coupling())


def test_matrix_to_hankel_tolerance_is_relative():
    G = hankel_to_matrix("[1,2/3/4,5]") * 1e6
    G[1, 1] += 1e-7
    assert is_hankel(G)
    G[1, 1] += 1e-3
    assert not is_hankel(G)


def test_vector_validation():
    with pytest.raises(ValueError):
        HankelVector((1, 2), 0, (1,))
    with pytest.raises(ValueError):
        HankelVector.from_values([1, 2])
    with pytest.raises(ValueError):
        HankelVector((), float("nan"), ())
