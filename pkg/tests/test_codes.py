import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codetherm.codes import (Code, GeneratorMatrix, LogRatio, code_from_json,
                             code_params, code_to_json, compare_rates,
                             hamming_distance, make_linear_code, make_reed_solomon,
                             min_distance, random_code, satisfies_singleton)
from codetherm.errors import PreconditionError

from conftest import hamming74, random_battery


def test_hamming_distance_examples():
    assert hamming_distance((0, 0, 0), (0, 0, 0)) == 0
    assert hamming_distance((0, 0, 0), (1, 1, 1)) == 3
    assert hamming_distance((0, 1, 1, 0), (0, 0, 1, 1)) == 2


def test_hamming_distance_rejects_length_mismatch():
    with pytest.raises(PreconditionError):
        hamming_distance((0, 0), (0, 0, 0))


def test_min_distance_repetition_and_cube():
    rep = Code.from_words(2, [(0, 0, 0), (1, 1, 1)])
    assert min_distance(rep) == 3
    cube = random_code(2, 3, 8, seed=1)
    assert min_distance(cube) == 1


def test_min_distance_hamming_brute_force():
    h = hamming74()
    # independent route: minimum weight of a nonzero codeword of a linear code
    weight_min = min(sum(a != 0 for a in w) for w in h.words if any(w))
    assert min_distance(h) == weight_min == 3


def test_min_distance_needs_two_words():
    single = Code.from_words(2, [(0, 1)])
    assert single.d is None
    with pytest.raises(PreconditionError):
        min_distance(single)


def test_code_params_repetition():
    p = code_params(Code.from_words(2, [(0, 0, 0), (1, 1, 1)]))
    assert (p.n, p.size, p.k_floor, p.d) == (3, 2, 1, 3)
    assert p.k_real == pytest.approx(1.0)
    assert p.R == pytest.approx(1 / 3)
    assert p.delta == Fraction(1)


def test_code_params_non_power_size():
    c = random_code(2, 2, 3, seed=5)
    p = code_params(c)
    assert p.k_floor == 1
    assert p.k_real == pytest.approx(1.5849625007211562)


def test_code_params_hamming(hamming):
    p = code_params(hamming)
    assert p.R == pytest.approx(4 / 7)
    assert p.delta == Fraction(3, 7)


def test_make_linear_code_examples():
    rep = make_linear_code(GeneratorMatrix(2, ((1, 1, 1),)))
    assert rep.words == ((0, 0, 0), (1, 1, 1))
    full = make_linear_code(GeneratorMatrix(3, ((1, 0), (0, 1))))
    assert full.size == 9 and full.d == 1
    h = hamming74()
    assert h.size == 16 and h.d == 3


def test_generator_matrix_rejects_bad_input():
    with pytest.raises(PreconditionError):
        GeneratorMatrix(4, ((1, 0), (0, 1)))  # composite q
    with pytest.raises(PreconditionError):
        GeneratorMatrix(2, ((1, 1), (1, 1)))  # dependent rows


def test_reed_solomon_examples():
    c = make_reed_solomon(2, 1)
    assert c.words == ((0, 0), (1, 1)) and c.d == 2
    c = make_reed_solomon(3, 2)
    assert c.size == 9 and c.n == 3 and c.d == 2
    c = make_reed_solomon(5, 3)
    assert c.d == 3 == 5 - 3 + 1


def test_reed_solomon_rejects_bad_params():
    with pytest.raises(PreconditionError):
        make_reed_solomon(4, 2)
    with pytest.raises(PreconditionError):
        make_reed_solomon(5, 6)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_reed_solomon_meets_singleton_with_equality(q):
    for k in range(1, q + 1):
        c = make_reed_solomon(q, k)
        assert c.d == c.n - k + 1
        assert c.size == c.q ** (c.n - c.d + 1)


def test_random_code_forced_and_degenerate():
    cube = random_code(2, 3, 8, seed=9)
    assert cube.size == 8 and cube.d == 1
    single = random_code(2, 3, 1, seed=9)
    assert single.size == 1 and single.d is None
    with pytest.raises(PreconditionError):
        random_code(2, 3, 9, seed=0)


def test_random_code_deterministic():
    a = random_code(3, 5, 17, seed=42)
    b = random_code(3, 5, 17, seed=42)
    assert a == b
    assert a != random_code(3, 5, 17, seed=43)


def test_linear_codes_contain_zero_and_have_exact_size():
    for rows, q in [(((1, 1, 0), (0, 1, 1)), 2), (((1, 2, 0), (0, 1, 1)), 3)]:
        c = make_linear_code(GeneratorMatrix(q, rows))
        assert (0,) * c.n in c.word_set
        assert c.size == q ** len(rows)
        weight_min = min(sum(a != 0 for a in w) for w in c.words if any(w))
        assert weight_min == min_distance(c)


def test_singleton_bound_on_battery():
    for c in random_battery(60, seed=7):
        assert satisfies_singleton(c)


def test_logratio_cross_power_ordering():
    assert LogRatio(2, 2, 3) == Fraction(1, 3)
    assert LogRatio(2, 4, 6) == LogRatio(2, 2, 3)
    assert LogRatio(2, 3, 2) > Fraction(3, 4)  # log2(3)/2 ~ 0.792
    assert LogRatio(2, 3, 2) < Fraction(4, 5)
    assert LogRatio(2, 1, 5) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5), st.integers(1, 40), st.integers(1, 12),
       st.integers(1, 40), st.integers(1, 12))
def test_rate_comparison_matches_floats_when_separated(q, s1, n1, s2, n2):
    r1, r2 = LogRatio(q, s1, n1), LogRatio(q, s2, n2)
    f1, f2 = float(r1), float(r2)
    if abs(f1 - f2) > 1e-12:
        assert (r1 < r2) == (f1 < f2)


def test_compare_rates_on_codes():
    a = Code.from_words(2, [(0, 0, 0), (1, 1, 1)])       # rate 1/3
    b = random_code(2, 2, 3, seed=1)                     # rate log2(3)/2 > 1/3
    assert compare_rates(a, b) == -1
    assert compare_rates(a, a) == 0
    with pytest.raises(ValueError):
        compare_rates(a, random_code(3, 2, 3, seed=1))


def test_json_round_trip_is_exact():
    for c in random_battery(10, seed=3) + [hamming74(), make_reed_solomon(7, 4)]:
        blob = json.dumps(code_to_json(c), sort_keys=True)
        again = code_from_json(json.loads(blob))
        assert again == c
        assert json.dumps(code_to_json(again), sort_keys=True) == blob


def test_code_validation():
    with pytest.raises(ValueError):
        Code.from_words(2, [(0, 2)])  # digit out of range
    with pytest.raises(ValueError):
        Code.from_words(2, [])
    with pytest.raises(ValueError):
        Code(2, 2, ((1, 0), (0, 1)))  # unsorted
    # duplicates merge through the factory
    assert Code.from_words(2, [(0, 1), (0, 1)]).size == 1
