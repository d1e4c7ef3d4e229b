import json
import math
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entfaces.entspace import (
    GroundSet,
    SetFunction,
    apply_permutation,
    combine,
    compose,
    elemental_inequalities,
    invert,
    is_polymatroid,
    mask_of,
    restrict,
    uniform_rank,
)


def oracle_inequalities(n):
    """Elemental inequalities written straight from their definitions."""
    full = frozenset(range(1, n + 1))
    out = []
    for i in sorted(full):
        out.append({full: 1, full - {i}: -1})
    for i, j in combinations(sorted(full), 2):
        rest = sorted(full - {i, j})
        for r in range(len(rest) + 1):
            for k in combinations(rest, r):
                k = frozenset(k)
                terms = {}
                for s, c in ((k | {i}, 1), (k | {j}, 1), (k, -1), (k | {i, j}, -1)):
                    if s:
                        terms[s] = terms.get(s, 0) + c
                out.append(terms)
    return out


def as_terms(q):
    return {frozenset(e for e in range(1, 9) if m >> (e - 1) & 1): c for m, c in q.as_dict().items()}


@pytest.mark.parametrize("n,count", [(2, 3), (3, 9), (4, 28)])
def test_elemental_counts(n, count):
    ineqs = elemental_inequalities(n)
    assert len(ineqs) == count == len(oracle_inequalities(n))
    assert count == n + math.comb(n, 2) * 2 ** (n - 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_elemental_match_oracle(n):
    got = [as_terms(q) for q in elemental_inequalities(n)]
    want = oracle_inequalities(n)
    assert sorted(map(str, map(sorted_terms, got))) == sorted(map(str, map(sorted_terms, want)))
    assert [q.index for q in elemental_inequalities(n)] == list(range(len(want)))


def sorted_terms(t):
    return sorted((sorted(k), v) for k, v in t.items())


def test_elemental_order():
    ineqs = elemental_inequalities(4)
    assert [q.kind for q in ineqs[:4]] == [f"H({i}|rest)" for i in range(1, 5)]
    assert ineqs[4].kind == "I(1;2|)"
    assert ineqs[-1].kind == "I(3;4|12)"


def test_ground_set():
    g = GroundSet(4)
    assert g.dim == 15 and g.full == 15 and g.elements() == (1, 2, 3, 4)
    with pytest.raises(ValueError):
        GroundSet(0)


def test_setfunction_indexing():
    f = uniform_rank(4, 2, {1, 2, 3})
    assert f[{1, 2}] == 2 and f["4"] == 0 and f[0] == 0 and f[0b111] == 2
    assert f.exact and f.is_integer()


def test_polymatroid_examples():
    assert is_polymatroid(uniform_rank(4, 2, {1, 2, 3}))
    neg = SetFunction.from_mapping(4, {1: -1})
    assert not is_polymatroid(neg)
    f = SetFunction(2, [1, 1, 3])
    assert not is_polymatroid(f)
    assert is_polymatroid(SetFunction.zero(3))


def test_polymatroid_real_tolerance():
    f = SetFunction(2, [1.0, 1.0, 2.0 + 1e-12], exact=False)
    assert is_polymatroid(f)
    g = SetFunction(2, [1.0, 1.0, 2.0 + 1e-6], exact=False)
    assert not is_polymatroid(g)


def test_restrict_examples():
    u14 = uniform_rank(4, 1, 0b1111)
    assert restrict(u14, {1}).values == (1,)
    f = uniform_rank(4, 2, {1, 2})
    assert restrict(f, 0b1111) == f
    with pytest.raises(ValueError):
        restrict(f, set())


def test_permutation_examples():
    u = uniform_rank(4, 1, {1})
    assert apply_permutation(u, (2, 1, 3, 4)) == uniform_rank(4, 1, {2})
    t = uniform_rank(4, 2, {1, 2, 3})
    assert apply_permutation(t, (2, 1, 3, 4)) == t
    assert apply_permutation(t, (1, 2, 3, 4)) == t
    with pytest.raises(ValueError):
        apply_permutation(t, (1, 1, 2, 3))


def test_combine_examples():
    f, g = uniform_rank(4, 2, {1, 2, 3}), uniform_rank(4, 1, {1})
    assert combine(1, f, 0, g) == f
    assert combine(1, f, 1, g)[{1}] == 2
    h = combine(2, uniform_rank(4, 1, {1, 2}), 3, uniform_rank(4, 1, {3, 4}))
    assert h[{1, 3}] == 5 and h.exact
    assert not combine(0.5, f, 1, g).exact


def test_json_roundtrip_exact_and_real():
    f = SetFunction(3, [Fraction(1, 3)] * 7)
    assert SetFunction.from_json(f.to_json()) == f
    g = SetFunction(3, [0.1 * i for i in range(7)], exact=False)
    back = SetFunction.from_json(json.dumps(g.to_json_obj()))
    assert back.allclose(g, 0.0)


subsets = st.integers(min_value=1, max_value=15)
perms4 = st.permutations([1, 2, 3, 4])
small_ints = st.lists(st.integers(-3, 5), min_size=15, max_size=15)


@given(small_ints, perms4, perms4)
def test_group_action(vals, p, q):
    f = SetFunction(4, vals)
    assert apply_permutation(apply_permutation(f, p), q) == apply_permutation(f, compose(p, q))
    assert apply_permutation(apply_permutation(f, p), invert(p)) == f


@given(small_ints, perms4)
def test_polymatroid_invariant_under_permutation(vals, p):
    f = SetFunction(4, vals)
    assert is_polymatroid(f) == is_polymatroid(apply_permutation(f, p))


@given(small_ints)
def test_polymatroid_iff_elemental(vals):
    f = SetFunction(4, vals)
    elemental = all(q.evaluate(f) >= 0 for q in elemental_inequalities(4))
    # elemental inequalities generate all Shannon inequalities
    assert is_polymatroid(f) == elemental


@given(st.integers(0, 3), st.integers(1, 4), subsets)
def test_uniform_rank_polymatroid(k, m, sup):
    f = uniform_rank(4, min(k, m), sup)
    assert is_polymatroid(f)


@given(small_ints, subsets)
@settings(max_examples=50)
def test_restrict_of_restrict(vals, s):
    f = SetFunction(4, vals)
    r = restrict(f, s)
    assert r.n == bin(s).count("1")
    assert restrict(r, (1 << r.n) - 1) == r
    for m in range(1, 1 << r.n):
        elems = [e for e in range(1, 5) if s >> (e - 1) & 1]
        assert r[m] == f[mask_of(elems[i] for i in range(r.n) if m >> i & 1)]


def test_all_permutations_preserve_elemental_set():
    rows = {q.coefficients for q in elemental_inequalities(4)}
    for p in permutations([1, 2, 3, 4]):
        for q in elemental_inequalities(4):
            f = SetFunction(4, q.coefficients)
            assert apply_permutation(f, p).as_ints() in rows
