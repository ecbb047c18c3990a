from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import words_nilpotent
from quiverdmod.arrangement import normal_cone_arrangement
from quiverdmod.corpus import corpus, point_on_line, two_lines
from quiverdmod.exactlin import Matrix
from quiverdmod.quiver import Rep, direct_sum, dualize
from quiverdmod.weights import (Weights, in_category, is_nonresonant, lambda_of_arrow, lambda_of_stratum,
                                specialize_weights)

W2 = Weights([Fraction(1, 2), Fraction(1, 3)])
NAMES = list(corpus())


def brute_in_category(rep, arr, w):
    for a in arr.graph.vertices:
        n = rep.dims[a]
        ops = [rep.round_trip(a, b) - Matrix.scalar(n, lambda_of_arrow(arr, w, a, b))
               for b in arr.graph.down(a)]
        if not words_nilpotent(ops, n):
            return False
    return True


def test_lambda_of_stratum_examples():
    arr = two_lines()
    assert lambda_of_stratum(arr, W2, ()) == 0
    assert lambda_of_stratum(arr, W2, (0, 1)) == Fraction(5, 6)
    assert lambda_of_stratum(arr, W2, (0,)) == Fraction(1, 2)


def test_lambda_of_arrow_examples():
    arr = two_lines()
    assert lambda_of_arrow(arr, W2, (0,), (0, 1)) == Fraction(1, 3)
    assert lambda_of_arrow(arr, W2, (), (1,)) == Fraction(1, 3)
    with pytest.raises(ValueError):
        lambda_of_arrow(arr, W2, (), (0, 1))


@pytest.mark.parametrize("name", NAMES)
def test_arrow_weight_is_difference(name):
    arr, w = corpus()[name]
    for a, b in arr.graph.arrows:
        assert lambda_of_arrow(arr, w, a, b) == lambda_of_stratum(arr, w, b) - lambda_of_stratum(arr, w, a)


def test_specialize_weights_examples():
    arr, w = corpus()["A5"]
    nc = normal_cone_arrangement(arr, (4,))
    sp = specialize_weights(arr, w, (4,), nc)
    assert len(sp) == 3 and nc.dropped == [3]
    assert sp[nc.source.index([1, 2])] == w[1] + w[2]
    assert sp[nc.source.index([0])] == w[0] and sp[nc.source.index([4])] == w[4]
    assert specialize_weights(two_lines(), W2, ()) == W2
    assert specialize_weights(two_lines(), W2, (0,)).values == W2.values


def test_nonresonance_examples():
    assert is_nonresonant(two_lines(), W2)[0]
    ok, wit = is_nonresonant(two_lines(), Weights([1, 0]))
    assert not ok
    assert any(x["kind"] == "arrow" and x["arrow"] == [[], [0]] and x["value"] == 1 for x in wit)
    assert is_nonresonant(two_lines(), Weights([Fraction(1, 2), Fraction(1, 2)]))[0]
    assert not is_nonresonant(two_lines(), Weights([Fraction(1, 2), Fraction(1, 2)]), strict=True)[0]


@pytest.mark.parametrize("name", NAMES)
def test_corpus_weights_nonresonant(name):
    arr, w = corpus()[name]
    assert is_nonresonant(arr, w)[0]


def test_controls(controls):
    arr, w = controls["A2-integer"]
    assert not is_nonresonant(arr, w)[0]
    arr, w = controls["A3-half"]
    ok, wit = is_nonresonant(arr, w)
    assert not ok and {"kind": "arrow", "arrow": [[0], [0, 1, 2]], "value": 1} in wit
    arr, w = controls["A1-zero"]
    assert is_nonresonant(arr, w, strict=True)[0] and lambda_of_stratum(arr, w, (0,)) == 0


def test_in_category_examples(corpus_vermas):
    arr, w, M = corpus_vermas["A2"]
    assert in_category(M, arr, w)
    a1 = point_on_line()
    bad = Rep(a1.graph, {(): 1, (0,): 1},
              {((), (0,)): Matrix.from_rows([[Fraction(3, 2)]], 1), ((0,), ()): Matrix.from_rows([[1]], 1)})
    assert not in_category(bad, a1, Weights([Fraction(1, 2)]))
    assert in_category(Rep.zero(a1.graph), a1, Weights([Fraction(1, 2)]))


def test_in_category_rejects_relation_failure():
    g = two_lines().graph
    one = Matrix.from_rows([[1]], 1)
    rep = Rep(g, {v: 1 for v in g.vertices},
              {((0,), ()): one, ((), (1,)): one, ((0,), (0, 1)): one, ((0, 1), (1,)): one})
    with pytest.raises(ValueError):
        in_category(rep, two_lines(), W2)


@pytest.mark.parametrize("name", NAMES)
def test_duality_and_extensions_stay_in_category(name, corpus_vermas):
    arr, w, M = corpus_vermas[name]
    assert in_category(M, arr, w) and brute_in_category(M, arr, w)
    assert in_category(dualize(M), arr, w)
    assert in_category(direct_sum(M, dualize(M)), arr, w)


ints = st.integers(-2, 2)


@st.composite
def a1_reps(draw):
    """Reps of the point on a line, built triangular and then conjugated, optionally perturbed."""
    n = draw(st.integers(1, 3))
    extra = draw(st.integers(0, 1))
    m = n + extra
    lam = Fraction(1, 2)
    T = [[(lam if i == j else (draw(ints) if j > i else 0)) for j in range(n)] for i in range(n)]
    if draw(st.booleans()):
        i = draw(st.integers(0, n - 1))
        T[i][i] += draw(st.sampled_from([1, Fraction(-1, 3)]))
    A = [T[i] + [draw(ints) for _ in range(extra)] for i in range(n)]
    B = [[1 if i == j else 0 for j in range(n)] for i in range(m)]
    if draw(st.booleans()):
        P = [[(1 if i == j else (draw(ints) if j > i else 0)) for j in range(n)] for i in range(n)]
        Pinv_rows = Matrix.from_rows(P, n)
        from quiverdmod.exactlin import inverse
        A = (inverse(Pinv_rows) @ Matrix.from_rows(A, m)).tolist()
        B = (Matrix.from_rows(B, n) @ Pinv_rows).tolist()
    arr = point_on_line()
    return arr, Rep(arr.graph, {(): n, (0,): m},
                    {((), (0,)): Matrix.from_rows(A, m), ((0,), ()): Matrix.from_rows(B, n)})


@given(a1_reps())
def test_in_category_matches_brute_force(case):
    arr, rep = case
    w = Weights([Fraction(1, 2)])
    assert in_category(rep, arr, w) == brute_in_category(rep, arr, w)
