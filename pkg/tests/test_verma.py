from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from quiverdmod.arrangement import induced_arrangement
from quiverdmod.corpus import concurrent_lines, corpus, point_on_line, triangle, two_lines
from quiverdmod.exactlin import Matrix, rank
from quiverdmod.quiver import Rep, check_relations, direct_sum, dualize, extend_by_zero, hom_space
from quiverdmod.verma import (build_verma, build_verma_at, enumerate_flags, flag_space, induced_weights,
                              irreducible_quotient, verma_with_flags)
from quiverdmod.weights import Weights, in_category, lambda_of_arrow

NAMES = list(corpus())
W2 = Weights([Fraction(1, 2), Fraction(1, 3)])


def one(x):
    return Matrix.from_rows([[x]], 1)


def test_flag_counts():
    a3 = concurrent_lines(3)
    assert len(enumerate_flags(a3.graph, (0, 1, 2))) == 3
    assert enumerate_flags(a3.graph, ()) == [((),)]
    assert len(enumerate_flags(triangle().graph, (0, 1))) == 2


@pytest.mark.parametrize("name", NAMES)
def test_flags_are_maximal_chains(name):
    g = corpus()[name][0].graph
    for v in g.vertices:
        flags = enumerate_flags(g, v)
        assert flags == sorted(flags) and len(set(flags)) == len(flags)
        for f in flags:
            assert f[0] == () and f[-1] == v
            assert [g.codim[x] for x in f] == list(range(len(f)))
            assert all(g.is_arrow(x, y) for x, y in zip(f, f[1:]))


def test_a1_verma():
    arr = point_on_line()
    M = build_verma(arr, Weights([Fraction(1, 2)]))
    assert M.dims == {(): 1, (0,): 1}
    assert M.A((0,), ()) == one(1)
    assert M.round_trip((), (0,)) == one(Fraction(1, 2))


def test_a3_and_a4_dims():
    M = build_verma(concurrent_lines(3), Weights([Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)]))
    assert M.dims[(0, 1, 2)] == 2
    arr, w = corpus()["A4"]
    M = build_verma(arr, w)
    assert all(M.dims[v] == 1 for v in arr.graph.vertices if arr.graph.codim[v] == 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_concurrent_lines_dimension(n):
    arr = concurrent_lines(n)
    w = Weights([Fraction(1, p) for p in (2, 3, 5, 7, 11)[:n]])
    origin = tuple(range(n))
    fs = flag_space(arr.graph, origin)
    rel = sympy.Matrix(fs.relations.rows, fs.relations.cols,
                       [sympy.Rational(x.numerator, x.denominator) for r in fs.relations.tolist() for x in r])
    assert build_verma(arr, w).dims[origin] == n - 1 == len(fs.flags) - rel.rank()


@pytest.mark.parametrize("name", NAMES)
def test_verma_invariants(name, corpus_vermas):
    arr, w, M = corpus_vermas[name]
    assert check_relations(M).passed
    assert in_category(M, arr, w)
    assert M.dims[()] == 1
    for i in range(len(arr)):
        assert M.round_trip((), (i,)) == one(w[i])


def test_verma_at_examples():
    arr = two_lines()
    assert build_verma_at(arr, W2, ()) == build_verma(arr, W2)
    rep = build_verma_at(arr, W2, (0,))
    assert {v: d for v, d in rep.dims.items() if d} == {(0,): 1, (0, 1): 1}
    rep = build_verma_at(arr, W2, (0, 1))
    assert {v: d for v, d in rep.dims.items() if d} == {(0, 1): 1}


def test_induced_weights_are_arrow_weights():
    arr, w = corpus()["A4"]
    for a in arr.graph.vertices:
        ind = induced_arrangement(arr, a)
        iw = induced_weights(arr, w, a, ind)
        for j in range(len(iw)):
            b = ind.to_original[ind.arrangement.graph.flat((j,)).key]
            assert iw[j] == lambda_of_arrow(arr, w, a, b)


def test_flag_bases_are_representatives():
    rep, spaces = verma_with_flags(*corpus()["A3"])
    for v, s in spaces.items():
        assert len(s.basis) == rep.dims[v]
        assert s.basis == sorted(s.basis)


def _irreducible_by_brute_force(rep: Rep) -> bool:
    """Dims at most one: every nonzero vertex must generate everything."""
    g = rep.graph
    live = [v for v in g.vertices if rep.dims[v]]
    assert all(rep.dims[v] == 1 for v in live)
    for start in live:
        seen, todo = {start}, [start]
        while todo:
            b = todo.pop()
            for a in g.neighbours(b):
                if rep.dims[a] and a not in seen and rep.A(a, b)[0, 0] != 0:
                    seen.add(a)
                    todo.append(a)
        if set(live) != seen:
            return False
    return True


def test_irreducible_quotient_examples():
    arr = point_on_line()
    M = build_verma(arr, Weights([Fraction(1, 2)]))
    assert irreducible_quotient(M).dims == M.dims
    L = irreducible_quotient(build_verma(arr, Weights([0])))
    assert L.dims == {(): 1, (0,): 0}
    only = Rep(arr.graph, {(): 1})
    assert irreducible_quotient(only) == only


@pytest.mark.parametrize("w", [(Fraction(1, 2), Fraction(1, 3)), (1, 0), (0, 0), (Fraction(1, 2), -1)])
def test_irreducible_quotient_brute_force(w):
    arr = two_lines()
    L = irreducible_quotient(build_verma(arr, Weights(w)))
    assert check_relations(L).passed and L.dims[()] == 1
    assert _irreducible_by_brute_force(L)


def test_irreducible_quotient_needs_generation():
    arr = point_on_line()
    with pytest.raises(ValueError):
        irreducible_quotient(Rep(arr.graph, {(0,): 1}))


def joint_eigenspace_dim(V: Rep, arr, w) -> int:
    n = V.dims[()]
    rows = []
    for b in arr.graph.down(()):
        rows.extend((V.round_trip((), b) - Matrix.scalar(n, lambda_of_arrow(arr, w, (), b))).tolist())
    return n - (rank(Matrix.from_rows(rows, n)) if rows else 0)


def _members(arr, w, M):
    """Small members of Qui_lambda: sums of the Verma, its dual and extensions by zero."""
    pieces = [M, dualize(M)]
    for a in arr.graph.vertices:
        if a:
            ind = induced_arrangement(arr, a)
            sub = build_verma(ind.arrangement, induced_weights(arr, w, a, ind))
            pieces.append(extend_by_zero(sub, arr.graph, ind.to_original))
    return pieces


@given(st.data())
def test_hom_characterization(data):
    name = data.draw(st.sampled_from(["A1", "A2", "A3", "A4"]))
    arr, w = corpus()[name]
    M = build_verma(arr, w)
    pieces = _members(arr, w, M)
    picks = data.draw(st.lists(st.sampled_from(range(len(pieces))), min_size=1, max_size=3))
    V = pieces[picks[0]]
    for i in picks[1:]:
        V = direct_sum(V, pieces[i])
    seed = data.draw(st.integers(0, 10 ** 6))
    bases = {}
    for v, d in V.dims.items():
        entries = [[(seed >> ((i * d + j) % 17)) % 3 - 1 for j in range(d)] for i in range(d)]
        for i in range(d):
            entries[i][i] = 3 + sum(abs(x) for x in entries[i])
        bases[v] = Matrix.from_rows(entries, d)
    V = V.change_basis(bases)
    assert in_category(V, arr, w)
    assert hom_space(M, V).cols == joint_eigenspace_dim(V, arr, w)
