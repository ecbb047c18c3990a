import sympy
from hypothesis import given, strategies as st

from quiverdmod.weyl import WeylPoly

N = 2
X = sympy.symbols("x0:2")


def as_operator(p: WeylPoly):
    def op(f):
        out = 0
        for (a, b), c in p.terms.items():
            g = f
            for i, e in enumerate(b):
                g = sympy.diff(g, X[i], e) if e else g
            for i, e in enumerate(a):
                g = g * X[i] ** e
            out += sympy.Rational(c.numerator, c.denominator) * g
        return sympy.expand(out)
    return op


mono = st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.tuples(st.integers(0, 2), st.integers(0, 2)))
polys = st.dictionaries(mono, st.integers(-3, 3), max_size=3).map(lambda t: WeylPoly(N, t))
tests = st.sampled_from([X[0] ** 3 * X[1] ** 2, X[0] * X[1] ** 4 + 2, X[1] ** 3 - X[0] ** 2 * X[1]])


@given(polys, polys, tests)
def test_product_is_composition(p, q, f):
    assert as_operator(p * q)(f) == as_operator(p)(as_operator(q)(f))


@given(polys, polys, polys)
def test_associative_and_distributive(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


def test_canonical_commutator():
    x, d = WeylPoly.x(N, 0), WeylPoly.d(N, 0)
    assert d * x - x * d == WeylPoly.const(N, 1)
    assert WeylPoly.d(N, 1) * x - x * WeylPoly.d(N, 1) == WeylPoly(N)


@given(polys, polys)
def test_adjoint_is_anti_involution(p, q):
    assert p.adjoint().adjoint() == p
    assert (p * q).adjoint() == q.adjoint() * p.adjoint()
