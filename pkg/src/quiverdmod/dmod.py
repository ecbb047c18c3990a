"""Weyl-algebra realization of a quiver: Koszul resolution, global sections,
the filtration along a flat and the Euler-field eigenvalues on its graded pieces."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .arrangement import (Arrangement, Frame, Key, Local, adapted_frame, change_coordinates,
                          contracted_ratio, key_str, local_arrangement, top_form_ratio)
from .exactlin import Matrix, det
from .quiver import RelationReport, Rep, check_relations, dualize
from .weyl import WeylPoly


# --- coefficients of the defining relations ---------------------------------


class Geometry:
    """Frames of every flat plus the scalar coefficients of the defining relations."""

    def __init__(self, arr: Arrangement):
        self.arr = arr
        self.graph = arr.graph
        self.n = arr.dim
        self.frames: dict[Key, Frame] = {v: adapted_frame(arr, v) for v in self.graph.vertices}
        self._lower: dict = {}
        self._raise: dict = {}

    def z_cov(self, v: Key) -> list:
        return self.frames[v].z_functionals

    def w_cov(self, v: Key) -> list:
        return [c for c, _ in self.frames[v].w_functionals]

    def lower(self, a: Key, b: Key, vector: Sequence) -> Fraction:
        """Coefficient of ``A_{b,a}`` when a constant field along ``a`` acts (``a -> b``)."""
        key = (a, b, tuple(vector))
        if key not in self._lower:
            self._lower[key] = contracted_ratio(vector, self.w_cov(b), self.z_cov(a),
                                                self.w_cov(b) + self.z_cov(b))
        return self._lower[key]

    def raise_(self, a: Key, b: Key, covector: Sequence) -> Fraction:
        """Coefficient of ``A_{b,a}`` when a function vanishing on ``a`` acts (``b -> a``)."""
        key = (a, b, tuple(covector))
        if key not in self._raise:
            self._raise[key] = top_form_ratio([list(covector)] + self.w_cov(b) + self.z_cov(a),
                                              self.w_cov(b) + self.z_cov(b))
        return self._raise[key]

    def basis_element(self, v: Key, s: int) -> tuple[str, tuple]:
        """The ``s``-th basis element of ``T_v``: a z-vector, then the w-covectors."""
        f = self.frames[v]
        if s < f.d:
            return "vec", f.inverse.column(s)
        return "cov", f.coords.row(s)

    def phi(self, a: Key, b: Key, s: int) -> Fraction:
        """Coefficient functional of ``Q_a`` towards neighbour ``b`` on basis element ``s``."""
        kind, t = self.basis_element(a, s)
        if self.graph.is_arrow(a, b):
            return self.lower(a, b, t) if kind == "vec" else Fraction(0)
        return self.raise_(a, b, t) if kind == "cov" else Fraction(0)

    def transfer(self, a: Key, b: Key) -> Matrix:
        """Coordinates in ``T_b``'s basis of ``T_a``'s basis elements (exact on the overlap)."""
        fb = self.frames[b]
        cols = []
        for s in range(self.n):
            kind, t = self.basis_element(a, s)
            if kind == "vec":
                col = [sum((fb.coords[k, i] * t[i] for i in range(self.n)), Fraction(0))
                       for k in range(fb.d)] + [Fraction(0)] * (self.n - fb.d)
            else:
                col = [Fraction(0)] * fb.d + [sum((t[i] * fb.inverse[i, k] for i in range(self.n)), Fraction(0))
                                              for k in range(fb.d, self.n)]
            cols.append(col)
        return Matrix.from_columns(cols, self.n)

    def I(self, v: Key, s: int) -> WeylPoly:
        """First-order operator attached to a basis element of ``T_v``."""
        f = self.frames[v]
        kind, t = self.basis_element(v, s)
        if kind == "vec":
            return WeylPoly.linear(self.n, ds=t)
        return WeylPoly.linear(self.n, xs=t, c=f.shift[s])


def q_alpha(rep: Rep, arr: Arrangement, alpha: Sequence[int], geo: Geometry | None = None) -> dict:
    """``Q_alpha`` as ``{(s, beta): matrix V_alpha -> V_beta}`` over the basis of ``T_alpha``."""
    geo = geo or Geometry(arr)
    a = tuple(alpha)
    out = {}
    for s in range(arr.dim):
        for b in geo.graph.neighbours(a):
            c = geo.phi(a, b, s)
            if c:
                out[(s, b)] = rep.A(b, a).scale(c)
    return out


# --- Koszul complex ---------------------------------------------------------

Gen = tuple[Key, tuple[int, ...], int]  # (vertex, subset of the T-basis, basis index of V)


@dataclass
class KoszulComplex:
    rep: Rep
    n: int
    gens: dict[int, list[Gen]]
    diffs: dict[int, dict[tuple[int, int], WeylPoly]]   # d^(k): (target index, source index) -> entry

    def index(self, k: int) -> dict[Gen, int]:
        return {g: i for i, g in enumerate(self.gens[k])}

    def entry(self, k: int, target: Gen, source: Gen) -> WeylPoly:
        ti, si = self.index(k - 1)[target], self.index(k)[source]
        return self.diffs[k].get((ti, si), WeylPoly(self.n))

    def max_order(self) -> int:
        return max((p.order() for d in self.diffs.values() for p in d.values()), default=-1)

    def __eq__(self, other) -> bool:
        return (isinstance(other, KoszulComplex) and self.gens == other.gens
                and self.diffs == other.diffs)


def _generators(rep: Rep, n: int, k: int) -> list[Gen]:
    return [(v, S, j) for v in rep.graph.vertices for S in combinations(range(n), k)
            for j in range(rep.dims[v])]


def koszul_differential(rep: Rep, arr: Arrangement, geo: Geometry | None = None) -> KoszulComplex:
    geo = geo or Geometry(arr)
    n = arr.dim
    gens = {k: _generators(rep, n, k) for k in range(n + 1)}
    diffs = {}
    for k in range(1, n + 1):
        tgt = {g: i for i, g in enumerate(gens[k - 1])}
        d: dict[tuple[int, int], WeylPoly] = {}

        def add(t: Gen, si: int, p: WeylPoly):
            key = (tgt[t], si)
            d[key] = d[key] + p if key in d else p

        for si, (a, S, j) in enumerate(gens[k]):
            for pos, s in enumerate(S):
                sign = 1 if pos % 2 == 0 else -1
                rest = S[:pos] + S[pos + 1:]
                add((a, rest, j), si, geo.I(a, s).scale(sign))
            for b in geo.graph.neighbours(a):
                if not rep.dims[b]:
                    continue
                col = rep.A(b, a).column(j)
                if not any(col):
                    continue
                P = geo.transfer(a, b)
                for pos, s in enumerate(S):
                    c = geo.phi(a, b, s)
                    if not c:
                        continue
                    sign = -1 if pos % 2 == 0 else 1   # the minus in front of the Q-term
                    rest = S[:pos] + S[pos + 1:]
                    for R in combinations(range(n), k - 1):
                        m = det(P.submatrix(R, rest)) if rest else Fraction(1)
                        if not m:
                            continue
                        for jj, val in enumerate(col):
                            if val:
                                add((b, R, jj), si, WeylPoly.const(n, sign * c * m * val))
        diffs[k] = {key: p for key, p in d.items() if p}
    return KoszulComplex(rep, n, gens, diffs)


def compose(cx: KoszulComplex, k: int) -> dict[tuple[int, int], WeylPoly]:
    """``d^(k-1) d^(k)`` as a matrix over the Weyl algebra (left module maps)."""
    out: dict[tuple[int, int], WeylPoly] = {}
    second: dict[int, list] = {}
    for (t, h), p in cx.diffs[k - 1].items():
        second.setdefault(h, []).append((t, p))
    for (h, g), p in cx.diffs[k].items():
        for t, q in second.get(h, []):
            key = (t, g)
            prod = p * q
            out[key] = out[key] + prod if key in out else prod
    return {key: p for key, p in out.items() if p}


def check_d_squared(cx: KoszulComplex) -> RelationReport:
    report = RelationReport()
    for k in range(2, cx.n + 1):
        prod = compose(cx, k)
        report.checked += len(cx.gens[k])
        for (t, g), p in sorted(prod.items()):
            report.violations.append(((cx.gens[k][g], cx.gens[k - 2][t]), p))
    return report


# --- dual complex -----------------------------------------------------------


def _perm_sign(seq: Sequence[int]) -> int:
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def transpose_dual(rep: Rep) -> Rep:
    """Signed transpose with the sign produced by passing from right to left modules:
    ``A'_{a,b} = (-1)^((codim a - codim b - 1)/2) A_{b,a}^T``."""
    g = rep.graph
    maps = {}
    for a, b in g.ordered_pairs:
        e = (g.codim[a] - g.codim[b] - 1) // 2
        m = rep.A(b, a).T
        maps[(a, b)] = m if e % 2 == 0 else -m
    return Rep(g, rep.dims, maps)


def _dual_sign(geo: Geometry, gen: Gen) -> int:
    a, Sc, _ = gen
    n = geo.n
    S = tuple(i for i in range(n) if i not in Sc)
    f = geo.frames[a]
    m = len(Sc)
    vec_in_S = sum(1 for i in S if i < f.d)
    orient = 1 if det(f.coords) > 0 else -1
    e = vec_in_S + m * (m - 1) // 2 + m * (n + 1)
    return _perm_sign(S + Sc) * orient * (-1 if e % 2 else 1)


def dual_complex(cx: KoszulComplex, arr: Arrangement, geo: Geometry | None = None) -> KoszulComplex:
    """``Hom_D(E, D)`` turned back into a left complex.

    Entries are the adjoints (x -> x, d -> -d, order reversed) of the
    transposed differentials; degree ``k`` becomes ``N - k`` through the
    complementary subset, with a sign per generator.
    """
    geo = geo or Geometry(arr)
    n = cx.n
    dual_rep = Rep(cx.rep.graph, cx.rep.dims, {})
    gens = {k: _generators(dual_rep, n, k) for k in range(n + 1)}
    diffs = {}
    for m in range(1, n + 1):
        k = n - m        # source of d^(k+1) becomes the target side
        src_idx = {g: i for i, g in enumerate(gens[m])}
        tgt_idx = {g: i for i, g in enumerate(gens[m - 1])}
        d = {}
        for (t, s), p in cx.diffs[k + 1].items():
            a, S, j = cx.gens[k][t]
            b, R, jj = cx.gens[k + 1][s]
            src = (a, tuple(i for i in range(n) if i not in S), j)
            tgt = (b, tuple(i for i in range(n) if i not in R), jj)
            sign = _dual_sign(geo, src) * _dual_sign(geo, tgt)
            d[(tgt_idx[tgt], src_idx[src])] = p.adjoint().scale(sign)
        diffs[m] = d
    return KoszulComplex(transpose_dual(cx.rep), n, gens, diffs)


def complex_mismatches(a: KoszulComplex, b: KoszulComplex) -> list:
    out = []
    for k in range(1, a.n + 1):
        for key in sorted(set(a.diffs[k]) | set(b.diffs[k])):
            p = a.diffs[k].get(key, WeylPoly(a.n))
            q = b.diffs[k].get(key, WeylPoly(a.n))
            if p != q:
                out.append(((k, a.gens[k][key[1]], a.gens[k - 1][key[0]]), p - q))
    return out


def check_dual(rep: Rep, arr: Arrangement) -> dict[str, RelationReport]:
    """Compare the dual complex with the Koszul complexes of both candidate dual quivers."""
    geo = Geometry(arr)
    dual = dual_complex(koszul_differential(rep, arr, geo), arr, geo)
    out = {}
    for name, other in (("dualize", dualize(rep)), ("transpose_dual", transpose_dual(rep))):
        rep_ = RelationReport(complex_mismatches(dual, koszul_differential(other, arr, geo)))
        rep_.checked = sum(len(d) for d in dual.diffs.values())
        out[name] = rep_
    return out


# --- global sections ---------------------------------------------------------
#
# Basis of the model at a vertex b: monomials X^e v with v in V_b, where in
# b's frame X_l = z_l for l < d and X_l = d/dw_l for l >= d.  The remaining
# frame operators D_l = d/dz_l (l < d) and D_l = -w_l (l >= d) satisfy
# [D_l, X_m] = delta, so a frame polynomial normal-ordered in (X, D) splits
# into a free left factor and a right factor acting through the quiver.

Basis = tuple[Key, tuple[int, ...], int]   # (vertex, exponents of X, basis index of V)
Generator = tuple[str, int]               # ("x", i) or ("d", i)


class SectionAction:
    """Action of ambient Weyl-algebra elements on the global-sections model."""

    def __init__(self, rep: Rep, arr: Arrangement, geo: Geometry | None = None):
        self.rep = rep
        self.geo = geo or Geometry(arr)
        self.n = arr.dim
        self._to: dict = {}
        self._from: dict = {}
        self._acts: dict = {}
        self._x_img: dict = {}
        self._d_img: dict = {}

    # ambient <-> swapped frame variables

    def _images(self, b: Key) -> tuple[list[WeylPoly], list[WeylPoly]]:
        if b not in self._x_img:
            f, n = self.geo.frames[b], self.n
            inv, C = f.inverse, f.coords
            xs, ds = [], []
            for i in range(n):
                X = [inv[i, l] if l < f.d else 0 for l in range(n)]
                D = [0 if l < f.d else -inv[i, l] for l in range(n)]
                xs.append(WeylPoly.linear(n, X, D, f.origin[i]))
                X = [0 if l < f.d else C[l, i] for l in range(n)]
                D = [C[l, i] if l < f.d else 0 for l in range(n)]
                ds.append(WeylPoly.linear(n, X, D))
            self._x_img[b] = (xs, ds)
        return self._x_img[b]

    def to_frame(self, b: Key, mono) -> WeylPoly:
        key = (b, mono)
        if key not in self._to:
            xs, ds = self._images(b)
            out = WeylPoly.const(self.n, 1)
            for i, e in enumerate(mono[0]):
                for _ in range(e):
                    out = out * xs[i]
            for i, e in enumerate(mono[1]):
                for _ in range(e):
                    out = out * ds[i]
            self._to[key] = out
        return self._to[key]

    def _frame_var(self, b: Key, kind: str, l: int) -> WeylPoly:
        f, n = self.geo.frames[b], self.n
        z_like = (kind == "X") == (l < f.d)
        if z_like:   # a coordinate function z_l or w_l (with sign -1 for D = -w)
            c = 1 if kind == "X" else -1
            return WeylPoly.linear(n, [c * a for a in f.coords.row(l)], (), c * f.shift[l])
        return WeylPoly.linear(n, (), f.inverse.column(l))

    def from_frame(self, b: Key, xe: tuple, de: tuple) -> WeylPoly:
        key = (b, xe, de)
        if key not in self._from:
            out = WeylPoly.const(self.n, 1)
            for kind, exps in (("X", xe), ("D", de)):
                for l, e in enumerate(exps):
                    for _ in range(e):
                        out = out * self._frame_var(b, kind, l)
            self._from[key] = out
        return self._from[key]

    # action on degree-zero vectors through the quiver

    def _D(self, b: Key, l: int, j: int) -> dict[Key, list]:
        sign = 1 if l < self.geo.frames[b].d else -1
        out = {}
        for c in self.geo.graph.neighbours(b):
            coeff = self.geo.phi(b, c, l)
            if coeff and self.rep.dims[c]:
                col = self.rep.A(c, b).column(j)
                if any(col):
                    out[c] = [sign * coeff * v for v in col]
        return out

    def _act_frame(self, b: Key, Q: WeylPoly, j: int) -> dict[Basis, Fraction]:
        out: dict[Basis, Fraction] = {}
        for (xe, de), q in Q.terms.items():
            if not any(de):
                key = (b, xe, j)
                out[key] = out.get(key, Fraction(0)) + q
                continue
            l = max(k for k in range(self.n) if de[k])
            rest = tuple(e - (k == l) for k, e in enumerate(de))
            R = self.from_frame(b, xe, rest)
            for c, vec in self._D(b, l, j).items():
                for jj, val in enumerate(vec):
                    if not val:
                        continue
                    for mono, r in R.terms.items():
                        for key, v in self.act(c, mono, jj).items():
                            out[key] = out.get(key, Fraction(0)) + q * val * r * v
        return {k: v for k, v in out.items() if v}

    def act(self, b: Key, mono, j: int) -> dict[Basis, Fraction]:
        """An ambient monomial applied to the ``j``-th basis vector of ``V_b``."""
        key = (b, mono, j)
        if key not in self._acts:
            self._acts[key] = self._act_frame(b, self.to_frame(b, mono), j)
        return self._acts[key]

    def apply(self, op: WeylPoly, m: Basis) -> dict[Basis, Fraction]:
        """``op`` applied to the basis element ``m``."""
        b, e, j = m
        xs, ds = self._images(b)
        zero = (0,) * self.n
        Q = WeylPoly(self.n)
        for mono, c in op.terms.items():
            Q = Q + self.to_frame(b, mono).scale(c)
        Q = Q * WeylPoly(self.n, {(e, zero): Fraction(1)})
        return self._act_frame(b, Q, j)


def generator_poly(n: int, g: Generator) -> WeylPoly:
    kind, i = g
    return WeylPoly.x(n, i) if kind == "x" else WeylPoly.d(n, i)


def _monomials(n: int, deg: int) -> list[tuple[int, ...]]:
    out = []
    for cut in combinations(range(deg + n - 1), n - 1):
        prev, exps = -1, []
        for c in cut + (deg + n - 1,):
            exps.append(c - prev - 1)
            prev = c
        out.append(tuple(exps))
    return sorted(out, reverse=True)


@dataclass
class GradedModel:
    rep: Rep
    arr: Arrangement
    cutoff: int
    basis: dict[int, list[Basis]]
    tables: dict[Generator, dict[Basis, dict[Basis, Fraction]]]
    action: SectionAction | None = field(default=None, repr=False)

    @property
    def generators(self) -> list[Generator]:
        return [("x", i) for i in range(self.arr.dim)] + [("d", i) for i in range(self.arr.dim)]

    def dims(self) -> dict[int, int]:
        return {k: len(v) for k, v in self.basis.items()}

    def degree(self, m: Basis) -> int:
        return sum(m[1])

    def act(self, g: Generator, vec: dict[Basis, Fraction]) -> dict[Basis, Fraction]:
        out: dict[Basis, Fraction] = {}
        table = self.tables[g]
        for m, c in vec.items():
            for k, v in table[m].items():
                out[k] = out.get(k, Fraction(0)) + c * v
        return {k: v for k, v in out.items() if v}


def expected_dims(rep: Rep, n: int, cutoff: int) -> dict[int, int]:
    """Closed form: ``sum dim V_b`` times the number of degree-``k`` monomials in ``n`` variables."""
    from math import comb
    total = rep.total_dim
    return {k: total * comb(k + n - 1, n - 1) if n else (total if k == 0 else 0)
            for k in range(cutoff + 1)}


def build_sections_model(rep: Rep, arr: Arrangement, cutoff: int = 6,
                         geo: Geometry | None = None, require_relations: bool = True) -> GradedModel:
    """Action tables of all ``x_i``, ``d_i`` on the monomial basis up to ``cutoff``.

    A generator reaches a basis monomial by commuting through the free
    monomial onto ``V_b``, where the defining relations take over.
    ``require_relations=False`` skips the precondition (used to exhibit
    failures of the Weyl relations).
    """
    if rep.graph != arr.graph:
        raise ValueError("representation does not live on this arrangement")
    if require_relations and not check_relations(rep).passed:
        raise ValueError("representation violates the quadratic relations")
    n = arr.dim
    action = SectionAction(rep, arr, geo)
    basis = {k: [(v, e, j) for v in rep.graph.vertices for e in _monomials(n, k)
                 for j in range(rep.dims[v])] if n or k == 0 else []
             for k in range(cutoff + 1)}
    gens = [("x", i) for i in range(n)] + [("d", i) for i in range(n)]
    tables = {g: {} for g in gens}
    for g in gens:
        op = generator_poly(n, g)
        for k in range(cutoff + 1):
            for m in basis[k]:
                tables[g][m] = action.apply(op, m)
    return GradedModel(rep, arr, cutoff, basis, tables, action)


def check_weyl_relations(model: GradedModel) -> RelationReport:
    """``[x_i, x_j] = [d_i, d_j] = 0`` and ``[d_i, x_j] = delta_ij`` on degrees up to cutoff - 2."""
    report = RelationReport()
    gens = model.generators
    for k in range(max(model.cutoff - 1, 0)):
        for m in model.basis[k]:
            unit = {m: Fraction(1)}
            once = {g: model.act(g, unit) for g in gens}
            for a in range(len(gens)):
                for b in range(a + 1, len(gens)):
                    g, h = gens[a], gens[b]
                    lhs = model.act(g, once[h])
                    rhs = model.act(h, once[g])
                    res = dict(lhs)
                    for key, v in rhs.items():
                        res[key] = res.get(key, Fraction(0)) - v
                    if g[0] == "x" and h[0] == "d" and g[1] == h[1]:
                        res[m] = res.get(m, Fraction(0)) + 1    # [x_i, d_i] = -1
                    res = {key: v for key, v in res.items() if v}
                    report.checked += 1
                    if res:
                        report.violations.append(((m, g, h), res))
    return report


# --- filtration along a flat, associated graded, Euler field ---------------


def _coordinate_of(vec: Sequence[Fraction]) -> int | None:
    nz = [i for i, a in enumerate(vec) if a]
    return nz[0] if len(nz) == 1 and vec[nz[0]] == 1 else None


def filtration_degrees(model: GradedModel, alpha: Key, d: int) -> tuple[dict, dict]:
    """F-degree of every basis monomial of ``model`` and of every generator.

    Coordinates ``x_i`` with ``i >= d`` are normal to the flat ``alpha`` and
    count 1, their derivatives -1, tangential ones 0.  A generator ``V_b``
    sits in degree ``dim b - dim(b meet alpha) - codim alpha``; strata whose
    closure misses the flat get ``None``.
    """
    arr, g = model.arr, model.arr.graph
    geo = model.action.geo
    codim_a = g.codim[alpha]
    weight: dict[Key, list[int]] = {}
    offset: dict[Key, int | None] = {}
    for b in g.vertices:
        f = geo.frames[b]
        ws = []
        for l in range(arr.dim):
            if l < f.d:
                i = _coordinate_of(f.coords.row(l))
                ws.append(None if i is None else (1 if i >= d else 0))
            else:
                i = _coordinate_of(f.inverse.column(l))
                ws.append(None if i is None else (-1 if i >= d else 0))
        weight[b] = ws
        m = g.meet(b, alpha)
        offset[b] = None if m is None else g.flat(b).dim - g.flat(m).dim - codim_a
    degs = {}
    for k in range(model.cutoff + 2):
        for b in g.vertices:
            if offset[b] is None:
                continue
            if any(w is None for w in weight[b]):
                raise ValueError(f"frame of {key_str(b)} is not a coordinate frame")
    return weight, offset


def f_degree(weight: dict, offset: dict, m: Basis) -> int | None:
    b, e, _ = m
    if offset[b] is None:
        return None
    return offset[b] + sum(w * k for w, k in zip(weight[b], e))


def generator_f_degree(g: Generator, d: int) -> int:
    kind, i = g
    if i < d:
        return 0
    return 1 if kind == "x" else -1


@dataclass
class GrResult:
    alpha: Key
    d: int
    model: GradedModel                 # sections model in coordinates adapted to alpha
    fdeg: dict                         # basis -> F-degree (None off the flat's closure)
    tables: dict                       # graded action, generator -> basis -> vector
    sp: object                         # SpResult
    t_model: GradedModel
    t_fdeg: dict
    bijection: dict                    # basis of the model -> basis of t_model
    good: RelationReport
    comparison: RelationReport

    def slice_dims(self, which: str = "gr") -> dict[tuple[int, int], int]:
        """Dimensions per (F-degree, polynomial degree) up to the cutoff."""
        src = self.fdeg if which == "gr" else self.t_fdeg
        out: dict[tuple[int, int], int] = {}
        for m, k in src.items():
            if k is not None and sum(m[1]) <= self.model.cutoff:
                out[(k, sum(m[1]))] = out.get((k, sum(m[1])), 0) + 1
        return dict(sorted(out.items()))

    @property
    def passed(self) -> bool:
        return self.good.passed and self.comparison.passed


def _fdeg_map(model: GradedModel, alpha: Key, d: int) -> dict:
    weight, offset = filtration_degrees(model, alpha, d)
    return {m: f_degree(weight, offset, m) for ms in model.basis.values() for m in ms}, (weight, offset)


def gr_chart(rep: Rep, arr: Arrangement, alpha: Sequence[int], cutoff: int = 6) -> GrResult:
    """Filtration, graded tables and comparison on one (global) model."""
    from .specialize import specialize_rep

    g = arr.graph
    a = g.flat(alpha).key
    frame = adapted_frame(arr, a)
    d = frame.d
    arr2 = change_coordinates(arr, frame)
    if arr2.graph.vertices != g.vertices:
        raise ValueError("coordinate change altered the strat graph")
    rep2 = Rep(arr2.graph, rep.dims, {p: m for p, m in rep.maps.items()})
    model = build_sections_model(rep2, arr2, cutoff)
    fdeg, (weight, offset) = _fdeg_map(model, a, d)

    def fd(m):
        return f_degree(weight, offset, m)

    good, tables = RelationReport(), {}
    for gen in model.generators:
        shift = generator_f_degree(gen, d)
        tables[gen] = {}
        for m, k in fdeg.items():
            if k is None:
                continue
            graded = {}
            for t, v in model.tables[gen][m].items():
                kt = fd(t)
                if kt is None:
                    continue
                if kt < k + shift:
                    good.violations.append(((m, gen, t), v))
                elif kt == k + shift:
                    graded[t] = v
            good.checked += 1
            tables[gen][m] = graded

    sp = specialize_rep(rep, arr, a)
    t_model = build_sections_model(sp.rep, sp.t_arrangement, cutoff)
    t_alpha = sp.cone.image[a]
    t_fdeg, _ = _fdeg_map(t_model, t_alpha, d)

    offsets = {b: (v, off) for v, blocks in sp.block_map.items() for b, off in blocks}

    def biject(m: Basis) -> Basis:
        b, e, j = m
        v, off = offsets[b]
        return (v, e, off + j)

    comparison = RelationReport()
    bijection = {m: biject(m) for m, k in fdeg.items() if k is not None}
    if sorted(bijection.values()) != sorted(m for ms in t_model.basis.values() for m in ms):
        comparison.violations.append((("basis",), "Gr basis does not match the specialized model"))
    else:
        for m, tm in bijection.items():
            if fdeg[m] != t_fdeg[tm]:
                comparison.violations.append(((m, "F-degree"), (fdeg[m], t_fdeg[tm])))
        for gen in model.generators:
            for m, tm in bijection.items():
                comparison.checked += 1
                mine = {biject(t): v for t, v in tables[gen][m].items()}
                if mine != t_model.tables[gen][tm]:
                    res = dict(mine)
                    for t, v in t_model.tables[gen][tm].items():
                        res[t] = res.get(t, Fraction(0)) - v
                    comparison.violations.append(((m, gen), {t: v for t, v in res.items() if v}))
    return GrResult(a, d, model, fdeg, tables, sp, t_model, t_fdeg, bijection, good, comparison)


@dataclass
class GrModel:
    alpha: Key
    charts: list[tuple[Key | None, GrResult]]    # (centre, result); centre None = global

    @property
    def passed(self) -> bool:
        return all(r.passed for _, r in self.charts)


def restrict_rep(rep: Rep, local: Local) -> Rep:
    g = local.arrangement.graph
    dims = {k: rep.dims[b] for k, b in local.to_original.items()}
    maps = {(a, b): rep.A(local.to_original[a], local.to_original[b]) for a, b in g.ordered_pairs}
    return Rep(g, dims, maps)


def gr_charts(arr: Arrangement, alpha: Sequence[int]) -> list[Key | None]:
    """Centres of the charts on which the filtration is computed.

    When every stratum closure meets the flat the global model is used.
    Otherwise the module is first localized: one chart per deepest stratum
    of the flat's closure, each seeing only the hyperplanes through it.
    """
    g = arr.graph
    a = g.flat(alpha).key
    if all(g.meet(a, b) is not None for b in g.vertices):
        return [None]
    inside = g.below(a)
    return [c for c in inside if not any(o != c and g.leq(o, c) for o in inside)]


def gr_model(rep: Rep, arr: Arrangement, alpha: Sequence[int], cutoff: int = 6) -> GrModel:
    a = arr.graph.flat(alpha).key
    charts = []
    for centre in gr_charts(arr, a):
        if centre is None:
            charts.append((None, gr_chart(rep, arr, a, cutoff)))
            continue
        loc = local_arrangement(arr, centre)
        charts.append((centre, gr_chart(restrict_rep(rep, loc), loc.arrangement,
                                        loc.from_original[a], cutoff)))
    return GrModel(a, charts)


@dataclass
class ThetaSlice:
    centre: Key | None
    k: int
    dim: int
    eigenvalue: Fraction | None
    nilpotent: bool
    invariant: bool

    @property
    def passed(self) -> bool:
        return self.nilpotent and self.invariant


def _gr_act(res: GrResult, g: Generator, vec: dict) -> dict:
    out: dict = {}
    for m, c in vec.items():
        for t, v in res.tables[g][m].items():
            out[t] = out.get(t, Fraction(0)) + c * v
    return {t: v for t, v in out.items() if v}


def theta_slices(res: GrResult, centre: Key | None = None, kmax: int = 4,
                 depth: int | None = None) -> list[ThetaSlice]:
    """``theta = sum_{i >= d} x_i d_i`` on each slice of fixed F-degree ``k <= kmax``.

    A slice holds the graded basis monomials of F-degree ``k`` and
    polynomial degree at most ``depth`` (default cutoff - 2, so that the
    tables cover every intermediate result).
    """
    from .exactlin import is_nilpotent

    n = res.model.arr.dim
    depth = res.model.cutoff - 2 if depth is None else depth
    by_k: dict[int, list[Basis]] = {}
    for m, k in res.fdeg.items():
        if k is not None and k <= kmax and sum(m[1]) <= depth:
            by_k.setdefault(k, []).append(m)
    out = []
    for k in sorted(by_k):
        ms = sorted(by_k[k])
        idx = {m: i for i, m in enumerate(ms)}
        cols, invariant = [], True
        for m in ms:
            image: dict = {}
            for i in range(res.d, n):
                for t, v in _gr_act(res, ("x", i), _gr_act(res, ("d", i), {m: Fraction(1)})).items():
                    image[t] = image.get(t, Fraction(0)) + v
            col = [Fraction(0)] * len(ms)
            for t, v in image.items():
                if t in idx:
                    col[idx[t]] = v
                elif v:
                    invariant = False
            cols.append(col)
        theta = Matrix.from_columns(cols, len(ms))
        ev = sum((theta[i, i] for i in range(len(ms))), Fraction(0)) / len(ms)
        nil = is_nilpotent(theta - Matrix.scalar(len(ms), ev))
        out.append(ThetaSlice(centre, k, len(ms), ev, nil, invariant))
    return out


def theta_spectrum(gr: GrModel, kmax: int = 4, depth: int | None = None) -> list[ThetaSlice]:
    """Eigenvalue of the Euler field along the flat on every graded slice of every chart."""
    out = []
    for centre, res in gr.charts:
        out.extend(theta_slices(res, centre, kmax, depth))
    return out
