"""Quiver representations of a strat graph."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .arrangement import Key, StratGraph, key_str
from .exactlin import Matrix, inverse, kernel_basis, rank

Pair = tuple[Key, Key]  # (to, from)


class Rep:
    """Spaces ``V_a`` and maps ``A[(a, b)] : V_b -> V_a`` along arrows (both directions)."""

    def __init__(self, graph: StratGraph, dims: Mapping[Key, int],
                 maps: Mapping[Pair, Matrix] | None = None):
        self.graph = graph
        self.dims = {v: int(dims.get(v, 0)) for v in graph.vertices}
        for v in dims:
            if v not in graph:
                raise ValueError(f"{key_str(v)} is not a vertex")
        clean = {}
        for (a, b), m in (maps or {}).items():
            if not graph.adjacent(a, b):
                raise ValueError(f"no arrow between {key_str(a)} and {key_str(b)}")
            if m.shape != (self.dims[a], self.dims[b]):
                raise ValueError(f"map {key_str(b)} -> {key_str(a)} has shape {m.shape}, "
                                 f"expected {(self.dims[a], self.dims[b])}")
            clean[(a, b)] = m
        self._maps = clean

    def A(self, to: Key, frm: Key) -> Matrix:
        m = self._maps.get((to, frm))
        if m is None:
            return Matrix.zeros(self.dims.get(to, 0), self.dims.get(frm, 0))
        return m

    def round_trip(self, a: Key, b: Key) -> Matrix:
        """``A_a^b = A_{a,b} A_{b,a}`` acting on ``V_a``."""
        return self.A(a, b) @ self.A(b, a)

    @property
    def maps(self) -> dict[Pair, Matrix]:
        return {p: self.A(*p) for p in self.graph.ordered_pairs}

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, Rep) and self.graph == other.graph
                and self.dims == other.dims and self.maps == other.maps)

    def __repr__(self) -> str:
        ds = ", ".join(f"{key_str(v)}:{d}" for v, d in self.dims.items())
        return f"Rep({ds})"

    @classmethod
    def zero(cls, graph: StratGraph) -> "Rep":
        return cls(graph, {})

    def change_basis(self, bases: Mapping[Key, Matrix]) -> "Rep":
        """Rep with ``A'_{a,b} = P_a^{-1} A_{a,b} P_b``; missing vertices keep the identity."""
        P = {v: bases.get(v, Matrix.identity(d)) for v, d in self.dims.items()}
        Pinv = {v: inverse(m) for v, m in P.items()}
        return Rep(self.graph, self.dims,
                   {(a, b): Pinv[a] @ m @ P[b] for (a, b), m in self._maps.items()})


def direct_sum(v: Rep, w: Rep) -> Rep:
    _same_graph(v, w)
    g = v.graph
    dims = {x: v.dims[x] + w.dims[x] for x in g.vertices}
    maps = {}
    for a, b in g.ordered_pairs:
        top = v.A(a, b).hstack(Matrix.zeros(v.dims[a], w.dims[b]))
        bot = Matrix.zeros(w.dims[a], v.dims[b]).hstack(w.A(a, b))
        maps[(a, b)] = top.vstack(bot)
    return Rep(g, dims, maps)


def _same_graph(v: Rep, w: Rep) -> None:
    if v.graph != w.graph:
        raise ValueError("representations live on different strat graphs")


@dataclass
class RelationReport:
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        from .jsonio import to_plain
        return {"passed": self.passed, "checked": self.checked,
                "violations": [{"at": to_plain(where), "residual": to_plain(m)}
                               for where, m in self.violations]}


def relation_pairs(graph: StratGraph) -> list[tuple[Key, Key]]:
    """Pairs ``(a, c)``, ``a != c``, on which the quadratic relation is imposed.

    Pairs of equal codimension whose closures are disjoint (parallel strata)
    are skipped: the relation there has no local meaning and fails for the
    Verma quivers of non-central arrangements.
    """
    out = []
    for a in graph.vertices:
        for c in graph.vertices:
            if a == c:
                continue
            if graph.codim[a] == graph.codim[c] and graph.meet(a, c) is None:
                continue
            out.append((a, c))
    return out


def check_relations(rep: Rep) -> RelationReport:
    """Sum over middle vertices of ``A_{a,b} A_{b,c}`` must vanish for ``a != c``."""
    g = rep.graph
    report = RelationReport()
    for a, c in relation_pairs(g):
        mids = [b for b in g.neighbours(a) if g.adjacent(b, c)]
        if not mids:
            continue
        total = Matrix.zeros(rep.dims[a], rep.dims[c])
        for b in mids:
            total = total + rep.A(a, b) @ rep.A(b, c)
        report.checked += 1
        if not total.is_zero():
            report.violations.append(((a, c), total))
    return report


def check_b0_relations(rep: Rep) -> RelationReport:
    """Commutation ``[sum_b A_a^b, A_a^d] = 0`` over flags ``a -> d -> c``."""
    g = rep.graph
    report = RelationReport()
    for a in g.vertices:
        for d in g.down(a):
            for c in g.down(d):
                s = Matrix.zeros(rep.dims[a], rep.dims[a])
                for b in g.down(a):
                    if g.is_arrow(b, c):
                        s = s + rep.round_trip(a, b)
                x = rep.round_trip(a, d)
                comm = s @ x - x @ s
                report.checked += 1
                if not comm.is_zero():
                    report.violations.append(((a, d, c), comm))
    return report


def dual_sign(graph: StratGraph, a: Key, b: Key) -> int:
    e = graph.codim[a] + graph.codim[b] - 1
    if e % 2:
        raise ValueError("duality sign needs adjacent codimensions")
    return -1 if (e // 2) % 2 else 1


def dualize(rep: Rep) -> Rep:
    g = rep.graph
    maps = {}
    for a, b in g.ordered_pairs:
        m = rep.A(b, a).T
        maps[(a, b)] = m if dual_sign(g, a, b) == 1 else -m
    return Rep(g, rep.dims, maps)


# --- morphisms --------------------------------------------------------------


def _offsets(v: Rep, w: Rep) -> tuple[dict[Key, int], int]:
    off, n = {}, 0
    for x in v.graph.vertices:
        off[x] = n
        n += w.dims[x] * v.dims[x]
    return off, n


def hom_space(v: Rep, w: Rep) -> Matrix:
    """Columns span ``Hom(v, w)``; phi_a flattened column-major, vertices in key order."""
    _same_graph(v, w)
    g = v.graph
    off, n = _offsets(v, w)
    rows = []
    for a, b in g.ordered_pairs:
        Av, Aw = v.A(a, b), w.A(a, b)
        # (phi_a Av - Aw phi_b)[i, j] = 0
        for i in range(w.dims[a]):
            for j in range(v.dims[b]):
                row = [Fraction(0)] * n
                for k in range(v.dims[a]):
                    if Av[k, j]:
                        row[off[a] + k * w.dims[a] + i] += Av[k, j]
                for k in range(w.dims[b]):
                    if Aw[i, k]:
                        row[off[b] + j * w.dims[b] + k] -= Aw[i, k]
                rows.append(row)
    return kernel_basis(Matrix.from_rows(rows, n))


def unflatten(v: Rep, w: Rep, vec) -> dict[Key, Matrix]:
    off, _ = _offsets(v, w)
    out = {}
    for x in v.graph.vertices:
        r, c = w.dims[x], v.dims[x]
        out[x] = Matrix.from_columns([[vec[off[x] + j * r + i] for i in range(r)] for j in range(c)], r) \
            if c else Matrix.zeros(r, 0)
    return out


def is_morphism(v: Rep, w: Rep, phi: Mapping[Key, Matrix]) -> bool:
    return all(phi[a] @ v.A(a, b) == w.A(a, b) @ phi[b] for a, b in v.graph.ordered_pairs)


@dataclass
class IsoResult:
    status: str                      # "found", "none" (certified) or "inconclusive"
    morphism: dict | None = None

    @property
    def found(self) -> bool:
        return self.status == "found"

    def __bool__(self) -> bool:
        return self.found


def find_isomorphism(v: Rep, w: Rep) -> IsoResult:
    _same_graph(v, w)
    if v.dims != w.dims:
        return IsoResult("none")
    basis = hom_space(v, w)
    cols = basis.columns()
    if not cols:
        return IsoResult("none" if v.total_dim else "found", None if v.total_dim else unflatten(v, w, []))
    n = basis.rows
    candidates = list(cols)
    for p in (1, 2, 3):
        candidates.append(tuple(sum(((i + 1) ** p * c[r] for i, c in enumerate(cols)), Fraction(0))
                                for r in range(n)))
    for vec in candidates:
        phi = unflatten(v, w, vec)
        if all(rank(m) == m.rows for m in phi.values()):
            return IsoResult("found", phi)
    return IsoResult("inconclusive")


def extend_by_zero(sub: Rep, graph: StratGraph, to_original: Mapping[Key, Key]) -> Rep:
    """Push a rep on an induced graph forward to ``graph`` (zero elsewhere)."""
    seen = set()
    for s, t in to_original.items():
        if t not in graph or t in seen:
            raise ValueError(f"inconsistent vertex map at {key_str(s)}")
        seen.add(t)
    for a, b in sub.graph.arrows:
        if not graph.is_arrow(to_original[a], to_original[b]):
            raise ValueError(f"vertex map does not preserve the arrow {key_str(a)} -> {key_str(b)}")
    dims = {to_original[x]: d for x, d in sub.dims.items()}
    maps = {(to_original[a], to_original[b]): sub.A(a, b) for a, b in sub.graph.ordered_pairs}
    return Rep(graph, dims, maps)
