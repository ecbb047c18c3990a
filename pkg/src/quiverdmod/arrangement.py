"""Affine hyperplane arrangements over Q: flats, the strat graph, frames,
induced and normal-cone arrangements, and determinant-ratio coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exactlin import Matrix, det, inverse, rat, rref

Key = tuple[int, ...]
Vec = tuple[Fraction, ...]


def key_str(key: Sequence[int]) -> str:
    return "[" + ",".join(str(i) for i in key) + "]"


def parse_key(text: str) -> Key:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"flat key must look like [0,2], got {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return ()
    return tuple(sorted(int(t) for t in inner.split(",")))


@dataclass(frozen=True)
class Hyperplane:
    """Zero set of ``normal . x + offset``."""
    normal: Vec
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(rat(a) for a in self.normal))
        object.__setattr__(self, "offset", rat(self.offset))
        if all(a == 0 for a in self.normal):
            raise ValueError("hyperplane normal must be nonzero")

    def normalized(self) -> tuple[Vec, Fraction]:
        lead = next(a for a in self.normal if a != 0)
        return tuple(a / lead for a in self.normal), self.offset / lead

    def same_as(self, other: "Hyperplane") -> bool:
        return self.normalized() == other.normalized()

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(self.normal, x)), self.offset)


class Arrangement:
    def __init__(self, dim: int, hyperplanes: Sequence[Hyperplane]):
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        hs = tuple(hyperplanes)
        for h in hs:
            if len(h.normal) != dim:
                raise ValueError(f"hyperplane normal {h.normal} does not live in dimension {dim}")
        seen = {}
        for i, h in enumerate(hs):
            n = h.normalized()
            if n in seen:
                raise ValueError(f"hyperplanes {seen[n]} and {i} coincide")
            seen[n] = i
        self.dim = dim
        self.hyperplanes = hs

    def __len__(self) -> int:
        return len(self.hyperplanes)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Arrangement) and self.dim == other.dim
                and self.hyperplanes == other.hyperplanes)

    def __hash__(self) -> int:
        return hash((self.dim, self.hyperplanes))

    def __repr__(self) -> str:
        return f"Arrangement(dim={self.dim}, {len(self)} hyperplanes)"

    def row(self, i: int) -> list[Fraction]:
        """Augmented equation row ``[normal | -offset]``."""
        h = self.hyperplanes[i]
        return list(h.normal) + [-h.offset]

    @cached_property
    def graph(self) -> "StratGraph":
        return build_poset(self)


@dataclass(frozen=True)
class Flat:
    key: Key
    equations: Matrix  # RREF of the augmented system, one row per independent equation
    codim: int
    dim: int

    @property
    def pivots(self) -> list[int]:
        return [next(j for j, a in enumerate(self.equations.row(i)) if a != 0)
                for i in range(self.equations.rows)]


def _system(arr: Arrangement, idx: Sequence[int]) -> tuple[Matrix, list[int]] | None:
    n = arr.dim
    if not idx:
        return Matrix.zeros(0, n + 1), []
    ech, piv, r = rref(Matrix.from_rows([arr.row(i) for i in idx], n + 1))
    if n in piv:
        return None
    return ech.submatrix(range(r), range(n + 1)), piv


def _closure(arr: Arrangement, eqs: Matrix) -> Key:
    r = eqs.rows
    out = []
    for i in range(len(arr)):
        stacked = eqs.vstack(Matrix.from_rows([arr.row(i)], arr.dim + 1))
        if rref(stacked)[2] == r:
            out.append(i)
    return tuple(out)


def flat_from_indices(arr: Arrangement, idx: Sequence[int]) -> Flat | None:
    """Intersection of the given hyperplanes, canonicalized, or None if empty."""
    sysm = _system(arr, sorted(set(idx)))
    if sysm is None:
        return None
    eqs, _ = sysm
    key = _closure(arr, eqs)
    eqs_full, _ = _system(arr, key)
    return Flat(key, eqs_full, eqs_full.rows, arr.dim - eqs_full.rows)


class StratGraph:
    """Strat graph: flats ordered by reverse inclusion, arrows at codim steps of one."""

    def __init__(self, flats: Sequence[Flat]):
        self.flats = {f.key: f for f in flats}
        self.vertices: list[Key] = sorted(self.flats)
        self.codim = {k: f.codim for k, f in self.flats.items()}
        arrows = []
        for a in self.vertices:
            for b in self.vertices:
                if self.codim[b] == self.codim[a] + 1 and set(a) <= set(b):
                    arrows.append((a, b))
        self.arrows: list[tuple[Key, Key]] = arrows
        self._arrow_set = set(arrows)
        self._down = {v: [b for a, b in arrows if a == v] for v in self.vertices}
        self._up = {v: [a for a, b in arrows if b == v] for v in self.vertices}

    def __contains__(self, key) -> bool:
        return tuple(key) in self.flats

    def __eq__(self, other) -> bool:
        return isinstance(other, StratGraph) and self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self) -> int:
        return hash((tuple(self.vertices), tuple(self.arrows)))

    def flat(self, key: Sequence[int]) -> Flat:
        try:
            return self.flats[tuple(key)]
        except KeyError:
            raise KeyError(f"{key_str(key)} is not a flat of this arrangement") from None

    def is_arrow(self, a: Key, b: Key) -> bool:
        return (a, b) in self._arrow_set

    def adjacent(self, a: Key, b: Key) -> bool:
        return (a, b) in self._arrow_set or (b, a) in self._arrow_set

    def down(self, v: Key) -> list[Key]:
        """Vertices one codimension lower in the closure order (``v -> b``)."""
        return self._down[v]

    def up(self, v: Key) -> list[Key]:
        return self._up[v]

    def neighbours(self, v: Key) -> list[Key]:
        return sorted(self._down[v] + self._up[v])

    def leq(self, b: Key, a: Key) -> bool:
        """True when the closure of ``b`` lies in the closure of ``a``."""
        return set(a) <= set(b)

    def meet(self, a: Key, b: Key) -> Key | None:
        """Key of the intersection of the two closures, or None when they are disjoint."""
        need = set(a) | set(b)
        cands = [v for v in self.vertices if need <= set(v)]
        if not cands:
            return None
        return min(cands, key=lambda v: self.codim[v])

    def below(self, a: Key) -> list[Key]:
        return [b for b in self.vertices if self.leq(b, a)]

    @property
    def open_stratum(self) -> Key:
        return ()

    @property
    def ordered_pairs(self) -> list[tuple[Key, Key]]:
        """Every ``(to, from)`` pair that may carry a nonzero map, both directions."""
        out = []
        for a, b in self.arrows:
            out.append((a, b))
            out.append((b, a))
        return sorted(out)


def build_poset(arr: Arrangement) -> StratGraph:
    ambient = flat_from_indices(arr, [])
    found = {ambient.key: ambient}
    frontier = [ambient]
    while frontier:
        nxt = []
        for f in frontier:
            for i in range(len(arr)):
                if i in f.key:
                    continue
                g = flat_from_indices(arr, f.key + (i,))
                if g is not None and g.key not in found:
                    found[g.key] = g
                    nxt.append(g)
        frontier = nxt
    return StratGraph(list(found.values()))


# --- frames ---------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """Affine coordinates ``(z, w)`` adapted to a flat: the flat is ``w = 0``.

    Coordinates are ``y = coords @ x + shift``; rows ``[:dim]`` are the
    z-coordinates (free standard coordinates), rows ``[dim:]`` the
    w-functionals (pivot rows of the flat's RREF equations).
    """
    flat: Flat
    coords: Matrix
    shift: Vec
    origin: Vec

    @property
    def n(self) -> int:
        return self.coords.rows

    @property
    def d(self) -> int:
        return self.flat.dim

    @cached_property
    def inverse(self) -> Matrix:
        return inverse(self.coords)

    @property
    def z_functionals(self) -> list[Vec]:
        return [self.coords.row(i) for i in range(self.d)]

    @property
    def w_functionals(self) -> list[tuple[Vec, Fraction]]:
        return [(self.coords.row(i), self.shift[i]) for i in range(self.d, self.n)]

    @property
    def z_basis(self) -> list[Vec]:
        """Vector fields d/dz_k written in ambient coordinates."""
        return [self.inverse.column(k) for k in range(self.d)]

    @property
    def w_vectors(self) -> list[Vec]:
        return [self.inverse.column(k) for k in range(self.d, self.n)]


def frame_from_equations(n: int, eqs: Matrix, flat: Flat) -> Frame:
    piv = [next(j for j, a in enumerate(eqs.row(i)) if a != 0) for i in range(eqs.rows)]
    free = [j for j in range(n) if j not in piv]
    rows = [[1 if j == f else 0 for j in range(n)] for f in free]
    shift = [Fraction(0)] * len(free)
    origin = [Fraction(0)] * n
    for i, p in enumerate(piv):
        rows.append(list(eqs.row(i)[:n]))
        shift.append(-eqs[i, n])
        origin[p] = eqs[i, n]
    return Frame(flat, Matrix(n, n, rows) if n else Matrix.zeros(0, 0), tuple(shift), tuple(origin))


def adapted_frame(arr: Arrangement, alpha: Sequence[int] | Flat) -> Frame:
    flat = alpha if isinstance(alpha, Flat) else arr.graph.flat(alpha)
    return frame_from_equations(arr.dim, flat.equations, flat)


def in_frame(h: Hyperplane, frame: Frame) -> tuple[Vec, Fraction]:
    """Linear part and constant of the functional of ``h`` in frame coordinates."""
    lin = tuple(sum((a * frame.inverse[i, k] for i, a in enumerate(h.normal)), Fraction(0))
                for k in range(frame.n))
    return lin, h.value(frame.origin)


def change_coordinates(arr: Arrangement, frame: Frame) -> Arrangement:
    """The same arrangement written in the frame's ``(z, w)`` coordinates."""
    hs = []
    for h in arr.hyperplanes:
        lin, c = in_frame(h, frame)
        hs.append(Hyperplane(lin, c))
    return Arrangement(arr.dim, hs)


# --- determinant ratios ---------------------------------------------------


def contract(vector: Sequence[Fraction], covectors: Sequence[Sequence[Fraction]]
             ) -> list[tuple[Fraction, list[Sequence[Fraction]]]]:
    """Interior product of a vector into ``eta_1 ^ ... ^ eta_c``.

    Returns the expansion ``sum_j (-1)^(j+1) eta_j(v) * (wedge without j)``
    as ``(coefficient, remaining covectors)`` pairs with zero terms omitted.
    """
    out = []
    for j, eta in enumerate(covectors):
        val = sum((a * b for a, b in zip(eta, vector)), Fraction(0))
        if val:
            sign = 1 if j % 2 == 0 else -1
            out.append((sign * val, [c for k, c in enumerate(covectors) if k != j]))
    return out


def top_form_ratio(numerator: Sequence[Sequence], denominator: Sequence[Sequence]) -> Fraction:
    """Ratio of two top forms given as wedge products of constant covectors."""
    num = list(numerator)
    den = list(denominator)
    n = len(den)
    if len(num) != n:
        raise ValueError("numerator and denominator must have the same degree")
    dd = det(Matrix.from_rows(den, n)) if n else Fraction(1)
    if dd == 0:
        raise ZeroDivisionError("degenerate reference form")
    dn = det(Matrix.from_rows(num, n)) if n else Fraction(1)
    return dn / dd


def contracted_ratio(vector, covectors, tail, denominator) -> Fraction:
    """``(iota_v(eta) ^ tail) / denominator`` summed over the contraction expansion."""
    return sum((c * top_form_ratio(rest + list(tail), denominator)
                for c, rest in contract(vector, covectors)), Fraction(0))


# --- induced and normal-cone arrangements -----------------------------------


def _dedupe(hs: list[Hyperplane]) -> tuple[list[Hyperplane], list[int]]:
    uniq: list[Hyperplane] = []
    where: list[int] = []
    for h in hs:
        j = next((k for k, u in enumerate(uniq) if u.same_as(h)), None)
        if j is None:
            uniq.append(h)
            j = len(uniq) - 1
        where.append(j)
    return uniq, where


@dataclass
class Induced:
    arrangement: Arrangement
    source: list[list[int]]          # induced hyperplane -> original indices
    to_original: dict[Key, Key]      # induced flat key -> original flat key
    from_original: dict[Key, Key]


def induced_arrangement(arr: Arrangement, alpha: Sequence[int]) -> Induced:
    g = arr.graph
    flat = g.flat(alpha)
    frame = adapted_frame(arr, flat)
    d = flat.dim
    cands, origin = [], []
    for i, h in enumerate(arr.hyperplanes):
        if i in flat.key:
            continue
        lin, c = in_frame(h, frame)
        z = lin[:d]
        if all(a == 0 for a in z):
            continue  # parallel to the flat, so misses it
        cands.append(Hyperplane(z, c))
        origin.append(i)
    uniq, where = _dedupe(cands)
    source = [[origin[k] for k in range(len(origin)) if where[k] == j] for j in range(len(uniq))]
    sub = Arrangement(d, uniq)
    tilde = {origin[k]: where[k] for k in range(len(origin))}
    to_orig, from_orig = {}, {}
    for b in g.below(flat.key):
        ik = tuple(sorted({tilde[i] for i in b if i not in flat.key}))
        if ik not in sub.graph:
            raise AssertionError(f"induced image of {key_str(b)} is not a flat")
        to_orig[ik] = b
        from_orig[b] = ik
    if len(to_orig) != len(sub.graph.vertices):
        raise AssertionError("induced strat graph is not in bijection with the closure subgraph")
    return Induced(sub, source, to_orig, from_orig)


@dataclass
class Local:
    arrangement: Arrangement         # hyperplanes through the centre, original order
    centre: Key
    to_original: dict[Key, Key]
    from_original: dict[Key, Key]


def local_arrangement(arr: Arrangement, centre: Sequence[int]) -> Local:
    """Germ of the arrangement at a point of the stratum ``centre``.

    Only hyperplanes containing the closure of ``centre`` pass through such a
    point; its strata are those whose closure contains ``centre``.
    """
    g = arr.graph
    c = g.flat(centre).key
    sub = Arrangement(arr.dim, [arr.hyperplanes[i] for i in c])
    to_orig = {k: tuple(c[i] for i in k) for k in sub.graph.vertices}
    expected = {b for b in g.vertices if g.leq(c, b)}
    if set(to_orig.values()) != expected:
        raise AssertionError("local strat graph is not the star of the centre")
    return Local(sub, c, to_orig, {b: k for k, b in to_orig.items()})


@dataclass
class NormalCone:
    """Normal-cone arrangement of a flat, in that flat's frame coordinates."""
    base: Arrangement
    alpha: Key
    frame: Frame
    arrangement: Arrangement
    tilde: dict[int, int]            # original index -> tilde index (dropped ones absent)
    source: list[list[int]]          # tilde index -> original indices
    dropped: list[int]
    kinds: list[str]                 # "normal" (contains the flat) or "trace"
    image: dict[Key, Key] = field(default_factory=dict)   # original vertex -> tilde vertex
    pairs: dict[Key, tuple[Key, Key]] = field(default_factory=dict)  # original -> (beta', beta'')


def normal_cone_arrangement(arr: Arrangement, alpha: Sequence[int]) -> NormalCone:
    g = arr.graph
    flat = g.flat(alpha)
    frame = adapted_frame(arr, flat)
    d, n = flat.dim, arr.dim
    cands, origin, kinds, dropped = [], [], [], []
    for i, h in enumerate(arr.hyperplanes):
        lin, c = in_frame(h, frame)
        z, w = lin[:d], lin[d:]
        if i in flat.key:
            cands.append(Hyperplane((Fraction(0),) * d + tuple(w), 0))
            kinds.append("normal")
        elif any(a != 0 for a in z):
            cands.append(Hyperplane(tuple(z) + (Fraction(0),) * (n - d), c))
            kinds.append("trace")
        else:
            dropped.append(i)
            continue
        origin.append(i)
    uniq, where = _dedupe(cands)
    source = [[origin[k] for k in range(len(origin)) if where[k] == j] for j in range(len(uniq))]
    kind_of = [kinds[where.index(j)] for j in range(len(uniq))]
    tilde = {origin[k]: where[k] for k in range(len(origin))}
    t_arr = Arrangement(n, uniq)
    nc = NormalCone(arr, flat.key, frame, t_arr, tilde, source, dropped, kind_of)
    for b in g.vertices:
        fb = g.flat(b)
        meet = flat_from_indices(arr, tuple(sorted(set(b) | set(flat.key))))
        if meet is None:
            continue
        tk = sorted({tilde[i] for i in b if i in flat.key}
                    | {tilde[i] for i in meet.key if i not in flat.key and i in tilde})
        tf = flat_from_indices(t_arr, tk)
        if tf is None or tf.dim != fb.dim:
            raise ValueError(f"image of {key_str(b)} is not a flat of the normal-cone arrangement")
        nc.image[b] = tf.key
        normal_part = tuple(sorted(i for i in b if i in flat.key))
        nc.pairs[b] = (meet.key, normal_part)
    return nc
