"""Verma-type quivers built on complete flags, and irreducible quotients."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement, Key, StratGraph, induced_arrangement
from .exactlin import Matrix, kernel_basis, quotient_projection, rref
from .quiver import Rep, check_relations, extend_by_zero
from .weights import Weights, in_category, lambda_of_arrow

Flag = tuple[Key, ...]


class FormulaReadingViolated(AssertionError):
    pass


def enumerate_flags(graph: StratGraph, gamma: Sequence[int]) -> list[Flag]:
    """All maximal chains from the open stratum down to ``gamma``, lexicographically."""
    target = tuple(gamma)
    graph.flat(target)
    out: list[Flag] = []

    def walk(chain: list[Key]):
        last = chain[-1]
        if last == target:
            out.append(tuple(chain))
            return
        for b in graph.down(last):
            if graph.leq(target, b):
                walk(chain + [b])

    walk([graph.open_stratum])
    return sorted(out)


@dataclass
class FlagSpace:
    target: Key
    flags: list[Flag]
    relations: Matrix        # columns are instances of the exchange relation
    basis: list[int]         # indices of representative flags
    projection: Matrix       # flag coordinates -> quotient coordinates

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, flag: Flag) -> int:
        return self._index[flag]

    def __post_init__(self):
        self._index = {f: i for i, f in enumerate(self.flags)}


def flag_space(graph: StratGraph, gamma: Key) -> FlagSpace:
    flags = enumerate_flags(graph, gamma)
    index = {f: i for i, f in enumerate(flags)}
    rels = set()
    for f in flags:
        for k in range(1, len(f) - 1):
            lo, hi = f[k - 1], f[k + 1]
            mids = [b for b in graph.down(lo) if graph.is_arrow(b, hi)]
            rels.add(tuple(sorted(index[f[:k] + (b,) + f[k + 1:]] for b in mids)))
    cols = []
    for r in sorted(rels):
        v = [Fraction(0)] * len(flags)
        for i in r:
            v[i] += 1
        cols.append(v)
    R = Matrix.from_columns(cols, len(flags))
    basis, P = quotient_projection(len(flags), R)
    return FlagSpace(gamma, flags, R, basis, P)


def _tails(graph: StratGraph, flag: Flag, beta: Key, alpha: Key, k: int) -> list[Flag]:
    """Replacements of the last ``k`` entries of ``flag`` (which ends before ``beta``)."""
    n = len(flag) - 1
    ext = list(flag) + [beta]
    out = []

    def walk(prefix: list[Key], j: int):
        if j > n:
            out.append(tuple(prefix))
            return
        for c in graph.down(prefix[-1]):
            if c == ext[j] or not graph.is_arrow(c, ext[j + 1]):
                continue
            if j == n and c != alpha:
                continue
            walk(prefix + [c], j + 1)

    walk(list(flag[:n - k + 1]), n - k + 1)
    return out


def _lowering(arr: Arrangement, w: Weights, flag: Flag, beta: Key, alpha: Key) -> dict[Flag, Fraction]:
    """Image of the flag ``flag + (beta,)`` under ``A_{alpha,beta}``, as flags ending at alpha."""
    g = arr.graph
    n = len(flag) - 1
    ext = list(flag) + [beta]
    out: dict[Flag, Fraction] = {}
    for k in range(0, n + 1):
        coeff = lambda_of_arrow(arr, w, ext[n - k], ext[n - k + 1])
        if k % 2:
            coeff = -coeff
        if coeff == 0:
            continue
        if k == 0:
            tails = [tuple(flag)] if flag[-1] == alpha else []
        else:
            tails = _tails(g, flag, beta, alpha, k)
        for t in tails:
            out[t] = out.get(t, Fraction(0)) + coeff
    return out


def verma_with_flags(arr: Arrangement, w: Weights, verify: bool = True) -> tuple[Rep, dict[Key, FlagSpace]]:
    w.check(arr)
    g = arr.graph
    spaces = {v: flag_space(g, v) for v in g.vertices}
    maps = {}
    for a, b in g.arrows:
        sa, sb = spaces[a], spaces[b]
        # raising A_{b,a}: concatenation
        up = Matrix.from_columns(
            [tuple(1 if f == fa + (b,) else 0 for f in sb.flags) for fa in sa.flags], len(sb.flags))
        # lowering A_{a,b}: signed sum over alternative tails
        down_cols = []
        for fb in sb.flags:
            img = _lowering(arr, w, fb[:-1], b, a)
            down_cols.append(tuple(img.get(f, Fraction(0)) for f in sa.flags))
        down = Matrix.from_columns(down_cols, len(sa.flags))
        if verify:
            for full, src, dst in ((up, sa, sb), (down, sb, sa)):
                if not (dst.projection @ full @ src.relations).is_zero():
                    raise FormulaReadingViolated("operator does not preserve the exchange relations")
        maps[(b, a)] = _restrict(up, sa, sb)
        maps[(a, b)] = _restrict(down, sb, sa)
    rep = Rep(g, {v: s.dim for v, s in spaces.items()}, maps)
    if verify:
        verify_verma(rep, arr, w)
    return rep, spaces


def _restrict(full: Matrix, src: FlagSpace, dst: FlagSpace) -> Matrix:
    lifted = full.submatrix(range(full.rows), src.basis)
    return dst.projection @ lifted


def verify_verma(rep: Rep, arr: Arrangement, w: Weights) -> None:
    if not check_relations(rep).passed:
        raise FormulaReadingViolated("Verma quiver violates the quadratic relations")
    root = arr.graph.open_stratum
    for b in arr.graph.down(root):
        lam = lambda_of_arrow(arr, w, root, b)
        if rep.round_trip(root, b) != Matrix.scalar(rep.dims[root], lam):
            raise FormulaReadingViolated(f"eigenvalue law fails at hyperplane {b}")
    if not in_category(rep, arr, w):
        raise FormulaReadingViolated("Verma quiver is not in Qui_lambda")


def build_verma(arr: Arrangement, w: Weights, verify: bool = True) -> Rep:
    return verma_with_flags(arr, w, verify)[0]


def flag_bases(spaces: dict[Key, FlagSpace]) -> dict[Key, list[Flag]]:
    return {v: [s.flags[i] for i in s.basis] for v, s in spaces.items()}


def induced_weights(arr: Arrangement, w: Weights, alpha: Sequence[int], induced=None) -> Weights:
    ind = induced or induced_arrangement(arr, alpha)
    return Weights([sum((w[i] for i in src), Fraction(0)) for src in ind.source])


def build_verma_at(arr: Arrangement, w: Weights, alpha: Sequence[int], verify: bool = True) -> Rep:
    """``M_{lambda,alpha}``: the Verma quiver of the induced arrangement, extended by zero."""
    w.check(arr)
    ind = induced_arrangement(arr, alpha)
    sub = build_verma(ind.arrangement, induced_weights(arr, w, alpha, ind), verify)
    return extend_by_zero(sub, arr.graph, ind.to_original)


# --- irreducible quotients --------------------------------------------------


def _span(cols: list[Sequence], n: int) -> Matrix:
    if not cols:
        return Matrix.zeros(n, 0)
    m = Matrix.from_columns(cols, n)
    ech, piv, r = rref(m.T)
    return Matrix.from_columns([ech.row(i) for i in range(r)], n)


def generated_subrep(rep: Rep, at: Key) -> dict[Key, Matrix]:
    """Subspaces of the subrepresentation generated by ``V_at``."""
    g = rep.graph
    sub = {v: Matrix.zeros(rep.dims[v], 0) for v in g.vertices}
    sub[at] = Matrix.identity(rep.dims[at])
    changed = True
    while changed:
        changed = False
        for a, b in g.ordered_pairs:
            img = rep.A(a, b) @ sub[b]
            new = _span(list(sub[a].columns()) + list(img.columns()), rep.dims[a])
            if new.cols > sub[a].cols:
                sub[a] = new
                changed = True
    return sub


def largest_subrep_avoiding(rep: Rep, at: Key) -> dict[Key, Matrix]:
    g = rep.graph
    N = {v: Matrix.identity(rep.dims[v]) for v in g.vertices}
    N[at] = Matrix.zeros(rep.dims[at], 0)
    changed = True
    while changed:
        changed = False
        for b in g.vertices:
            if N[b].cols == 0:
                continue
            rows = []
            for a in g.neighbours(b):
                _, P = quotient_projection(rep.dims[a], N[a])
                rows.extend((P @ rep.A(a, b) @ N[b]).tolist())
            if not rows:
                continue
            coeffs = kernel_basis(Matrix.from_rows(rows, N[b].cols))
            if coeffs.cols < N[b].cols:
                N[b] = _span(list((N[b] @ coeffs).columns()), rep.dims[b])
                changed = True
    return N


def quotient_rep(rep: Rep, sub: dict[Key, Matrix]) -> Rep:
    g = rep.graph
    proj, lift = {}, {}
    for v in g.vertices:
        basis, P = quotient_projection(rep.dims[v], sub[v])
        proj[v] = P
        lift[v] = Matrix.from_columns(
            [tuple(1 if i == j else 0 for i in range(rep.dims[v])) for j in basis], rep.dims[v])
    maps = {(a, b): proj[a] @ rep.A(a, b) @ lift[b] for a, b in g.ordered_pairs}
    return Rep(g, {v: proj[v].rows for v in g.vertices}, maps)


def irreducible_quotient(rep: Rep, at: Sequence[int] | None = None) -> Rep:
    g = rep.graph
    a0 = g.open_stratum if at is None else tuple(at)
    gen = generated_subrep(rep, a0)
    if any(gen[v].cols != rep.dims[v] for v in g.vertices):
        raise ValueError("representation is not generated by its space at the chosen vertex")
    return quotient_rep(rep, largest_subrep_avoiding(rep, a0))
