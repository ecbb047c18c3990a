"""Weights on hyperplanes, non-resonance and membership in Qui_lambda."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement, Key, NormalCone, key_str, normal_cone_arrangement
from .exactlin import Matrix, kernel_basis, quotient_projection, rat
from .quiver import Rep, check_relations


@dataclass(frozen=True)
class Weights:
    values: tuple[Fraction, ...]

    def __init__(self, values: Sequence):
        object.__setattr__(self, "values", tuple(rat(v) for v in values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def check(self, arr: Arrangement) -> "Weights":
        if len(self) != len(arr):
            raise ValueError(f"{len(self)} weights for {len(arr)} hyperplanes")
        return self


def lambda_of_stratum(arr: Arrangement, w: Weights, alpha: Sequence[int]) -> Fraction:
    key = arr.graph.flat(alpha).key
    return sum((w[i] for i in key), Fraction(0))


def lambda_of_arrow(arr: Arrangement, w: Weights, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
    a, b = tuple(alpha), tuple(beta)
    if not arr.graph.is_arrow(a, b):
        raise ValueError(f"{key_str(a)} -> {key_str(b)} is not an arrow")
    return sum((w[i] for i in b if i not in a), Fraction(0))


def specialize_weights(arr: Arrangement, w: Weights, alpha: Sequence[int],
                       cone: NormalCone | None = None) -> Weights:
    nc = cone or normal_cone_arrangement(arr, alpha)
    return Weights([sum((w[i] for i in src), Fraction(0)) for src in nc.source])


def _nonzero_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q != 0


def is_nonresonant(arr: Arrangement, w: Weights, strict: bool = False) -> tuple[bool, list[dict]]:
    """Arrow weights avoid Z\\{0}; pairwise differences avoid Z\\{0} (or Z when ``strict``)."""
    w.check(arr)
    g = arr.graph
    lam = {(a, b): lambda_of_arrow(arr, w, a, b) for a, b in g.arrows}
    witnesses = []
    for (a, b), v in lam.items():
        if _nonzero_integer(v):
            witnesses.append({"kind": "arrow", "arrow": [list(a), list(b)], "value": v})
    for p, u in lam.items():
        for q, v in lam.items():
            if p == q:
                continue
            d = u - v
            if d.denominator == 1 and (strict or d != 0):
                witnesses.append({"kind": "difference", "arrows": [[list(p[0]), list(p[1])],
                                                                   [list(q[0]), list(q[1])]],
                                  "value": d})
    return not witnesses, witnesses


def _vertex_in_category(rep: Rep, arr: Arrangement, w: Weights, alpha: Key) -> bool:
    n = rep.dims[alpha]
    ops = [rep.round_trip(alpha, b) - Matrix.scalar(n, lambda_of_arrow(arr, w, alpha, b))
           for b in arr.graph.down(alpha)]
    sub = Matrix.zeros(n, 0)
    while sub.cols < n:
        _, proj = quotient_projection(n, sub)
        if not ops:
            return True  # nothing acts: any flag works
        rows = []
        for op in ops:
            rows.extend((proj @ op).tolist())
        eig = kernel_basis(Matrix.from_rows(rows, n))
        if eig.cols == sub.cols:
            return False
        sub = eig
    return True


def in_category(rep: Rep, arr: Arrangement, w: Weights) -> bool:
    """Every ``V_a`` has a flag of B0-submodules with one-dimensional factors of weight lambda."""
    w.check(arr)
    if not check_relations(rep).passed:
        raise ValueError("representation violates the quadratic relations")
    return all(_vertex_in_category(rep, arr, w, a) for a in arr.graph.vertices)
