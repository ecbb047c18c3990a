"""The specialization functor onto the normal-cone arrangement of a flat."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import networkx as nx

from .arrangement import Arrangement, Key, NormalCone, StratGraph, key_str, normal_cone_arrangement
from .exactlin import Matrix
from .quiver import IsoResult, Rep, find_isomorphism

Block = tuple[Key, int]  # (source vertex of the original arrangement, offset)


@dataclass
class SpResult:
    t_arrangement: Arrangement
    rep: Rep
    block_map: dict[Key, list[Block]]
    cone: NormalCone | None = None

    def sources(self, v: Key) -> frozenset:
        return frozenset(b for b, _ in self.block_map.get(v, []))


def _assemble(rep: Rep, t_graph: StratGraph, blocks: Mapping[Key, list[Key]],
              adjacent) -> tuple[Rep, dict[Key, list[Block]]]:
    block_map: dict[Key, list[Block]] = {}
    dims = {}
    for v in t_graph.vertices:
        off, out = 0, []
        for b in blocks.get(v, []):
            out.append((b, off))
            off += rep.dims[b]
        block_map[v] = out
        dims[v] = off
    maps = {}
    for u, v in t_graph.ordered_pairs:
        rows = []
        for g, _ in block_map[u]:
            row = None
            for b, _ in block_map[v]:
                m = rep.A(g, b) if adjacent(g, b) else Matrix.zeros(rep.dims[g], rep.dims[b])
                row = m if row is None else row.hstack(m)
            rows.append(row if row is not None else Matrix.zeros(rep.dims[g], 0))
        if not rows:
            maps[(u, v)] = Matrix.zeros(0, dims[v])
            continue
        m = rows[0]
        for r in rows[1:]:
            m = m.vstack(r)
        maps[(u, v)] = m
    return Rep(t_graph, dims, maps), block_map


def specialize_rep(rep: Rep, arr: Arrangement, alpha: Sequence[int]) -> SpResult:
    g = arr.graph
    if rep.graph != g:
        raise ValueError("representation does not live on this arrangement")
    nc = normal_cone_arrangement(arr, alpha)
    blocks: dict[Key, list[Key]] = {}
    for b in g.vertices:
        if b in nc.image:
            blocks.setdefault(nc.image[b], []).append(b)
    t_rep, block_map = _assemble(rep, nc.arrangement.graph, blocks, g.adjacent)
    return SpResult(nc.arrangement, t_rep, block_map, nc)


def _comparable(graph: StratGraph, a: Key, b: Key) -> bool:
    return graph.leq(a, b) or graph.leq(b, a)


def specialize_along_flag(rep: Rep, arr: Arrangement, chain: Sequence[Sequence[int]]) -> SpResult:
    """Apply specializations in the given order; the flats must be pairwise comparable."""
    g = arr.graph
    keys = [tuple(a) for a in chain]
    for a in keys:
        g.flat(a)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            if not _comparable(g, a, b):
                raise ValueError(f"{key_str(a)} and {key_str(b)} are not nested")
    current = SpResult(arr, rep, {v: [(v, 0)] for v in g.vertices})
    where = {v: v for v in g.vertices}   # original flat -> vertex of the current arrangement
    for a in keys:
        if a not in where:
            raise ValueError(f"flat {key_str(a)} is not realized after earlier specializations")
        step = specialize_rep(current.rep, current.t_arrangement, where[a])
        composed = {}
        for v, blocks in step.block_map.items():
            out = []
            for b, off in blocks:
                for src, inner in current.block_map[b]:
                    out.append((src, off + inner))
            composed[v] = out
        where = {o: step.cone.image[c] for o, c in where.items() if c in step.cone.image}
        current = SpResult(step.t_arrangement, step.rep, composed, step.cone)
    return current


# --- comparing results on different normal-cone arrangements ------------------


def _digraph(res: SpResult) -> nx.DiGraph:
    g = res.rep.graph
    dg = nx.DiGraph()
    for v in g.vertices:
        dg.add_node(v, sources=res.sources(v), dim=res.rep.dims[v])
    dg.add_edges_from(g.arrows)
    return dg


def vertex_alignments(a: SpResult, b: SpResult):
    """Graph isomorphisms from ``b``'s strat graph to ``a``'s preserving source sets."""
    gm = nx.algorithms.isomorphism.DiGraphMatcher(
        _digraph(b), _digraph(a),
        node_match=lambda x, y: x["sources"] == y["sources"] and x["dim"] == y["dim"])
    return gm.isomorphisms_iter()


def relabel(rep: Rep, target: StratGraph, vmap: Mapping[Key, Key]) -> Rep:
    dims = {vmap[v]: d for v, d in rep.dims.items()}
    maps = {(vmap[x], vmap[y]): m for (x, y), m in rep.maps.items()}
    return Rep(target, dims, maps)


def compare_results(a: SpResult, b: SpResult, tries: int = 8) -> IsoResult:
    """Isomorphism test between specializations living on different arrangements."""
    last = IsoResult("none")
    for i, vmap in enumerate(vertex_alignments(a, b)):
        if i >= tries:
            break
        res = find_isomorphism(relabel(b.rep, a.rep.graph, vmap), a.rep)
        if res.found:
            return res
        if res.status == "inconclusive":
            last = res
    return last
