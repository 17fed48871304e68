"""Two-colored coincidence graphs and their vector-tuple semantics.

Vertices stand for the q collections of hyperbolic vectors; an edge of color
j in {2, 3} forces the j-th coordinates of the incident vectors to agree.
Admissible graphs decompose per color into disjoint cliques of size >= 2
covering every vertex; connected admissible graphs split into generalized
trees (no cycle using both colors) and the bicolored-cycle class, where the
number t of vertex-disjoint bicolored cycles drives the norm gain.

A double edge (same pair, both colors) is kept as a length-2 bicolored
cycle; its tuple set is empty anyway because the hyperbolic constraint would
force the first coordinates to agree across distinct collections.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, NotConnected, UsageError
from .gridfn import GridFunction, lp_norm
from .riesz import (
    HyperbolicVector,
    RFunction,
    collections_by_first_coordinate,
    make_r_function,
    _lift,
)

__all__ = [
    "TwoColoredGraph",
    "CliqueDecomposition",
    "GraphClass",
    "CoincidenceSet",
    "enumerate_admissible",
    "check_admissible",
    "classify",
    "count_generalized_trees",
    "labeled_tree_count",
    "coincidence_set",
    "prod_x",
    "verify_beckgain",
    "graph_to_json",
    "graph_from_json",
]

Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise UsageError("loops are not allowed")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class TwoColoredGraph:
    """G = (V, E_2, E_3); undirected, loop-free, vertices labeled in [q]."""

    vertices: tuple[int, ...]
    edges2: frozenset[Edge]
    edges3: frozenset[Edge]

    @staticmethod
    def make(vertices: Iterable[int], edges2: Iterable[Edge] = (),
             edges3: Iterable[Edge] = ()) -> "TwoColoredGraph":
        vs = tuple(sorted(set(vertices)))
        e2 = frozenset(_norm_edge(*e) for e in edges2)
        e3 = frozenset(_norm_edge(*e) for e in edges3)
        for e in e2 | e3:
            if e[0] not in vs or e[1] not in vs:
                raise UsageError(f"edge {e} leaves the vertex set")
        return TwoColoredGraph(vs, e2, e3)

    def edges(self, color: int) -> frozenset[Edge]:
        if color == 2:
            return self.edges2
        if color == 3:
            return self.edges3
        raise UsageError(f"color must be 2 or 3, got {color}")

    @property
    def size(self) -> int:
        return len(self.vertices)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges2 | self.edges3:
            adj[u].add(v)
            adj[v].add(u)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def components(self) -> list["TwoColoredGraph"]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges2 | self.edges3:
            adj[u].add(v)
            adj[v].add(u)
        remaining = set(self.vertices)
        comps = []
        while remaining:
            start = min(remaining)
            seen = {start}
            stack = [start]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            remaining -= seen
            comps.append(TwoColoredGraph(
                tuple(sorted(seen)),
                frozenset(e for e in self.edges2 if e[0] in seen),
                frozenset(e for e in self.edges3 if e[0] in seen),
            ))
        return comps


@dataclass(frozen=True)
class CliqueDecomposition:
    """Disjoint cliques (>= 2 vertices) per color whose unions tile the edges."""

    cliques2: tuple[frozenset[int], ...]
    cliques3: tuple[frozenset[int], ...]

    def cliques(self, color: int) -> tuple[frozenset[int], ...]:
        return self.cliques2 if color == 2 else self.cliques3


@dataclass(frozen=True)
class GraphClass:
    """kind 'T' (generalized tree) or 'C'; t = max disjoint bicolored cycles."""

    kind: str
    t: int


def _color_components(vertices: Sequence[int], edges: frozenset[Edge]) -> list[set[int]]:
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    remaining = set(adj)
    comps = []
    while remaining:
        start = min(remaining)
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        remaining -= seen
        comps.append(seen)
    return comps


def check_admissible(graph: TwoColoredGraph) -> CliqueDecomposition | None:
    """The clique decomposition if the graph is admissible, else None.

    Per color every connected component must induce a complete graph (these
    components are the cliques, disjoint by construction), and every vertex
    must lie in at least one clique.
    """
    decomps = []
    covered: set[int] = set()
    for color in (2, 3):
        edges = graph.edges(color)
        comps = _color_components(graph.vertices, edges)
        for comp in comps:
            for u, v in itertools.combinations(sorted(comp), 2):
                if (u, v) not in edges:
                    return None
        covered.update(v for comp in comps for v in comp)
        decomps.append(tuple(frozenset(c) for c in sorted(comps, key=min)))
    if covered != set(graph.vertices):
        return None
    return CliqueDecomposition(decomps[0], decomps[1])


def _partial_partitions(vertices: tuple[int, ...]) -> Iterable[tuple[frozenset[int], ...]]:
    """All families of disjoint subsets of size >= 2 (possibly empty family)."""
    if not vertices:
        yield ()
        return
    head, rest = vertices[0], vertices[1:]
    # head not in any block
    yield from _partial_partitions(rest)
    # head in a block with some nonempty subset of the rest
    for r in range(1, len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            block = frozenset((head,) + extra)
            remaining = tuple(v for v in rest if v not in block)
            for tail in _partial_partitions(remaining):
                yield (block,) + tail


def enumerate_admissible(vertices: Iterable[int], max_vertices: int = 6
                         ) -> list[tuple[TwoColoredGraph, CliqueDecomposition]]:
    """All admissible two-colored graphs on the vertex set, with decompositions.

    Built constructively: per color choose disjoint cliques of size >= 2,
    then keep the pairs covering every vertex.  Exhaustive and duplicate-free.
    """
    vs = tuple(sorted(set(vertices)))
    if len(vs) > max_vertices:
        raise BudgetExceeded(f"|V| = {len(vs)} exceeds budget {max_vertices}")
    families = list(_partial_partitions(vs))
    out = []
    for fam2 in families:
        for fam3 in families:
            covered: set[int] = set()
            for block in fam2 + fam3:
                covered |= block
            if covered != set(vs):
                continue
            e2 = frozenset(
                _norm_edge(u, v)
                for block in fam2 for u, v in itertools.combinations(sorted(block), 2)
            )
            e3 = frozenset(
                _norm_edge(u, v)
                for block in fam3 for u, v in itertools.combinations(sorted(block), 2)
            )
            graph = TwoColoredGraph(vs, e2, e3)
            decomp = CliqueDecomposition(
                tuple(sorted(fam2, key=min)), tuple(sorted(fam3, key=min)))
            out.append((graph, decomp))
    return out


# ----------------------------------------------------------------------
# classification
# ----------------------------------------------------------------------
def _bicolored_cycles(graph: TwoColoredGraph) -> list[frozenset[int]]:
    """Vertex sets of all simple cycles realizable with both colors.

    Length-2 cycles are double edges; longer cycles pick one color per edge,
    needing two distinct edges offering color 2 and color 3 respectively.
    """
    cycles: set[frozenset[int]] = set()
    for e in graph.edges2 & graph.edges3:
        cycles.add(frozenset(e))
    union = graph.edges2 | graph.edges3
    vs = graph.vertices
    for size in range(3, len(vs) + 1):
        for subset in itertools.combinations(vs, size):
            first = subset[0]
            for perm in itertools.permutations(subset[1:]):
                if perm[0] > perm[-1]:
                    continue  # each cyclic order once
                order = (first,) + perm
                edge_list = [
                    _norm_edge(order[i], order[(i + 1) % size])
                    for i in range(size)
                ]
                if not all(e in union for e in edge_list):
                    continue
                has2 = [e in graph.edges2 for e in edge_list]
                has3 = [e in graph.edges3 for e in edge_list]
                ok = any(
                    has2[i] and has3[j]
                    for i in range(size) for j in range(size) if i != j
                )
                if ok:
                    cycles.add(frozenset(subset))
    return sorted(cycles, key=lambda s: (len(s), sorted(s)))


def _max_disjoint(cycles: list[frozenset[int]]) -> int:
    best = 0

    def rec(idx: int, used: frozenset[int], count: int):
        nonlocal best
        best = max(best, count)
        for i in range(idx, len(cycles)):
            if not cycles[i] & used:
                rec(i + 1, used | cycles[i], count + 1)

    rec(0, frozenset(), 0)
    return best


def classify(graph: TwoColoredGraph) -> GraphClass:
    """Generalized tree vs bicolored-cycle class, with the cycle count t.

    t is the maximum number of vertex-disjoint bicolored cycles, found by
    exhaustive packing (fine up to |V| = 6).  Raises NotConnected.
    """
    if check_admissible(graph) is None:
        raise UsageError("classify expects an admissible graph")
    if not graph.is_connected():
        raise NotConnected("classify expects a connected graph")
    cycles = _bicolored_cycles(graph)
    if not cycles:
        return GraphClass("T", 0)
    return GraphClass("C", _max_disjoint(cycles))


def labeled_tree_count(n_vertices: int) -> int:
    """Cayley's count n^{n-2} of labeled trees (1 for n in {1, 2})."""
    if n_vertices < 1:
        raise UsageError("need at least one vertex")
    if n_vertices <= 2:
        return 1
    return n_vertices ** (n_vertices - 2)


def count_generalized_trees(vertices: Iterable[int], max_vertices: int = 6) -> dict:
    """Exact count of generalized trees on V with the 2^|V| |V|^{|V|-2} bound.

    Returns the count, the bound, the pure labeled-tree count, and whether
    the bound holds.
    """
    vs = tuple(sorted(set(vertices)))
    v = len(vs)
    count = 0
    for graph, _ in enumerate_admissible(vs, max_vertices):
        if graph.is_connected() and classify(graph).kind == "T":
            count += 1
    bound = (2 ** v) * (v ** (v - 2)) if v >= 2 else 2 ** v
    return {
        "vertices": v,
        "generalized_trees": count,
        "bound": bound,
        "bound_holds": count <= bound,
        "labeled_trees": labeled_tree_count(v) if v >= 1 else 0,
    }


# ----------------------------------------------------------------------
# coincidence sets
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class CoincidenceSet:
    """All tuples of collection vectors consistent with the graph's edges."""

    graph: TwoColoredGraph
    n: int
    q: int
    tuples: tuple[tuple[HyperbolicVector, ...], ...]

    @property
    def size(self) -> int:
        return len(self.tuples)


def _edge_structure_ok(graph: TwoColoredGraph) -> bool:
    """Union-of-cliques per color, ignoring vertex coverage.

    Tuple-set APIs accept isolated vertices (their vectors range freely over
    the whole collection), unlike admissibility proper.
    """
    for color in (2, 3):
        edges = graph.edges(color)
        for comp in _color_components(graph.vertices, edges):
            for u, v in itertools.combinations(sorted(comp), 2):
                if (u, v) not in edges:
                    return False
    return True


def coincidence_set(graph: TwoColoredGraph, n: int, q: int,
                    budget: int = 10 ** 7) -> CoincidenceSet:
    """Enumerate X(G): one vector from each A_v, coordinates tied along edges.

    Edge (u, v) of color j forces the j-th coordinates equal; the hyperbolic
    constraint |r| = n does the rest.  Backtracking with early pruning.
    Isolated vertices are allowed and range freely over their collection.
    """
    if not _edge_structure_ok(graph):
        raise UsageError("per color, the edges must form disjoint cliques")
    if max(graph.vertices) > q:
        raise UsageError(f"vertex labels {graph.vertices} exceed q = {q}")
    collections = collections_by_first_coordinate(n, q)
    order = list(graph.vertices)
    constraints: list[list[tuple[int, int]]] = []  # per position: (earlier pos, coord)
    for i, v in enumerate(order):
        cons = []
        for j, u in enumerate(order[:i]):
            e = _norm_edge(u, v)
            if e in graph.edges2:
                cons.append((j, 1))
            if e in graph.edges3:
                cons.append((j, 2))
        constraints.append(cons)
    out: list[tuple[HyperbolicVector, ...]] = []

    def rec(pos: int, chosen: list[HyperbolicVector]):
        if pos == len(order):
            out.append(tuple(chosen))
            if len(out) > budget:
                raise BudgetExceeded(f"|X(G)| exceeds budget {budget}")
            return
        for vec in collections[order[pos] - 1]:
            if all(chosen[j][c] == vec[c] for j, c in constraints[pos]):
                chosen.append(vec)
                rec(pos + 1, chosen)
                chosen.pop()

    rec(0, [])
    return CoincidenceSet(graph, n, q, tuple(out))


def prod_x(graph: TwoColoredGraph, n: int, q: int,
           sign_rule: str = "allPlus", pointset=None, seed: int | None = None,
           budget: int = 10 ** 7,
           coincidences: CoincidenceSet | None = None) -> GridFunction:
    """Materialize Prod(X(G)) = sum over tuples of the product of r-functions.

    For a disjoint union of admissible components this factorizes into the
    pointwise product of the per-component sums (the reduction identity).
    Returns the zero grid when X(G) is empty.
    """
    xs = coincidences if coincidences is not None else coincidence_set(
        graph, n, q, budget)
    shapes = sorted({vec.entries for tup in xs.tuples for vec in tup})
    r_functions = {
        s: make_r_function(s, sign_rule, pointset=pointset, seed=seed)
        for s in shapes
    }
    res = (
        max((s[0] for s in shapes), default=0) + 1,
        max((s[1] for s in shapes), default=0) + 1,
        max((s[2] for s in shapes), default=0) + 1,
    )
    groups: dict[tuple[int, ...], np.ndarray] = {}
    for tup in xs.tuples:
        local = tuple(max(vec[t] for vec in tup) + 1 for t in range(3))
        cells = r_functions[tup[0].entries].box_values(local).copy()
        for vec in tup[1:]:
            cells *= r_functions[vec.entries].box_values(local)
        acc = groups.get(local)
        if acc is None:
            groups[local] = cells.astype(np.int32)
        else:
            acc += cells
    total = np.zeros(tuple(1 << r for r in res), dtype=np.int64)
    for local, arr in groups.items():
        blocks, view = [], []
        for m, k in zip(res, local):
            blocks += [1 << k, 1 << (m - k)]
            view += [1 << k, 1]
        total.reshape(blocks)[...] += arr.reshape(view)
    return GridFunction(res, total, 1)


def verify_beckgain(graph: TwoColoredGraph, n: int, q: int, l: int,
                    a: float = 1.0, b: float = 0.24,
                    sign_rule: str = "allPlus", pointset=None,
                    seed: int | None = None) -> dict:
    """Measured vs claimed norm bound for one admissible connected graph.

    measured = rho~^{|V|} ||Prod(X(G))||_{l sqrt(q)};
    bound    = M_{|V|,l} l^{-t/2} q^{t/4} n^{-t/2} with
    M = min(l^{3/2} q n^{-1/2}, l^{|V|/2} n^{1-|V|/2}).
    No absolute constant is asserted; the ratio is recorded.
    """
    if not 1 <= l <= q:
        raise UsageError(f"l must lie in 1..q, got {l}")
    cls = classify(graph)
    xs = coincidence_set(graph, n, q)
    rho_tilde = a * q ** b / n
    size = graph.size
    p = l * math.sqrt(q)
    if xs.size == 0:
        measured = 0.0
    else:
        grid = prod_x(graph, n, q, sign_rule, pointset=pointset, seed=seed,
                      coincidences=xs)
        measured = rho_tilde ** size * lp_norm(grid, p).value
    m_const = min(l ** 1.5 * q / math.sqrt(n), l ** (size / 2) * n ** (1 - size / 2))
    bound = m_const * l ** (-cls.t / 2) * q ** (cls.t / 4) * n ** (-cls.t / 2)
    return {
        "graph": graph_to_json(graph),
        "class": cls.kind,
        "t": cls.t,
        "n": n, "q": q, "l": l, "a": a, "b": b,
        "p": p,
        "x_size": xs.size,
        "measured": measured,
        "bound": bound,
        "ratio": measured / bound if bound else math.inf,
    }


# ----------------------------------------------------------------------
# interchange format
# ----------------------------------------------------------------------
def graph_to_json(graph: TwoColoredGraph) -> dict:
    edges = [{"u": u, "v": v, "color": 2} for u, v in sorted(graph.edges2)]
    edges += [{"u": u, "v": v, "color": 3} for u, v in sorted(graph.edges3)]
    return {"vertices": list(graph.vertices), "edges": edges}


def graph_from_json(payload) -> TwoColoredGraph:
    if isinstance(payload, str):
        payload = json.loads(payload)
    e2 = [(e["u"], e["v"]) for e in payload["edges"] if e["color"] == 2]
    e3 = [(e["u"], e["v"]) for e in payload["edges"] if e["color"] == 3]
    return TwoColoredGraph.make(payload["vertices"], e2, e3)
