"""Rooted spanning forest enumeration and forest-sum polynomials.

A spanning forest rooted at a node set B assigns to every node outside B
exactly one outgoing edge so that the resulting functional graph is acyclic;
the components are then trees, each rooted at (draining into) one node of B.
Forest sums aggregate the products of edge labels over such forests, either
unsigned or weighted by the parity of the root-assignment bijection, and the
signed sums coincide with minors of the graph Laplacian (checked exactly by
:func:`all_minors_check`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .multigraph import Edge, Laplacian, Multidigraph, laplacian_of
from .symring import Polynomial, det_matrix


@dataclass(frozen=True)
class Forest:
    """A rooted spanning forest, identified by its sorted edge-id tuple."""

    edge_ids: tuple[int, ...]
    roots: tuple[int, ...]
    root_map: tuple[int, ...]  # root_map[node] = root of node's tree; index 0 unused

    def root_of(self, node: int) -> int:
        return self.root_map[node]

    def __len__(self) -> int:
        return len(self.edge_ids)


def forest_from_edges(graph: Multidigraph, edge_ids: Iterable[int]) -> Forest:
    """Build a Forest from edge ids; raises ValueError if not a rooted forest."""
    chosen: dict[int, Edge] = {}
    edge_ids = tuple(sorted(edge_ids))
    for eid in edge_ids:
        e = graph.edge(eid)
        if e.source in chosen:
            raise ValueError(f"node {e.source} has two outgoing edges")
        chosen[e.source] = e
    root_map = [0] * (graph.node_count + 1)
    for node in graph.nodes:
        if root_map[node]:
            continue
        seen: list[int] = []
        on_walk: set[int] = set()
        u = node
        while root_map[u] == 0 and u in chosen:
            if u in on_walk:
                raise ValueError("edge set contains a cycle")
            seen.append(u)
            on_walk.add(u)
            u = chosen[u].target
        root = root_map[u] if root_map[u] else u
        root_map[node] = root
        for v in seen:
            root_map[v] = root
    roots = tuple(sorted(n for n in graph.nodes if n not in chosen))
    return Forest(edge_ids, roots, tuple(root_map))


def _as_node_set(graph: Multidigraph, nodes: Iterable[int], what: str) -> tuple[int, ...]:
    out = tuple(sorted(set(nodes)))
    for n in out:
        if not (1 <= n <= graph.node_count):
            raise ValueError(f"{what} contains node {n} out of range")
    return out


def enumerate_rooted_forests(graph: Multidigraph, roots: Iterable[int]) -> list[Forest]:
    """All spanning forests whose trees are rooted exactly at ``roots``.

    Backtracks over the outgoing-edge choice of each non-root node with an
    incremental acyclicity check; output sorted by edge-id tuple.
    """
    b = _as_node_set(graph, roots, "root set")
    root_set = set(b)
    free = [n for n in graph.nodes if n not in root_set]
    choices = {n: graph.out_edges(n) for n in free}
    if any(not choices[n] for n in free):
        return []

    chosen: dict[int, int] = {}  # node -> chosen target

    def terminal(v: int) -> int:
        while v in chosen:
            v = chosen[v]
        return v

    found: list[list[int]] = []
    picked: list[int] = []

    def recurse(idx: int) -> None:
        if idx == len(free):
            found.append(sorted(picked))
            return
        u = free[idx]
        for e in choices[u]:
            if terminal(e.target) == u:
                continue  # adding u -> target would close a directed cycle
            chosen[u] = e.target
            picked.append(e.eid)
            recurse(idx + 1)
            picked.pop()
            del chosen[u]

    recurse(0)
    found.sort()
    return [forest_from_edges(graph, eids) for eids in found]


def enumerate_forests(
    graph: Multidigraph, contains: Iterable[int], roots: Iterable[int]
) -> list[Forest]:
    """Spanning forests rooted at ``roots`` whose trees each hold one node of ``contains``."""
    f = _as_node_set(graph, contains, "node set")
    b = _as_node_set(graph, roots, "root set")
    if len(f) != len(b):
        raise ValueError("node sets must have equal size")
    out = []
    for zeta in enumerate_rooted_forests(graph, b):
        hit_roots = {zeta.root_of(n) for n in f}
        if len(hit_roots) == len(f):
            out.append(zeta)
    return out


def forest_label(graph: Multidigraph, forest: Forest) -> Polynomial:
    """Product of the edge labels (1 for the empty forest)."""
    result = Polynomial.one()
    for eid in forest.edge_ids:
        result = result * graph.edge(eid).label
    return result


def inversion_count(forest: Forest, contains: Sequence[int]) -> int:
    """Inversions of the map sending each node of ``contains`` to its root."""
    f = sorted(contains)
    images = [forest.root_of(n) for n in f]
    return sum(
        1
        for a in range(len(f))
        for b in range(a + 1, len(f))
        if images[a] > images[b]
    )


def upsilon(graph: Multidigraph, contains: Iterable[int], roots: Iterable[int]) -> Polynomial:
    """Unsigned forest sum: total label product over matching forests."""
    f = _as_node_set(graph, contains, "node set")
    b = _as_node_set(graph, roots, "root set")
    total = Polynomial.zero()
    for zeta in enumerate_forests(graph, f, b):
        total = total + forest_label(graph, zeta)
    return total


def upsilon_signed(
    graph: Multidigraph, contains: Iterable[int], roots: Iterable[int]
) -> Polynomial:
    """Forest sum weighted by the parity of the root-assignment bijection."""
    f = _as_node_set(graph, contains, "node set")
    b = _as_node_set(graph, roots, "root set")
    total = Polynomial.zero()
    for zeta in enumerate_forests(graph, f, b):
        label = forest_label(graph, zeta)
        if inversion_count(zeta, f) % 2 == 0:
            total = total + label
        else:
            total = total - label
    return total


def upsilon_rooted(graph: Multidigraph, root: int) -> Polynomial:
    """Sum of label products over all spanning trees rooted at ``root``."""
    return upsilon(graph, (root,), (root,))


# ---------------------------------------------------------------------------
# minor identity


def minor_det(lap: Laplacian, drop_rows: Iterable[int], drop_cols: Iterable[int]) -> Polynomial:
    """Determinant of the Laplacian with the given rows/columns removed (1-based)."""
    rows = set(drop_rows)
    cols = set(drop_cols)
    sub = [
        [lap.rows[i][j] for j in range(lap.size) if j + 1 not in cols]
        for i in range(lap.size)
        if i + 1 not in rows
    ]
    return det_matrix(sub)


def all_minors_check(
    graph: Multidigraph, contains: Iterable[int], roots: Iterable[int]
) -> bool:
    """Exact check: the (F, B) minor of the Laplacian equals the signed forest sum.

    The sign exponent is (number of nodes) - |F| + sum(F) + sum(B).
    """
    f = _as_node_set(graph, contains, "node set")
    b = _as_node_set(graph, roots, "root set")
    if len(f) != len(b):
        raise ValueError("node sets must have equal size")
    lap = laplacian_of(graph)
    minor = minor_det(lap, f, b)
    eps = graph.node_count - len(f) + sum(f) + sum(b)
    signed = upsilon_signed(graph, f, b)
    expected = signed if eps % 2 == 0 else -signed
    return minor == expected
