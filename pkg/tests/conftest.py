"""Shared fixtures: golden systems, brute-force oracles, random generators."""

from __future__ import annotations

import random

import pytest

from forestsolve import (
    BlockStructure,
    LinearSystem,
    Multidigraph,
    Polynomial,
    parse_poly,
)

P = parse_poly
C = Polynomial.constant


def zvar(i: int) -> Polynomial:
    return Polynomial.variable(f"z{i}")


ZERO = Polynomial.zero()


@pytest.fixture
def three_var_system() -> LinearSystem:
    """The 4-node running example: two negative columns, one split entry."""
    a = [
        [-zvar(2), ZERO, zvar(4)],
        [-zvar(1), -zvar(3), ZERO],
        [-zvar(2), zvar(3), -zvar(4)],
    ]
    b = [ZERO, zvar(5), ZERO]
    return LinearSystem.build(["x1", "x2", "x3"], a, b)


@pytest.fixture
def block_three_system() -> tuple[LinearSystem, BlockStructure]:
    """One 2x2 block plus one trailing row; nonnegative distinguished row."""
    a = [
        [-zvar(2), zvar(3), ZERO],
        [C(1), C(1), ZERO],
        [ZERO, zvar(3), -zvar(4)],
    ]
    b = [ZERO, -zvar(1), zvar(5)]
    system = LinearSystem.build(["x1", "x2", "x3"], a, b)
    return system, BlockStructure((2,), 1, (2,))


@pytest.fixture
def five_var_system() -> tuple[LinearSystem, BlockStructure]:
    a = [
        [-zvar(1), zvar(2), ZERO, ZERO, ZERO],
        [C(1), C(1), ZERO, ZERO, ZERO],
        [ZERO, zvar(2), -zvar(3) - zvar(4), zvar(5), ZERO],
        [ZERO, ZERO, zvar(3), -zvar(5), ZERO],
        [ZERO, ZERO, zvar(3), zvar(5), -zvar(6)],
    ]
    b = [ZERO, -zvar(7), zvar(8), ZERO, zvar(9)]
    system = LinearSystem.build(["x1", "x2", "x3", "x4", "x5"], a, b)
    return system, BlockStructure((2,), 3, (2,))


CRN_TEXT = """\
# two catalytic cycles sharing an exchange species, plus interconversions
species: x1, x2, x3, x4, x5, x6
x1 + x5 <-> x3 ; k1, k2
x3 -> x1 + x6 ; k3
x2 + x5 <-> x4 ; k4, k5
x4 -> x2 + x6 ; k6
x6 -> x5 ; k7
x1 <-> x2 ; k8, k9
x3 <-> x4 ; k10, k11
"""


@pytest.fixture
def crn_text() -> str:
    return CRN_TEXT


@pytest.fixture
def mmatrix_system() -> LinearSystem:
    """Nonnegative solution but provably no certificate graph."""
    a = [[C(-4), C(2)], [C(1), C(-1)]]
    return LinearSystem.build(["x1", "x2"], a, [C(1), C(1)])


# ---------------------------------------------------------------------------
# brute-force oracles


def brute_force_rooted_forests(
    graph: Multidigraph, roots: tuple[int, ...]
) -> set[frozenset[int]]:
    """All spanning forests rooted at ``roots`` by filtering edge subsets."""
    edges = list(graph.edges)
    root_set = set(roots)
    out: set[frozenset[int]] = set()
    for mask in range(1 << len(edges)):
        subset = [edges[k] for k in range(len(edges)) if mask >> k & 1]
        outdeg = {n: 0 for n in graph.nodes}
        succ = {}
        for e in subset:
            outdeg[e.source] += 1
            succ[e.source] = e.target
        if any(outdeg[n] != (0 if n in root_set else 1) for n in graph.nodes):
            continue
        acyclic = True
        for start in graph.nodes:
            seen = set()
            u = start
            while u in succ:
                if u in seen:
                    acyclic = False
                    break
                seen.add(u)
                u = succ[u]
            if not acyclic:
                break
        if acyclic:
            out.add(frozenset(e.eid for e in subset))
    return out


def brute_force_cycles(graph: Multidigraph) -> set[frozenset[int]]:
    """All simple directed cycles as edge-id sets, by subset filtering."""
    edges = list(graph.edges)
    out: set[frozenset[int]] = set()
    for mask in range(1, 1 << len(edges)):
        subset = [edges[k] for k in range(len(edges)) if mask >> k & 1]
        succ = {}
        ok = True
        for e in subset:
            if e.source in succ:
                ok = False
                break
            succ[e.source] = e
        if not ok or len(succ) != len(subset):
            continue
        start = subset[0].source
        u = start
        used = 0
        while True:
            if u not in succ:
                ok = False
                break
            u = succ[u].target
            used += 1
            if u == start:
                break
            if used > len(subset):
                ok = False
                break
        if ok and used == len(subset):
            out.add(frozenset(e.eid for e in subset))
    return out


# ---------------------------------------------------------------------------
# random instances


def random_polynomial(rng: random.Random, names=("z1", "z2", "z3"), terms=3) -> Polynomial:
    total = Polynomial.zero()
    for _ in range(rng.randint(0, terms)):
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        mono = Polynomial.constant(coeff)
        for name in names:
            for _ in range(rng.randint(0, 2)):
                mono = mono * Polynomial.variable(name)
        total = total + mono
    return total


def random_int_system(rng: random.Random, max_m: int = 5) -> LinearSystem:
    """Random nonsingular integer system (entries in [-3, 3])."""
    from forestsolve import cramer_oracle, SingularSystemError

    while True:
        m = rng.randint(1, max_m)
        a = [
            [C(rng.randint(-3, 3)) for _ in range(m)] for _ in range(m)
        ]
        b = [C(rng.randint(-3, 3)) for _ in range(m)]
        system = LinearSystem.build([f"x{i}" for i in range(1, m + 1)], a, b)
        try:
            cramer_oracle(system)
        except SingularSystemError:
            continue
        return system


def random_block_system(
    rng: random.Random, max_m: int = 6, max_d: int = 2
) -> tuple[LinearSystem, BlockStructure]:
    """Random nonsingular block system with integer entries."""
    from forestsolve import choose_j, cramer_oracle, SingularSystemError

    while True:
        d = rng.randint(0, max_d)
        sizes = [rng.randint(1, 2) for _ in range(d)]
        m0 = rng.randint(1, max(1, max_m - sum(sizes)))
        m = sum(sizes) + m0
        if m > max_m:
            continue
        a = [[ZERO] * m for _ in range(m)]
        b = [ZERO] * m
        start = 1
        block_rows = []
        for size in sizes:
            block_rows.append((start, size))
            for r in range(start, start + size):
                for c in range(start, start + size):
                    a[r - 1][c - 1] = C(rng.randint(-3, 3))
            start += size
        for r in range(m - m0 + 1, m + 1):
            for c in range(1, m + 1):
                a[r - 1][c - 1] = C(rng.randint(-3, 3))
            b[r - 1] = C(rng.randint(-3, 3))
        for lo, size in block_rows:
            row = rng.randrange(lo, lo + size)
            if rng.random() < 0.8:
                b[row - 1] = C(rng.choice([-3, -2, -1, 1, 2, 3]))
        system = LinearSystem.build([f"x{i}" for i in range(1, m + 1)], a, b)
        try:
            cramer_oracle(system)
        except SingularSystemError:
            continue
        try:
            j = choose_j(system, sizes, m0)
        except ValueError:
            continue
        return system, BlockStructure(tuple(sizes), m0, j)


def random_certificate_cases(rng: random.Random, count: int):
    """Laplacians admitting a certificate graph with at least one negative edge.

    Built by sprinkling cancellable negative mass over positive random graphs
    and keeping the instances the search accepts.
    """
    from forestsolve import (
        Multidigraph,
        bordered_laplacian,
        find_pgraph,
        laplacian_of,
    )
    from forestsolve.symring import Sign, poly_sign

    cases = []
    attempts = 0
    while len(cases) < count and attempts < 400:
        attempts += 1
        n = rng.randint(3, 5)
        triples = []
        for _ in range(rng.randint(2, 7)):
            src = rng.randint(1, n)
            tgt = rng.randint(1, n - 1)
            if tgt >= src:
                tgt += 1
            label = rng.choice(
                [C(1), C(2), zvar(1), zvar(2), 2 * zvar(2), zvar(3)]
            )
            triples.append((src, tgt, label))
        if not triples:
            continue
        for _ in range(rng.randint(1, 2)):
            src, tgt, label = rng.choice(triples)
            other = rng.randint(1, n - 1)
            if other >= src:
                other += 1
            triples.append((src, other, -label))
        graph = Multidigraph.from_edges(n, triples)
        lap = laplacian_of(graph)
        found = find_pgraph(lap)
        if found is None:
            continue
        witness_graph, _ = found
        has_negative = any(
            poly_sign(e.label) == Sign.NONPOS for e in witness_graph.edges
        )
        if has_negative:
            cases.append((lap, found))
    return cases
