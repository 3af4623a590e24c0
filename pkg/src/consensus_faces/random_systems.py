"""Seeded generators of random rational test systems."""

from __future__ import annotations

import random
from fractions import Fraction

from consensus_faces.exactnum import RationalMatrix, SwitchedSystem, dobrushin_seminorm, validate_system


def _weights(rng: random.Random, k: int) -> list[Fraction]:
    raw = [rng.randint(1, 4) for _ in range(k)]
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def random_stochastic(rng: random.Random, n: int, sparsity: float | None = None) -> RationalMatrix:
    """Row-stochastic matrix with random support; many rows end up as unit vectors."""
    rows = []
    for _ in range(n):
        if sparsity is None:
            k = rng.randint(1, n)
        else:
            k = max(1, sum(rng.random() > sparsity for _ in range(n)))
        support = rng.sample(range(n), k)
        row = [Fraction(0)] * n
        for j, w in zip(support, _weights(rng, k)):
            row[j] = w
        rows.append(tuple(row))
    return RationalMatrix(tuple(rows))


def random_signed(rng: random.Random, n: int) -> RationalMatrix:
    """``S + t E`` with ``S`` stochastic, ``E`` rows summing to 0, ``t`` halved until non-expansive."""
    S = random_stochastic(rng, n)
    E = []
    for _ in range(n):
        row = [Fraction(rng.randint(-2, 2), 4) for _ in range(n - 1)]
        row.append(-sum(row, Fraction(0)))
        rng.shuffle(row)
        E.append(row)
    t = Fraction(1)
    for _ in range(6):
        A = RationalMatrix(tuple(tuple(s + t * e for s, e in zip(sr, er)) for sr, er in zip(S.rows, E)))
        if dobrushin_seminorm(A) <= 1:
            return A
        t /= 2
    return S


def random_permutation(rng: random.Random, n: int) -> RationalMatrix:
    perm = list(range(n))
    rng.shuffle(perm)
    return RationalMatrix(tuple(tuple(Fraction(int(j == perm[i])) for j in range(n)) for i in range(n)))


def random_block_stochastic(rng: random.Random, blocks: list[list[int]], n: int) -> RationalMatrix:
    """Stochastic matrix that never mixes values across ``blocks``."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for block in blocks:
        sub = random_stochastic(rng, len(block))
        for a, i in enumerate(block):
            for b, j in enumerate(block):
                rows[i][j] = sub.rows[a][b]
    return RationalMatrix(tuple(tuple(r) for r in rows))


def random_system(
    rng: random.Random,
    n: int,
    m: int,
    signed_fraction: float = 0.4,
    permutation_fraction: float = 0.1,
    block_fraction: float = 0.15,
) -> SwitchedSystem:
    """Mixed random system.

    With probability ``block_fraction`` all matrices share an invariant split
    of the agents into two groups (consensus unreachable); otherwise each
    matrix is independently a permutation, a signed non-expansive matrix or a
    sparse stochastic matrix.
    """
    if rng.random() < block_fraction:
        agents = list(range(n))
        rng.shuffle(agents)
        cut = rng.randint(1, n - 1)
        blocks = [sorted(agents[:cut]), sorted(agents[cut:])]
        return validate_system([random_block_stochastic(rng, blocks, n) for _ in range(m)])
    mats = []
    for _ in range(m):
        u = rng.random()
        if u < permutation_fraction:
            mats.append(random_permutation(rng, n))
        elif u < permutation_fraction + signed_fraction:
            mats.append(random_signed(rng, n))
        else:
            mats.append(random_stochastic(rng, n))
    return validate_system(mats)


def random_undirected_stochastic(rng: random.Random, n: int, edge_prob: float | None = None) -> RationalMatrix:
    """Stochastic matrix whose positivity pattern is a random symmetric graph.

    Diagonal entries are included at random too, so periodic patterns occur.
    """
    p = rng.uniform(0.1, 0.7) if edge_prob is None else edge_prob
    adj = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if rng.random() < p:
                adj[i][j] = adj[j][i] = True
    for i in range(n):
        if not any(adj[i]):
            j = rng.randrange(n)
            adj[i][j] = adj[j][i] = True
    rows = []
    for i in range(n):
        support = [j for j in range(n) if adj[i][j]]
        row = [Fraction(0)] * n
        for j, w in zip(support, _weights(rng, len(support))):
            row[j] = w
        rows.append(tuple(row))
    return RationalMatrix(tuple(rows))
