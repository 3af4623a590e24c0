"""Polynomial-time asymptotic stability for two undirected stochastic matrices.

For such a pair all trajectories reach consensus iff the three periodic
sequences ``0,0,...``, ``1,1,...`` and ``0,1,0,1,...`` do.  Each of those
reduces to the convergence of powers of a single stochastic matrix, which is
decided on its positivity pattern: exactly one closed communicating class,
and that class aperiodic.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import networkx as nx

from consensus_faces.decide import Problem, SequenceWitness, Verdict
from consensus_faces.errors import PreconditionError
from consensus_faces.exactnum import RationalMatrix, check_fixed_vector


@dataclass(frozen=True)
class StochasticPattern:
    n: int
    adjacency: tuple[tuple[bool, ...], ...]

    @classmethod
    def of(cls, A: RationalMatrix) -> "StochasticPattern":
        if not is_stochastic(A):
            raise PreconditionError("positivity patterns are only defined for stochastic matrices")
        return cls(A.n, tuple(tuple(a > 0 for a in row) for row in A.rows))

    def then(self, other: "StochasticPattern") -> "StochasticPattern":
        """Pattern of ``other @ self``: apply ``self`` first, then ``other``.

        Exact because a sum of nonnegative terms is positive iff one term is.
        """
        n = self.n
        cols = [[self.adjacency[k][j] for k in range(n)] for j in range(n)]
        return StochasticPattern(
            n,
            tuple(
                tuple(any(r and c for r, c in zip(other.adjacency[i], cols[j])) for j in range(n))
                for i in range(n)
            ),
        )

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((i, j) for i in range(self.n) for j in range(self.n) if self.adjacency[i][j])
        return g


def is_stochastic(A: RationalMatrix) -> bool:
    return check_fixed_vector(A) and all(a >= 0 for row in A.rows for a in row)


def is_undirected_stochastic(A: RationalMatrix) -> bool:
    if not is_stochastic(A):
        return False
    n = A.n
    return all((A[i, j] > 0) == (A[j, i] > 0) for i in range(n) for j in range(i + 1, n))


def square_has_positive_diagonal(A: RationalMatrix) -> bool:
    n = A.n
    return all(sum((A[i, k] * A[k, i] for k in range(n)), 0) > 0 for i in range(n))


def closed_classes(p: StochasticPattern) -> list[set[int]]:
    g = p.digraph()
    cond = nx.condensation(g)
    return [set(cond.nodes[c]["members"]) for c in cond.nodes if cond.out_degree(c) == 0]


def class_period(p: StochasticPattern, members: set[int]) -> int:
    """gcd of ``level(u) + 1 - level(v)`` over edges inside a strongly connected class."""
    root = min(members)
    level = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in range(p.n):
            if p.adjacency[u][v] and v in members and v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    period = 0
    for u in members:
        for v in members:
            if p.adjacency[u][v]:
                period = math.gcd(period, level[u] + 1 - level[v])
    return period


def pattern_converges(p: StochasticPattern) -> bool:
    classes = closed_classes(p)
    return len(classes) == 1 and class_period(p, classes[0]) == 1


def power_converges_to_consensus(B: RationalMatrix) -> bool:
    """True iff ``B^t x`` tends to a consensus state for every ``x``."""
    return pattern_converges(StochasticPattern.of(B))


SEQUENCES = (("sigma1", (0,)), ("sigma2", (1,)), ("sigma3", (0, 1)))


def decide_two_undirected(A1: RationalMatrix, A2: RationalMatrix) -> Verdict:
    """Asymptotic stability of ``{A1, A2}`` without building the face graph.

    The alternating sequence generates powers of ``A2 @ A1``.  A negative
    verdict names the first periodic sequence that fails.
    """
    for name, A in (("A1", A1), ("A2", A2)):
        if not is_undirected_stochastic(A):
            raise PreconditionError(f"{name} is not an undirected stochastic matrix")
    p1, p2 = StochasticPattern.of(A1), StochasticPattern.of(A2)
    for (name, word), pattern in zip(SEQUENCES, (p1, p2, p1.then(p2))):
        if not pattern_converges(pattern):
            return Verdict(Problem.ASYMPTOTIC_STABILITY, False, SequenceWitness(name, word))
    return Verdict(Problem.ASYMPTOTIC_STABILITY, True)
