"""Brute-force checks over switching words and an exact trajectory simulator.

Nothing here touches the face graph or caches face-to-face transitions: every
image is an exact matrix-vector product classified from scratch.  The only
sharing is between identical points (same vector, same future), and the
only pruning is that the interior of ``P`` is never left again.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from itertools import product
from fractions import Fraction
from typing import Sequence

import numpy as np

from consensus_faces.decide import CycleWitness, Problem, SteeringWitness, Verdict, Word
from consensus_faces.errors import CapacityError, DimensionError, PreconditionError
from consensus_faces.exactnum import RationalMatrix, SwitchedSystem, Vector, consensus_seminorm, dobrushin_seminorm
from consensus_faces.faces import classify_point, enumerate_faces, face_census, representative_point

DEFAULT_MAX_STATES = 10**7
DEFAULT_ORACLE_MAX_N = 6


class _Budget:
    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.used = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.limit:
            raise CapacityError(
                f"word search exceeded {self.limit} states; use the face-graph path instead"
            )


def _guard(sys: SwitchedSystem, max_n: int) -> None:
    if sys.n > max_n:
        raise CapacityError(
            f"n={sys.n} is too large for word enumeration (guard n <= {max_n}, "
            f"N={face_census(sys.n).proper_pairs} face pairs); use the face-graph path"
        )


def _boundary_levels(sys: SwitchedSystem, x0: Vector, depth: int, budget: _Budget, per_level: bool = False):
    """Yield ``(level, image, word)`` for every one-letter extension of a boundary point.

    Breadth-first over words in lexicographic order, so the first word kept
    for a point is the shortest, then smallest.  Only boundary images are
    expanded further.  With ``per_level`` a point is expanded once per level
    instead of once overall; existence searches can share across levels,
    "every word of length N" checks cannot.
    """
    seen = {x0}
    frontier: list[tuple[Vector, Word]] = [(x0, ())]
    for level in range(1, depth + 1):
        if per_level:
            seen = set()
        nxt = []
        for x, word in frontier:
            for k, A in enumerate(sys.matrices):
                budget.spend()
                y = A.apply(x)
                w = word + (k,)
                yield level, y, w
                if y in seen or classify_point(y).is_interior:
                    continue
                seen.add(y)
                nxt.append((y, w))
        frontier = nxt
        if not frontier:
            return


def brute_force_problem1(
    sys: SwitchedSystem,
    max_states: int = DEFAULT_MAX_STATES,
    max_n: int = DEFAULT_ORACLE_MAX_N,
) -> Verdict:
    """Search every word of length 1..N for one mapping a face pair into itself."""
    _guard(sys, max_n)
    pairs, census = enumerate_faces(sys.n)
    budget = _Budget(max_states)
    for f in pairs:
        for _, y, word in _boundary_levels(sys, representative_point(f), census.proper_pairs, budget):
            if classify_point(y) == f:
                return Verdict(Problem.ASYMPTOTIC_STABILITY, False, CycleWitness(f, word))
    return Verdict(Problem.ASYMPTOTIC_STABILITY, True)


def brute_force_problem2(
    sys: SwitchedSystem,
    max_states: int = DEFAULT_MAX_STATES,
    max_n: int = DEFAULT_ORACLE_MAX_N,
) -> Verdict:
    """Check that every face representative can be steered into int(P) within N steps."""
    _guard(sys, max_n)
    pairs, census = enumerate_faces(sys.n)
    budget = _Budget(max_states)
    words = {}
    stuck = []
    for f in pairs:
        for _, y, word in _boundary_levels(sys, representative_point(f), census.proper_pairs, budget):
            if classify_point(y).is_interior:
                words[f] = word
                break
        else:
            stuck.append(f)
    if stuck:
        return Verdict(Problem.REACHABILITY_OF_CONSENSUS, False, stuck=tuple(stuck))
    return Verdict(Problem.REACHABILITY_OF_CONSENSUS, True, SteeringWitness(words, ()))


def all_words_reach_interior(
    sys: SwitchedSystem,
    max_states: int = DEFAULT_MAX_STATES,
    max_n: int = DEFAULT_ORACLE_MAX_N,
) -> bool:
    """True iff every word of length N maps every face representative into int(P).

    A word whose prefix already entered int(P) stays there, so it suffices
    that no boundary point survives N levels of the search.
    """
    _guard(sys, max_n)
    pairs, census = enumerate_faces(sys.n)
    budget = _Budget(max_states)
    depth = census.proper_pairs
    for f in pairs:
        for level, y, _ in _boundary_levels(sys, representative_point(f), depth, budget, per_level=True):
            if level == depth and not classify_point(y).is_interior:
                return False
    return True


def _common_scaling(sys: SwitchedSystem) -> tuple[list[np.ndarray], int]:
    """Integer matrices ``M_i`` and one ``D`` with ``A_i = M_i / D`` (object dtype, exact)."""
    D = 1
    for A in sys.matrices:
        d = A.scaled[1]
        D = D * d // math.gcd(D, d)
    mats = [np.array(A.scaled[0], dtype=object) * (D // A.scaled[1]) for A in sys.matrices]
    return mats, D


def _spreads(stack: np.ndarray) -> np.ndarray:
    """``max_{i<j} sum_k |W_ik - W_jk|`` for each matrix of a ``(F, n, n)`` stack."""
    n = stack.shape[1]
    best = np.zeros(stack.shape[0], dtype=object)
    for i in range(n):
        for j in range(i + 1, n):
            best = np.maximum(best, np.abs(stack[:, i, :] - stack[:, j, :]).sum(axis=1))
    return best


def _horizon_bounds(sys: SwitchedSystem, depth: int, exact_words: int, budget: _Budget) -> list[Fraction]:
    """``bound[L] >= max over words W of length L of dobrushin(W)``.

    Exact for short horizons (at most ``exact_words`` words), extended by
    submultiplicativity of the induced seminorm.
    """
    mats, D = _common_scaling(sys)
    bound = [Fraction(1)]
    level = np.array([np.eye(sys.n, dtype=int).astype(object)])
    while len(bound) <= depth and len(level) * sys.m <= exact_words:
        level = np.concatenate([M @ level for M in mats])
        budget.spend(len(level))
        bound.append(Fraction(int(_spreads(level).max()), 2 * D ** len(bound)))
    exact = len(bound) - 1
    for L in range(exact + 1, depth + 1):
        bound.append(min(bound[a] * bound[L - a] for a in range(1, exact + 1)))
    return bound


def _beam_lower_bound(sys: SwitchedSystem, depth: int, budget: _Budget, width: int = 256) -> Fraction:
    """dobrushin(W) of the best length-``depth`` product kept by a beam search."""
    mats, D = _common_scaling(sys)
    beam = np.array([np.eye(sys.n, dtype=int).astype(object)])
    for _ in range(depth):
        cand = np.concatenate([M @ beam for M in mats])
        budget.spend(len(cand))
        spreads = _spreads(cand)
        order = sorted(range(len(cand)), key=lambda i: spreads[i], reverse=True)[:width]
        beam = cand[order]
    return Fraction(int(_spreads(beam[:1])[0]), 2 * D**depth)


def decay_certificate(
    sys: SwitchedSystem,
    max_states: int = DEFAULT_MAX_STATES,
    max_n: int = DEFAULT_ORACLE_MAX_N,
) -> Fraction:
    """``r = max ||W v||`` over face representatives ``v`` and words ``W`` of length N.

    Every representative has seminorm 1 and the sign vertices of ``P`` are
    among them, so ``max_v ||W v|| = dobrushin(W)`` and ``r`` is the largest
    induced seminorm of a length-N product.  Products are searched level by
    level; a prefix is cut once ``dobrushin(prefix) * bound[rest]`` cannot beat
    the best complete product found so far.
    """
    _guard(sys, max_n)
    depth = face_census(sys.n).proper_pairs
    budget = _Budget(max_states)
    mats, D = _common_scaling(sys)
    bound = _horizon_bounds(sys, depth, 20000, budget)
    best = _beam_lower_bound(sys, depth, budget)
    frontier = np.array([np.eye(sys.n, dtype=int).astype(object)])
    for k in range(1, depth + 1):
        cand = np.concatenate([M @ frontier for M in mats])
        budget.spend(len(cand))
        # keep P iff spread(P) / (2 D^k) * bound[depth-k] > best
        rest = bound[depth - k]
        threshold = 2 * D**k * rest.denominator * best.numerator
        keep = _spreads(cand) * (rest.numerator * best.denominator) > threshold
        cand = cand[keep.astype(bool)]
        if len(cand) == 0:
            break
        first = {}
        for i, W in enumerate(cand):
            first.setdefault(tuple(W.ravel()), i)
        frontier = cand[list(first.values())]
    else:
        best = max(best, Fraction(int(_spreads(frontier).max()), 2 * D**depth))
    if best >= 1:
        raise PreconditionError("some word of length N keeps a face on the boundary; not asymptotically stable")
    return best


@dataclass(frozen=True)
class TrajectoryTrace:
    states: tuple[Vector, ...]
    seminorms: tuple[Fraction, ...]
    word: Word

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        n = len(self.states[0])
        writer.writerow(["t", *(f"x{i}" for i in range(n)), "seminorm"])
        for t, (x, s) in enumerate(zip(self.states, self.seminorms)):
            writer.writerow([t, *(str(c) for c in x), str(s)])
        return buf.getvalue()


def simulate(sys: SwitchedSystem, x0: Sequence[Fraction], word: Sequence[int], periods: int = 1) -> TrajectoryTrace:
    """Exact trajectory of ``x(t+1) = A_{w(t)} x(t)`` with ``word`` repeated ``periods`` times."""
    if len(x0) != sys.n:
        raise DimensionError(f"initial state has length {len(x0)}, system has n={sys.n}")
    if not word:
        raise PreconditionError("switching word must be non-empty")
    if any(not 0 <= k < sys.m for k in word):
        raise PreconditionError(f"word letters must lie in 0..{sys.m - 1}")
    if periods < 0:
        raise PreconditionError("periods must be non-negative")
    x = tuple(Fraction(c) for c in x0)
    states = [x]
    full = tuple(word) * periods
    for k in full:
        x = sys.matrices[k].apply(x)
        states.append(x)
    return TrajectoryTrace(tuple(states), tuple(consensus_seminorm(s) for s in states), full)
