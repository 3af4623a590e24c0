"""Decisions on the graph of faces, with replayable certificates.

Asymptotic stability holds iff the interior self-loop is the only cycle;
consensus is reachable iff every node has a path to the interior.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from consensus_faces.errors import PreconditionError
from consensus_faces.exactnum import SwitchedSystem
from consensus_faces.facegraph import CustomSystem, FaceGraph, Node, face_stepper

Word = tuple[int, ...]


class Problem(str, enum.Enum):
    ASYMPTOTIC_STABILITY = "asymptotic_stability"
    REACHABILITY_OF_CONSENSUS = "reachability_of_consensus"


@dataclass(frozen=True)
class CycleWitness:
    """A proper face and a word mapping it back into the same face pair."""

    face: Node
    word: Word


@dataclass(frozen=True)
class SequenceWitness:
    """A periodic word whose matrix powers do not converge (fast path only)."""

    sequence: str
    word: Word


@dataclass(frozen=True)
class SteeringWitness:
    per_face_words: dict[Node, Word]
    universal_word: Word


@dataclass(frozen=True)
class Verdict:
    problem: Problem
    answer: bool
    witness: Union[CycleWitness, SequenceWitness, SteeringWitness, None] = None
    # faces with no path to the interior (negative reachability only)
    stuck: tuple[Node, ...] = field(default=())


def decide_problem1(g: FaceGraph) -> Verdict:
    """Look for a cycle among the proper-face nodes by iterative depth-first search.

    Successors are explored in label order, so the witness is deterministic.
    """
    color = [0] * len(g.nodes)  # 0 unseen, 1 on stack, 2 done
    color[0] = 2
    for root in range(1, len(g.nodes)):
        if color[root]:
            continue
        color[root] = 1
        # (node, next label to try); path_labels[i] is the label leaving stack[i]
        stack = [[root, 0]]
        path_labels: list[int] = []
        while stack:
            top = stack[-1]
            u, k = top
            if k == g.m:
                color[u] = 2
                stack.pop()
                if path_labels:
                    path_labels.pop()
                continue
            top[1] = k + 1
            v = g.succ[u][k]
            if color[v] == 0:
                color[v] = 1
                path_labels.append(k)
                stack.append([v, 0])
            elif color[v] == 1:
                on_stack = [s[0] for s in stack]
                start = on_stack.index(v)
                cycle_nodes = on_stack[start:]
                cycle_labels = path_labels[start:] + [k]
                return Verdict(Problem.ASYMPTOTIC_STABILITY, False, _rotate(g, cycle_nodes, cycle_labels))
    return Verdict(Problem.ASYMPTOTIC_STABILITY, True)


def _rotate(g: FaceGraph, nodes: list[int], labels: list[int]) -> CycleWitness:
    j = min(range(len(nodes)), key=lambda i: g.nodes[nodes[i]])
    return CycleWitness(g.nodes[nodes[j]], tuple(labels[j:] + labels[:j]))


def steering_distances(g: FaceGraph) -> list[int | None]:
    """Length of the shortest word from each node to the interior (BFS on reversed edges)."""
    preds: list[list[int]] = [[] for _ in g.nodes]
    for u, row in enumerate(g.succ):
        for v in set(row):
            preds[v].append(u)
    dist: list[int | None] = [None] * len(g.nodes)
    dist[0] = 0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if dist[u] is None:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def _steering_words(g: FaceGraph, dist: list[int | None]) -> dict[int, Word]:
    nxt = {}
    for u in range(1, len(g.nodes)):
        if dist[u] is None:
            continue
        k = next(k for k in range(g.m) if dist[g.succ[u][k]] == dist[u] - 1)
        nxt[u] = k
    words = {}
    for u in nxt:
        word, node = [], u
        while node != 0:
            k = nxt[node]
            word.append(k)
            node = g.succ[node][k]
        words[u] = tuple(word)
    return words


def decide_problem2(g: FaceGraph) -> Verdict:
    dist = steering_distances(g)
    stuck = tuple(g.nodes[u] for u in range(len(g.nodes)) if dist[u] is None)
    if stuck:
        return Verdict(Problem.REACHABILITY_OF_CONSENSUS, False, stuck=stuck)
    words = _steering_words(g, dist)
    witness = SteeringWitness(
        per_face_words={g.nodes[u]: w for u, w in sorted(words.items())},
        universal_word=_universal(g, words),
    )
    return Verdict(Problem.REACHABILITY_OF_CONSENSUS, True, witness)


def _universal(g: FaceGraph, words: dict[int, Word]) -> Word:
    succ = np.asarray(g.succ, dtype=np.int64)
    pos = np.arange(1, len(g.nodes), dtype=np.int64)
    out: list[int] = []
    for f in range(len(pos)):
        here = int(pos[f])
        if here == 0:
            continue
        w = words[here]
        out.extend(w)
        for k in w:
            pos = succ[pos, k]
    return tuple(out)


def universal_steering_word(g: FaceGraph) -> Word:
    """One word that drives every proper face into the interior; length <= N^2.

    Faces are processed in node order: each face still outside the interior
    gets the shortest steering word of wherever it currently sits appended.
    """
    dist = steering_distances(g)
    if any(d is None for d in dist):
        raise PreconditionError("consensus is not reachable from every face")
    return _universal(g, _steering_words(g, dist))


def replay_faces(system: Union[SwitchedSystem, CustomSystem], face: Node, word: Sequence[int]) -> list[Node]:
    """Faces visited when ``word`` is applied from ``face`` (without the start)."""
    step = face_stepper(system)
    visited = []
    for k in word:
        face = step(k, face)
        visited.append(face)
    return visited


def verify_cycle_witness(system: Union[SwitchedSystem, CustomSystem], w: CycleWitness) -> bool:
    """Recompute the face sequence of ``w`` from the matrices, ignoring any graph."""
    if len(w.word) == 0 or w.face.is_interior:
        return False
    if any(not 0 <= k < system.m for k in w.word):
        return False
    visited = replay_faces(system, w.face, w.word)
    return all(not f.is_interior for f in visited) and visited[-1] == w.face


def verify_steering(system: Union[SwitchedSystem, CustomSystem], face: Node, word: Sequence[int]) -> bool:
    if any(not 0 <= k < system.m for k in word):
        return False
    if face.is_interior:
        return True
    visited = replay_faces(system, face, word)
    return bool(visited) and visited[-1].is_interior
