"""Graph of faces: one node per pair of opposite open faces plus the interior.

Node 0 is always the interior.  Each node has exactly one outgoing edge per
matrix, so the graph is stored as a successor table ``succ[node][label]``;
parallel edges carrying different labels are kept.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Callable, Sequence, Union

from consensus_faces.errors import (
    DimensionError,
    InvarianceError,
    InvariantViolation,
    OutsidePolyhedronError,
    PreconditionError,
)
from consensus_faces.exactnum import RationalMatrix, SwitchedSystem, Vector, as_vector
from consensus_faces.faces import (
    DEFAULT_MAX_N,
    INTERIOR,
    FaceId,
    canonical,
    classify_point,
    enumerate_faces,
    representative_point,
)


def map_face(A: RationalMatrix, f: FaceId) -> FaceId:
    """The face pair containing ``A`` applied to the representative of ``f``."""
    if f.is_interior:
        return INTERIOR
    image = A.apply(representative_point(f))
    try:
        return classify_point(image)
    except OutsidePolyhedronError as exc:
        raise InvariantViolation(
            f"image of face {f.text} left P; the matrix is not non-expansive"
        ) from exc


@total_ordering
@dataclass(frozen=True)
class CustomFace:
    """Face of a custom polyhedron, named by its active-constraint signature."""

    signature: tuple[int, ...]

    @property
    def is_interior(self) -> bool:
        return not any(self.signature)

    @property
    def text(self) -> str:
        if self.is_interior:
            return "int"
        return "c" + "".join(str(s) for s in self.signature)

    def _key(self) -> tuple:
        return (0, ()) if self.is_interior else (1, self.signature)

    def __lt__(self, other: "CustomFace") -> bool:
        if not isinstance(other, CustomFace):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self) -> str:
        return self.text


Node = Union[FaceId, CustomFace]


@dataclass(frozen=True)
class FaceGraph:
    n: int
    m: int
    nodes: tuple[Node, ...]
    succ: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    @property
    def num_pairs(self) -> int:
        return len(self.nodes) - 1

    @cached_property
    def index(self) -> dict[Node, int]:
        return {f: i for i, f in enumerate(self.nodes)}

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        """``(from, to, label)`` triples ordered by ``(from, label)``."""
        return [(u, v, k) for u, row in enumerate(self.succ) for k, v in enumerate(row)]

    @property
    def edge_count(self) -> int:
        return len(self.nodes) * self.m

    def target(self, node: int, label: int) -> int:
        return self.succ[node][label]

    def replay(self, node: int, word: Sequence[int]) -> int:
        for k in word:
            node = self.succ[node][k]
        return node


def build_face_graph(sys: SwitchedSystem, max_n: int = DEFAULT_MAX_N) -> FaceGraph:
    """Build the graph of faces of ``P`` in O(3^n m n^2).

    Images are computed on the integer matrix ``M = d * A``, so classification
    reduces to comparing integer row sums against ``2d``.
    """
    pairs, _ = enumerate_faces(sys.n, max_n)
    nodes: list[Node] = [INTERIOR, *pairs]
    lookup = {f.signs: i + 1 for i, f in enumerate(pairs)}
    succ: list[tuple[int, ...]] = [tuple(0 for _ in sys.matrices)]
    scaled = [A.scaled for A in sys.matrices]
    for f in pairs:
        pos = [j for j, s in enumerate(f.signs) if s > 0]
        neg = [j for j, s in enumerate(f.signs) if s < 0]
        row = []
        for M, d in scaled:
            w = [sum(r[j] for j in pos) - sum(r[j] for j in neg) for r in M]
            hi, lo = max(w), min(w)
            spread = hi - lo
            if spread < 2 * d:
                row.append(0)
                continue
            if spread > 2 * d:
                raise InvariantViolation(f"image of face {f.text} left P")
            v = canonical(tuple(1 if c == hi else -1 if c == lo else 0 for c in w))
            row.append(lookup[v])
        succ.append(tuple(row))
    return FaceGraph(n=sys.n, m=sys.m, nodes=tuple(nodes), succ=tuple(succ), labels=sys.labels)


@dataclass(frozen=True)
class CustomPolyhedron2D:
    """Centrally symmetric polygon ``{x : a.x <= b}`` with one point per proper open face."""

    constraints: tuple[tuple[Vector, Fraction], ...]
    face_reps: tuple[Vector, ...]

    def __post_init__(self) -> None:
        for a, _ in self.constraints:
            if len(a) != 2:
                raise DimensionError("custom polyhedra are 2-dimensional")
        if any(len(r) != 2 for r in self.face_reps):
            raise DimensionError("face representatives must be 2-vectors")
        present = set(self.constraints)
        for a, b in self.constraints:
            if (tuple(-c for c in a), b) not in present:
                raise PreconditionError(f"constraint {a}.x <= {b} has no mirror; Q must equal -Q")
        seen: dict[tuple[int, ...], Vector] = {}
        for rep in self.face_reps:
            sig = self.signature(rep)
            if not any(sig):
                raise PreconditionError(f"face representative {rep} is interior")
            if sig in seen:
                raise PreconditionError(f"representatives {seen[sig]} and {rep} share a face")
            seen[sig] = rep

    @classmethod
    def from_strings(cls, constraints, face_reps) -> "CustomPolyhedron2D":
        return cls(
            tuple((as_vector(a), as_vector([b])[0]) for a, b in constraints),
            tuple(as_vector(r) for r in face_reps),
        )

    def signature(self, x: Sequence[Fraction]) -> tuple[int, ...]:
        """Active-set signature of ``x``; raises if some constraint is violated."""
        sig = []
        for a, b in self.constraints:
            lhs = a[0] * x[0] + a[1] * x[1]
            if lhs > b:
                raise OutsidePolyhedronError(f"point {x} violates {a}.x <= {b}")
            sig.append(int(lhs == b))
        return tuple(sig)

    def pair_of(self, x: Sequence[Fraction]) -> CustomFace:
        sig = self.signature(x)
        return CustomFace(min(sig, self.signature(tuple(-c for c in x))))


@dataclass(frozen=True)
class CustomSystem:
    """Matrices acting on a custom polyhedron; no fixed-vector requirement."""

    poly: CustomPolyhedron2D
    matrices: tuple[RationalMatrix, ...]
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return 2

    @property
    def m(self) -> int:
        return len(self.matrices)

    @cached_property
    def reps(self) -> dict[CustomFace, Vector]:
        out: dict[CustomFace, Vector] = {}
        for rep in self.poly.face_reps:
            out.setdefault(self.poly.pair_of(rep), rep)
        return out

    def map_face(self, A: RationalMatrix, f: CustomFace) -> CustomFace:
        if f.is_interior:
            return f
        return self.poly.pair_of(A.apply(self.reps[f]))


def build_custom_face_graph(
    poly: CustomPolyhedron2D,
    matrices: Sequence[RationalMatrix],
    labels: Sequence[str] | None = None,
) -> FaceGraph:
    labels = tuple(labels) if labels else tuple(f"A{i}" for i in range(len(matrices)))
    if any(A.n != 2 for A in matrices):
        raise DimensionError("custom polyhedron mode needs 2x2 matrices")
    violations = []
    for i, A in enumerate(matrices):
        for rep in poly.face_reps:
            try:
                poly.signature(A.apply(rep))
            except OutsidePolyhedronError:
                violations.append((i, tuple(str(c) for c in rep)))
    if violations:
        raise InvarianceError(violations)
    system = CustomSystem(poly, tuple(matrices), labels)
    interior = CustomFace((0,) * len(poly.constraints))
    nodes: list[Node] = [interior, *sorted(system.reps)]
    index = {f: i for i, f in enumerate(nodes)}
    succ = [tuple(0 for _ in matrices)]
    for f in nodes[1:]:
        row = []
        for A in matrices:
            g = system.map_face(A, f)
            if g not in index:
                raise PreconditionError(f"image of face {f.text} is a face with no representative")
            row.append(index[g])
        succ.append(tuple(row))
    return FaceGraph(n=2, m=len(matrices), nodes=tuple(nodes), succ=tuple(succ), labels=labels)


def face_stepper(system: Union[SwitchedSystem, CustomSystem]) -> Callable[[int, Node], Node]:
    """``step(k, face)``: image of a face under matrix ``k``, computed from scratch."""
    if isinstance(system, CustomSystem):
        return lambda k, f: system.map_face(system.matrices[k], f)
    return lambda k, f: map_face(system.matrices[k], f)


def to_dot(g: FaceGraph, name: str = "faces") -> str:
    """Graphviz rendering with stable node and edge order."""
    lines = [f"digraph {name} {{"]
    for i, f in enumerate(g.nodes):
        if f.is_interior:
            lines.append(f'  n{i} [label="int", shape=doublecircle, style=filled, fillcolor=lightgrey];')
        else:
            lines.append(f'  n{i} [label="{f.text}", shape=box];')
    for u, v, k in g.edges:
        lines.append(f'  n{u} -> n{v} [label="{g.labels[k]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
