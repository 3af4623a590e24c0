"""Open faces of the consensus polyhedron ``P``.

Every proper open face of ``P`` contains exactly one signed vector
``v in {-1, 0, 1}^n`` with at least one ``+1`` and one ``-1``.  Opposite faces
``F`` and ``-F`` are merged; the pair is named by the member of ``{v, -v}``
whose first nonzero entry is ``+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import product
from typing import Sequence

from consensus_faces.errors import CapacityError, OutsidePolyhedronError, PreconditionError

DEFAULT_MAX_N = 12

_SIGN_CHARS = {1: "+", 0: "0", -1: "-"}
_CHAR_SIGNS = {"+": 1, "0": 0, "-": -1, "−": -1}


@total_ordering
@dataclass(frozen=True)
class FaceId:
    """Interior (``signs is None``) or the canonical signed vector of a face pair."""

    signs: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.signs is None:
            return
        v = self.signs
        if any(s not in (-1, 0, 1) for s in v) or 1 not in v or -1 not in v:
            raise ValueError(f"not a proper face vector: {v}")
        if canonical(v) != v:
            raise ValueError(f"face vector {v} is not canonical (first nonzero must be +1)")

    @classmethod
    def pair(cls, v: Sequence[int]) -> "FaceId":
        return cls(canonical(tuple(v)))

    @classmethod
    def parse(cls, text: str) -> "FaceId":
        if text == "int":
            return INTERIOR
        try:
            return cls.pair([_CHAR_SIGNS[c] for c in text])
        except KeyError:
            raise ValueError(f"bad face label {text!r}") from None

    @property
    def is_interior(self) -> bool:
        return self.signs is None

    @property
    def text(self) -> str:
        if self.signs is None:
            return "int"
        return "".join(_SIGN_CHARS[s] for s in self.signs)

    def _key(self) -> tuple:
        return (0, ()) if self.signs is None else (1, self.signs)

    def __lt__(self, other: "FaceId") -> bool:
        if not isinstance(other, FaceId):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self) -> str:
        return self.text


INTERIOR = FaceId(None)


def canonical(v: tuple[int, ...]) -> tuple[int, ...]:
    for s in v:
        if s:
            return v if s > 0 else tuple(-t for t in v)
    return v


@dataclass(frozen=True)
class FaceCensus:
    n: int
    total_faces: int
    proper_pairs: int


def face_census(n: int) -> FaceCensus:
    total = 3**n - 2 ** (n + 1) + 2
    return FaceCensus(n=n, total_faces=total, proper_pairs=(total - 1) // 2)


def classify_point(x: Sequence[Fraction]) -> FaceId:
    """Return the open face (pair) of ``P`` containing ``x``.

    Shift ``x`` so its maximum is 1, keep the entries equal to +1 or -1 and
    zero out the rest.  O(n) exact operations.
    """
    hi, lo = max(x), min(x)
    spread = hi - lo
    if spread < 2:
        return INTERIOR
    if spread > 2:
        raise OutsidePolyhedronError(f"point {tuple(str(c) for c in x)} lies outside P")
    shift = 1 - hi
    v = []
    for c in x:
        y = c + shift
        v.append(1 if y == 1 else -1 if y == -1 else 0)
    return FaceId(canonical(tuple(v)))


def representative_point(f: FaceId, n: int | None = None) -> tuple[Fraction, ...]:
    """A point inside the face: ``v`` itself, or the origin for the interior."""
    if f.signs is None:
        if n is None:
            raise PreconditionError("dimension is required for the interior representative")
        return (Fraction(0),) * n
    return tuple(Fraction(s) for s in f.signs)


def enumerate_faces(n: int, max_n: int = DEFAULT_MAX_N) -> tuple[list[FaceId], FaceCensus]:
    """All proper face pairs in lexicographic order of their canonical vectors."""
    if n < 2:
        raise PreconditionError("dimension must be at least 2")
    if n > max_n:
        raise CapacityError(
            f"n={n} exceeds the guard n <= {max_n}: the face set grows like 3^n "
            f"({3**n} sign vectors)"
        )
    pairs = []
    for v in product((-1, 0, 1), repeat=n):
        first = next(s for s in v if s) if any(v) else 0
        if first == 1 and -1 in v:
            pairs.append(FaceId(v))
    return pairs, face_census(n)
