"""Exact rational vectors and matrices, the consensus seminorm, input validation."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence, Union

from consensus_faces.errors import (
    AssumptionViolation,
    DimensionError,
    FixedVectorViolation,
    PreconditionError,
    RationalParseError,
)

Rational = Fraction
Vector = tuple[Fraction, ...]
RationalLike = Union[Fraction, int, str]

# Accepts ASCII hyphen and U+2212 as the sign.
_RATIONAL_RE = re.compile(r"^([-−]?)(\d+)(?:/(\d+))?$")


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a Fraction; ints and Fractions pass through.

    Decimals and floats are rejected so that nothing is silently rounded.
    """
    if isinstance(value, bool):
        raise RationalParseError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise RationalParseError(f"not a rational: {value!r} (floats are not accepted)")
    match = _RATIONAL_RE.match(value.strip())
    if match is None:
        raise RationalParseError(f"not a rational: {value!r} (expected 'p' or 'p/q')")
    sign, num, den = match.groups()
    if den is not None and int(den) == 0:
        raise RationalParseError(f"zero denominator in {value!r}")
    result = Fraction(int(num), int(den) if den is not None else 1)
    return -result if sign else result


def format_rational(q: Fraction) -> str:
    return str(q)


def as_vector(values: Iterable[RationalLike]) -> Vector:
    return tuple(parse_rational(v) for v in values)


def parse_vector(text: str) -> Vector:
    """Parse a comma separated list such as ``"1,-1/2,0"``."""
    parts = [p for p in text.split(",")]
    if not text.strip() or any(not p.strip() for p in parts):
        raise RationalParseError(f"malformed vector: {text!r}")
    return as_vector(parts)


def consensus_seminorm(x: Sequence[Fraction]) -> Fraction:
    """Half the spread ``(max_i x_i - min_i x_i) / 2``; zero exactly on consensus states."""
    if len(x) == 0:
        raise DimensionError("consensus seminorm of an empty vector")
    return Fraction(max(x) - min(x), 2)


@dataclass(frozen=True)
class RationalMatrix:
    """Square matrix of exact rationals, stored row-major as nested tuples."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if n == 0 or any(len(row) != n for row in self.rows):
            raise DimensionError(f"matrix must be square and non-empty, got {n} rows")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]]) -> "RationalMatrix":
        return cls(tuple(as_vector(row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def apply(self, x: Sequence[Fraction]) -> Vector:
        if len(x) != self.n:
            raise DimensionError(f"cannot apply {self.n}x{self.n} matrix to vector of length {len(x)}")
        return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self.rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.n != self.n:
            raise DimensionError(f"cannot multiply {self.n}x{self.n} by {other.n}x{other.n}")
        cols = list(zip(*other.rows))
        return RationalMatrix(
            tuple(
                tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
                for row in self.rows
            )
        )

    def row_sums(self) -> Vector:
        return tuple(sum(row, Fraction(0)) for row in self.rows)

    @cached_property
    def scaled(self) -> tuple[tuple[tuple[int, ...], ...], int]:
        """Integer form ``(M, d)`` with ``self == M / d`` and ``d`` the lcm of denominators."""
        d = 1
        for row in self.rows:
            for a in row:
                d = d * a.denominator // math.gcd(d, a.denominator)
        ints = tuple(tuple(a.numerator * (d // a.denominator) for a in row) for row in self.rows)
        return ints, d

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(a) for a in row] for row in self.rows]


def mat_apply(A: RationalMatrix, x: Sequence[Fraction]) -> Vector:
    return A.apply(x)


def check_fixed_vector(A: RationalMatrix) -> bool:
    """True iff ``A @ 1 == 1`` exactly, i.e. every row sums to one."""
    return all(s == 1 for s in A.row_sums())


def dobrushin_seminorm(A: RationalMatrix) -> Fraction:
    """Induced operator seminorm of ``A`` for the consensus seminorm.

    For ``A @ 1 == 1`` this is ``max_{i<j} sum_k |a_ik - a_jk| / 2``; the
    non-expansion assumption holds iff the value is at most one.
    """
    if not check_fixed_vector(A):
        raise PreconditionError("dobrushin_seminorm needs rows summing to 1")
    best = Fraction(0)
    for ri, rj in combinations(A.rows, 2):
        s = sum((abs(a - b) for a, b in zip(ri, rj)), Fraction(0))
        if s > best:
            best = s
    return best / 2


@dataclass(frozen=True)
class SwitchedSystem:
    """A validated set of matrices; switching words index into ``matrices`` from 0."""

    matrices: tuple[RationalMatrix, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"A{i}" for i in range(len(self.matrices))))

    @property
    def n(self) -> int:
        return self.matrices[0].n

    @property
    def m(self) -> int:
        return len(self.matrices)

    def word_product(self, word: Sequence[int]) -> RationalMatrix:
        """``A_{w[k-1]} ... A_{w[0]}``: the first letter acts first."""
        prod = RationalMatrix.identity(self.n)
        for i in word:
            prod = self.matrices[i] @ prod
        return prod


def validate_system(
    matrices: Sequence[RationalMatrix], labels: Sequence[str] | None = None
) -> SwitchedSystem:
    """Check the standing assumptions and wrap the matrices in a SwitchedSystem.

    Raises DimensionError, FixedVectorViolation or AssumptionViolation for the
    first offending matrix.
    """
    if len(matrices) == 0:
        raise DimensionError("a switched system needs at least one matrix")
    n = matrices[0].n
    if n < 2:
        raise DimensionError("dimension must be at least 2")
    for i, A in enumerate(matrices):
        if A.n != n:
            raise DimensionError(f"matrix {i} is {A.n}x{A.n}, expected {n}x{n}")
    if labels is not None and len(labels) != len(matrices):
        raise DimensionError(f"{len(labels)} labels for {len(matrices)} matrices")
    for i, A in enumerate(matrices):
        if not check_fixed_vector(A):
            sums = ", ".join(str(s) for s in A.row_sums())
            raise FixedVectorViolation(i, f"rows must sum to 1 (row sums: {sums})")
        delta = dobrushin_seminorm(A)
        if delta > 1:
            raise AssumptionViolation(i, delta)
    return SwitchedSystem(tuple(matrices), tuple(labels) if labels is not None else ())
