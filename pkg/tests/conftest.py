from __future__ import annotations

from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest

from consensus_faces import RationalMatrix, validate_system

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
DATA = Path(__file__).resolve().parent / "data"

SWAP = [[0, 1], [1, 0]]
AVG = [["1/2", "1/2"], ["1/2", "1/2"]]


def mat(rows) -> RationalMatrix:
    return RationalMatrix.from_rows(rows)


def eye(n: int) -> RationalMatrix:
    return RationalMatrix.identity(n)


def system(*rows_list):
    return validate_system([r if isinstance(r, RationalMatrix) else mat(r) for r in rows_list])


def vertex_seminorm(A: RationalMatrix) -> Fraction:
    """Induced seminorm by brute force: max of ½(max - min) of A x over the sign vertices x."""
    best = Fraction(0)
    for x in product((-1, 1), repeat=A.n):
        y = A.apply([Fraction(c) for c in x])
        best = max(best, (max(y) - min(y)) / 2)
    return best


def active_set_face(x) -> tuple[int, ...] | None:
    """Face of ``P`` from the active facet constraints ½(x_i - x_j) <= 1.

    Returns the signed vector of the face containing ``x`` (not canonicalised),
    or None when no constraint is active.
    """
    n = len(x)
    active = [(i, j) for i in range(n) for j in range(n) if i != j and x[i] - x[j] == 2]
    if not active:
        return None
    v = [0] * n
    for i, j in active:
        v[i], v[j] = 1, -1
    return tuple(v)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})")
