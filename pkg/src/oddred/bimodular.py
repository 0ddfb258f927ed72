"""Bimodular integer formulation of odd-red perfect matching.

Rows are the vertex degree equations followed by the parity row
``x(R) - 2y = 1``; columns are the edges followed by ``y``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import InputError, SizeLimitError
from .graphs import RedBlueGraph
from .polyhedra import GE, Constraint, as_fraction, rank_of_int_matrix

MAX_MINOR_COLUMNS = 20
ALLOWED_MINORS = frozenset({-2, 0, 2})


@dataclass(frozen=True)
class BimodularSystem:
    matrix: tuple  # rows of ints
    rhs: tuple
    row_tags: tuple
    columns: tuple  # edges, then "y"

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), len(self.columns)

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64).reshape(self.shape)

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix],
            "rhs": list(self.rhs),
            "row_tags": list(self.row_tags),
            "columns": [c if c == "y" else f"{c[0]}-{c[1]}" for c in self.columns],
        }

    @classmethod
    def from_json(cls, data) -> "BimodularSystem":
        from .serialize import parse_edge_key

        try:
            cols = tuple("y" if c == "y" else parse_edge_key(c) for c in data["columns"])
            return cls(tuple(tuple(int(a) for a in r) for r in data["matrix"]), tuple(int(b) for b in data["rhs"]),
                       tuple(data["row_tags"]), cols)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed system JSON: {exc}") from exc


def build_bimodular_system(h: RedBlueGraph) -> BimodularSystem:
    rows = []
    tags = []
    for v in range(h.n):
        rows.append(tuple(int(v in e) for e in h.edges) + (0,))
        tags.append(f"degree:{v}")
    rows.append(tuple(h.red_vector) + (-2,))
    tags.append("parity")
    return BimodularSystem(tuple(rows), (1,) * (h.n + 1), tuple(tags), tuple(h.edges) + ("y",))


@dataclass(frozen=True)
class BimodularityReport:
    rank: int
    values: tuple  # sorted distinct maximal minors
    violations: tuple  # values outside {-2, 0, 2}
    y_column_values: tuple = ()  # maximal minors through the parity row and the y column

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def y_column_ok(self) -> bool:
        return set(self.y_column_values) <= ALLOWED_MINORS

    def as_dict(self) -> dict:
        return {"rank": self.rank, "values": list(self.values), "violations": list(self.violations),
                "ok": self.ok, "y_column_values": list(self.y_column_values), "y_column_ok": self.y_column_ok}


def check_bimodularity(s: BimodularSystem, size_cap: int = MAX_MINOR_COLUMNS) -> BimodularityReport:
    """All ``r x r`` minors with ``r`` the rank of the system, by exhaustive enumeration."""
    rows, cols = s.shape
    if cols > size_cap:
        raise SizeLimitError(f"{cols} columns exceed the subdeterminant cap of {size_cap}")
    a = s.as_array()
    r, _ = rank_of_int_matrix(a)
    values = sorted(int(v) for v in kernels.minor_values(a, r))
    # expanding along the y column leaves -2 times a minor of the degree rows
    inner = kernels.minor_values(np.ascontiguousarray(a[:-1, :-1]), r - 1) if r >= 1 else set()
    y_vals = sorted({2 * int(v) for v in inner} | {-2 * int(v) for v in inner})
    return BimodularityReport(r, tuple(values), tuple(v for v in values if v not in ALLOWED_MINORS), tuple(y_vals))


def lift_point(x: Sequence, h: RedBlueGraph) -> tuple:
    """Append ``y = (x(R) - 1) / 2``."""
    if len(x) != len(h.edges):
        raise InputError("point must have one entry per edge")
    x = tuple(as_fraction(v) for v in x)
    xr = sum((v for v, r in zip(x, h.red_vector) if r), Fraction(0))
    return x + ((xr - 1) / 2,)


def translate_facet(a: Sequence, c, b, h: RedBlueGraph) -> Constraint:
    """``a.x + c y >= b`` on the lift becomes ``(a + c/2 chi^R).x >= b + c/2``."""
    if len(a) != len(h.edges):
        raise InputError("coefficient vector must have one entry per edge")
    c = as_fraction(c)
    coeffs = tuple(as_fraction(ai) + (c / 2 if r else 0) for ai, r in zip(a, h.red_vector))
    return Constraint(h.edges, coeffs, as_fraction(b) + c / 2, GE)


def bimodular_representation(image: np.ndarray, red: np.ndarray, c: int) -> Optional[np.ndarray]:
    """``a = image - (c/2) chi^R`` when integral, else None.

    ``image`` holds a representation of a facet of the matching polytope;
    ``(a, c)`` then represents the lifted facet of the bimodular polytope.
    """
    twice = 2 * image - c * red
    if (twice % 2).any():
        return None
    return twice // 2


def bimodular_bounds_hold(a_values: np.ndarray, n: int) -> tuple[bool, bool]:
    """``max |a_e| >= (n-4)/3`` and ``#distinct >= sqrt((n-1)/8)``, exactly."""
    max_abs = int(np.abs(a_values).max()) if a_values.size else 0
    distinct = len(np.unique(a_values))
    return 3 * max_abs >= n - 4, 8 * distinct * distinct >= n - 1


def integral_solutions(s: BimodularSystem, h: RedBlueGraph) -> list[tuple]:
    """Nonnegative integral solutions, by enumerating 0/1 edge vectors (desk scale)."""
    m = len(h.edges)
    if m > 24:
        raise SizeLimitError("too many edges to enumerate 0/1 vectors")
    a = s.as_array()
    out = []
    for mask in range(1 << m):
        x = [(mask >> i) & 1 for i in range(m)]
        xr = sum(xi for xi, r in zip(x, h.red_vector) if r)
        if xr % 2 == 0:
            continue
        vec = np.array(x + [(xr - 1) // 2], dtype=np.int64)
        if (a @ vec == np.array(s.rhs)).all():
            out.append(tuple(int(v) for v in vec))
    return out
