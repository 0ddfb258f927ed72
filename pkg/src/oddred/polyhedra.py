"""Exact rational linear algebra and V-representation queries."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import InputError, ValidityError
from .simplex import phase_one

GE = ">="
EQ = "="

_INT64_SAFE = 1 << 62


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v)
    raise InputError(f"not an exact rational: {v!r}")


@dataclass(frozen=True)
class Constraint:
    """``coeffs . x  (>= | =)  rhs`` over a fixed edge ordering."""

    edges: tuple
    coeffs: tuple
    rhs: Fraction
    sense: str = GE

    def __post_init__(self):
        if len(self.edges) != len(self.coeffs):
            raise InputError("one coefficient per edge required")
        if self.sense not in (GE, EQ):
            raise InputError(f"unknown sense {self.sense!r}")
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "coeffs", tuple(as_fraction(a) for a in self.coeffs))
        object.__setattr__(self, "rhs", as_fraction(self.rhs))

    @classmethod
    def from_mapping(cls, edges, mapping, rhs, sense=GE):
        return cls(tuple(edges), tuple(mapping.get(tuple(e), 0) for e in edges), rhs, sense)

    def coefficient(self, e) -> Fraction:
        return self.coeffs[self.edges.index(tuple(e))]

    def as_dict(self) -> dict:
        return dict(zip(self.edges, self.coeffs))

    def evaluate(self, x: Sequence) -> Fraction:
        if len(x) != len(self.coeffs):
            raise InputError("dimension mismatch")
        return sum((a * as_fraction(v) for a, v in zip(self.coeffs, x) if a and v), Fraction(0))

    def value_on(self, edge_set) -> Fraction:
        """Left-hand side at the incidence vector of ``edge_set``."""
        idx = {e: i for i, e in enumerate(self.edges)}
        return sum((self.coeffs[idx[tuple(e)]] for e in edge_set), Fraction(0))

    def slack(self, x) -> Fraction:
        return self.evaluate(x) - self.rhs

    def satisfied_by(self, x) -> bool:
        s = self.slack(x)
        return s == 0 if self.sense == EQ else s >= 0

    def is_tight(self, x) -> bool:
        return self.slack(x) == 0

    def scaled(self, factor) -> "Constraint":
        f = as_fraction(factor)
        return Constraint(self.edges, tuple(a * f for a in self.coeffs), self.rhs * f, self.sense)

    def integral(self) -> tuple[tuple[int, ...], int, int]:
        """Integer ``(coeffs, rhs, scale)`` with ``scale * self`` equal to them."""
        scale = lcm(*(a.denominator for a in self.coeffs), self.rhs.denominator)
        return tuple(int(a * scale) for a in self.coeffs), int(self.rhs * scale), scale


@dataclass
class FacetCertificate:
    """A valid constraint plus tight generators whose rank pins the face dimension.

    ``tight_generators`` holds an independent subset of the tight points that
    already attains the rank; ``tight_count`` is the full tight-set size.
    """

    constraint: Constraint
    polytope_dim: int
    face_dim: int
    tight_generators: list
    tight_count: int = 0
    details: dict = field(default_factory=dict)

    @property
    def is_facet(self) -> bool:
        return self.face_dim == self.polytope_dim - 1


@dataclass(frozen=True)
class Inside:
    weights: dict  # generator index -> positive Fraction


@dataclass(frozen=True)
class Outside:
    separator: Constraint  # valid for every generator, violated by the query point


def _check_dims(vectors) -> int:
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise InputError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop() if dims else 0


def integer_rows(vectors) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    rows = []
    for v in vectors:
        fr = [as_fraction(a) for a in v]
        s = lcm(*(a.denominator for a in fr)) if fr else 1
        rows.append([int(a * s) for a in fr])
    return rows


def rank_of_int_matrix(mat) -> tuple[int, list[int]]:
    """Exact rank and pivot rows of an integer matrix (list of lists or ndarray)."""
    if isinstance(mat, np.ndarray):
        if mat.size == 0:
            return 0, []
        arr = np.ascontiguousarray(mat, dtype=np.int64)
        try:
            return kernels.bareiss_rank(arr)
        except OverflowError:
            return kernels.python_backend.bareiss_rank(mat)
    if not mat or not mat[0]:
        return 0, []
    if max(abs(a) for row in mat for a in row) < _INT64_SAFE:
        try:
            return kernels.bareiss_rank(np.array(mat, dtype=np.int64))
        except OverflowError:
            pass
    return kernels.python_backend.bareiss_rank(mat)


def rank(vectors) -> int:
    """Rank over the rationals via fraction-free elimination."""
    vectors = list(vectors)
    _check_dims(vectors)
    if not vectors:
        return 0
    return rank_of_int_matrix(integer_rows(vectors))[0]


def affine_dimension(points) -> int:
    """Dimension of the affine hull (homogenized rank minus one)."""
    points = list(points)
    if not points:
        raise InputError("affine_dimension of an empty point set")
    _check_dims(points)
    return rank([list(p) + [1] for p in points]) - 1


def affine_dimension_int(mat: np.ndarray) -> int:
    """Affine dimension of the rows of an integer matrix."""
    if mat.shape[0] == 0:
        raise InputError("affine_dimension of an empty point set")
    ones = np.ones((mat.shape[0], 1), dtype=np.int64)
    return rank_of_int_matrix(np.hstack([mat.astype(np.int64), ones]))[0] - 1


def conv_membership(generators, x, edges: Optional[tuple] = None):
    """Exact decision of ``x in conv(generators)``.

    Returns ``Inside`` with convex weights, or ``Outside`` with a separating
    constraint ``w . v >= r`` valid on every generator and violated by ``x``.
    ``edges`` only labels the separator's coordinates.
    """
    gens = [[as_fraction(a) for a in g] for g in generators]
    if not gens:
        raise InputError("conv_membership needs at least one generator")
    d = _check_dims(gens + [list(x)])
    x = [as_fraction(a) for a in x]
    A = [[g[i] for g in gens] for i in range(d)] + [[Fraction(1)] * len(gens)]
    b = x + [Fraction(1)]
    status, sol = phase_one(A, b)
    if edges is None:
        edges = tuple((i, -1) for i in range(d))
    if status == "feasible":
        weights = {j: w for j, w in enumerate(sol) if w}
        for i in range(d):
            if sum((w * gens[j][i] for j, w in weights.items()), Fraction(0)) != x[i]:
                raise AssertionError("simplex weights do not reconstruct x")
        if sum(weights.values()) != 1 or any(w < 0 for w in weights.values()):
            raise AssertionError("simplex weights are not convex")
        return Inside(weights)
    # Farkas: y^T [g;1] <= 0 for all g, y^T [x;1] > 0; separator is -y
    w = [-sol[i] for i in range(d)]
    rhs = sol[d]
    scale = lcm(*(a.denominator for a in w + [rhs]))
    w = [a * scale for a in w]
    rhs = rhs * scale
    g = 0
    for a in w + [rhs]:
        g = gcd(g, int(a))
    if g > 1:
        w = [a / g for a in w]
        rhs = rhs / g
    sep = Constraint(tuple(edges), tuple(w), rhs, GE)
    if not all(sep.evaluate(gv) >= sep.rhs for gv in gens) or sep.evaluate(x) >= sep.rhs:
        raise AssertionError("Farkas certificate does not separate")
    return Outside(sep)


def tight_set(generators, c: Constraint) -> list:
    """Generators at which ``c`` holds with equality (validity checked first)."""
    if c.sense != GE:
        raise InputError("tight_set needs a >= constraint")
    generators = list(generators)
    values = [c.evaluate(g) for g in generators]
    for i, (g, v) in enumerate(zip(generators, values)):
        if v < c.rhs:
            raise ValidityError(f"generator {i} violates the constraint", witness=g, index=i)
    return [g for g, v in zip(generators, values) if v == c.rhs]
