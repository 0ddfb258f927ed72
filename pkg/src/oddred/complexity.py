"""Matrix view of doubled-graph constraints, mu/lambda moves and coefficient complexity."""
from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InputError
from .oddcycle import CInducedSpec
from .polyhedra import GE, Constraint, as_fraction
from .transfer import TransferContext, tight_matchings


@dataclass(frozen=True)
class CoefficientMatrix:
    """Rows are ``V+`` and columns ``V-``, both in vertex order.

    ``support[u][v]`` is False where ``{u+, v-}`` is not an edge; such
    entries are stored as 0 and ignored by every count.
    """

    n: int
    entries: tuple
    support: Optional[tuple] = None

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(a) for a in r) for r in self.entries)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise InputError(f"expected a {self.n}x{self.n} matrix")
        object.__setattr__(self, "entries", rows)
        sup = self.support
        if sup is None:
            sup = tuple(tuple(True for _ in range(self.n)) for _ in range(self.n))
        object.__setattr__(self, "support", tuple(tuple(bool(b) for b in r) for r in sup))

    def __getitem__(self, uv) -> Fraction:
        u, v = uv
        return self.entries[u][v]

    def values(self, include_diagonal: bool = True) -> list:
        return [self.entries[u][v] for u in range(self.n) for v in range(self.n)
                if self.support[u][v] and (include_diagonal or u != v)]

    @property
    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.values())

    def as_int_array(self) -> np.ndarray:
        if not self.is_integral:
            raise InputError("matrix has non-integral entries")
        return np.array([[int(a) for a in r] for r in self.entries], dtype=np.int64)


@dataclass(frozen=True)
class MuLambda:
    """``a(u, v) -> mu * a(u, v) + lam[u+] + lam[v-]``; ``lam`` has ``2n`` entries, ``v-`` at ``n + v``."""

    mu: Fraction
    lam: tuple

    def __post_init__(self):
        mu = as_fraction(self.mu)
        if mu == 0:
            raise InputError("mu must be nonzero")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "lam", tuple(as_fraction(a) for a in self.lam))

    @classmethod
    def identity(cls, n: int) -> "MuLambda":
        return cls(Fraction(1), (0,) * (2 * n))

    @property
    def n(self) -> int:
        return len(self.lam) // 2


def _pair(ctx: TransferContext, f):
    u, w = f
    if not (0 <= u < ctx.n <= w < 2 * ctx.n):
        raise InputError(f"edge {f} does not join V+ to V-")
    return u, w - ctx.n


def to_matrix(c: Constraint, ctx: TransferContext) -> CoefficientMatrix:
    n = ctx.n
    if set(c.edges) - set(ctx.doubled.edges):
        raise InputError("constraint is not over the doubled graph")
    entries = [[Fraction(0)] * n for _ in range(n)]
    support = [[False] * n for _ in range(n)]
    for f in ctx.doubled.edges:
        u, v = _pair(ctx, f)
        support[u][v] = True
    for f, a in zip(c.edges, c.coeffs):
        u, v = _pair(ctx, f)
        entries[u][v] = a
    return CoefficientMatrix(n, tuple(map(tuple, entries)), tuple(map(tuple, support)))


def from_matrix(m: CoefficientMatrix, ctx: TransferContext, rhs) -> Constraint:
    coeffs = []
    for f in ctx.doubled.edges:
        u, v = _pair(ctx, f)
        coeffs.append(m[u, v])
    for u in range(m.n):
        for v in range(m.n):
            if not m.support[u][v] and m[u, v] != 0:
                raise InputError(f"nonzero entry at non-edge ({u}+, {v}-)")
    return Constraint(ctx.doubled.edges, tuple(coeffs), rhs, GE)


def apply_mu_lambda(m: CoefficientMatrix, t: MuLambda) -> CoefficientMatrix:
    n = m.n
    if t.n != n:
        raise InputError("lambda has the wrong length")
    lam = t.lam
    entries = tuple(
        tuple(t.mu * m[u, v] + lam[u] + lam[n + v] if m.support[u][v] else Fraction(0) for v in range(n))
        for u in range(n)
    )
    return CoefficientMatrix(n, entries, m.support)


def apply_to_constraint(c: Constraint, t: MuLambda, ctx: TransferContext) -> Constraint:
    """The equivalent constraint; every perfect matching meets each vertex once,
    so the right-hand side shifts by the sum of ``lam``."""
    if t.mu < 0:
        raise InputError("a negative mu reverses the inequality")
    m = apply_mu_lambda(to_matrix(c, ctx), t)
    return from_matrix(m, ctx, t.mu * c.rhs + sum(t.lam, Fraction(0)))


def alternating_sum(m: CoefficientMatrix, seq: Sequence[int]) -> Fraction:
    """Cyclic ``sum m(u_i+, u_{i+1}-) - sum m(u_i+, u_i-)``."""
    seq = list(seq)
    if len(seq) < 2:
        raise InputError("need at least two vertices")
    if any(not 0 <= u < m.n for u in seq):
        raise InputError("vertex out of range")
    t = len(seq)
    fwd = sum((m[seq[i], seq[(i + 1) % t]] for i in range(t)), Fraction(0))
    diag = sum((m[u, u] for u in seq), Fraction(0))
    return fwd - diag


def count_distinct(m: CoefficientMatrix, include_diagonal: bool = True) -> int:
    return len(set(m.values(include_diagonal)))


@dataclass(frozen=True)
class ComplexityReport:
    n: int
    max_abs: int
    distinct_count: int
    distinct_off_diagonal: int
    max_abs_ok: bool
    distinct_ok: bool

    @property
    def lower_bounds_ok(self) -> bool:
        return self.max_abs_ok and self.distinct_ok

    def as_dict(self) -> dict:
        return {"n": self.n, "max_abs": self.max_abs, "distinct_count": self.distinct_count,
                "distinct_off_diagonal": self.distinct_off_diagonal, "max_abs_ok": self.max_abs_ok,
                "distinct_ok": self.distinct_ok, "lower_bounds_ok": self.lower_bounds_ok}


def bounds_hold(max_abs: int, distinct: int, n: int, max_div: int = 2, distinct_div: int = 2) -> tuple[bool, bool]:
    """Exact integer tests of ``max_abs >= (n-4)/max_div`` and ``distinct >= sqrt((n-1)/distinct_div)``."""
    return max_div * max_abs >= n - 4, distinct_div * distinct * distinct >= n - 1


def check_complexity_bounds(m: CoefficientMatrix, n: int) -> ComplexityReport:
    if not m.is_integral:
        raise InputError("complexity bounds apply to integral matrices")
    vals = m.values(True)
    max_abs = int(max((abs(a) for a in vals), default=0))
    distinct = len(set(vals))
    ok_max, ok_distinct = bounds_hold(max_abs, distinct, n)
    return ComplexityReport(n, max_abs, distinct, count_distinct(m, False), ok_max, ok_distinct)


def random_integral_image(a: np.ndarray, rng: np.random.Generator, spread: int,
                          mu_range: int = 5, base_lambda: Optional[np.ndarray] = None) -> np.ndarray:
    """``mu * a + alpha_u + beta_v`` with nonzero integer ``mu`` and integer shifts.

    Any integral image has this form up to a constant moved between rows
    and columns, which cancels.
    """
    n = a.shape[0]
    mu = int(rng.integers(1, mu_range + 1)) * (1 if rng.random() < 0.5 else -1)
    alpha = rng.integers(-spread, spread + 1, size=n)
    beta = rng.integers(-spread, spread + 1, size=n)
    if base_lambda is not None:
        alpha = alpha + mu * base_lambda[:n]
        beta = beta + mu * base_lambda[n:]
    return mu * a + alpha[:, None] + beta[None, :]


def integer_ceil_root(x: int, k: int) -> int:
    """Smallest ``m >= 0`` with ``m**k >= x``."""
    if x <= 0:
        return 0
    m = max(0, int(round(x ** (1.0 / k))) - 2)
    while m ** k < x:
        m += 1
    return m


def root_parameters(n: int) -> tuple[int, int]:
    """``(ceil(n^(1/3)), ceil(n^(2/3)))`` in exact integer arithmetic."""
    return integer_ceil_root(n, 3), integer_ceil_root(n * n, 3)


def f_value(j: int, m1: int, m2: int) -> int:
    if j < 0 or m1 < 1 or m2 < 1:
        raise InputError("need j >= 0 and m1, m2 >= 1")
    r = j % m2
    return r + m1 - ((r + j) % m1)


def f_properties(j: int, m1: int, m2: int) -> tuple[bool, bool, bool]:
    f = f_value(j, m1, m2)
    return 0 <= f <= m1 + m2, (f + j) % m1 == 0, (f - j) % m2 <= m1


def interleaved_position(spec: CInducedSpec, v: int) -> int:
    """1-based position of ``v`` in the order ``v_1, v_3, ..., v_{2k+1}, v_2, ..., v_{2k}``.

    In that order the inner coefficient between positions ``p`` and ``q``
    is ``|2k+1 - 2|p - q||``.
    """
    i = spec.position[v]
    return (i + 1) // 2 if i % 2 else spec.k + 1 + i // 2


def build_low_complexity_lambda(n: int, spec: Optional[CInducedSpec] = None) -> MuLambda:
    """``mu = 1``; ``lam`` is 0 on ``s, t`` and ``+-2 f_p`` on cycle vertices."""
    if n < 5 or n % 2 == 0:
        raise InputError("need odd n >= 5")
    if spec is None:
        spec = CInducedSpec.standard(n)
    if spec.n != n:
        raise InputError("spec is for a different n")
    m1, m2 = root_parameters(n)
    lam = [0] * (2 * n)
    for v in spec.cycle:
        f = f_value(interleaved_position(spec, v), m1, m2)
        lam[v] = 2 * f
        lam[n + v] = -2 * f
    return MuLambda(Fraction(1), tuple(lam))


def bound_expression(n: int) -> Fraction:
    """Upper bound on the distinct entries of the low-complexity representation."""
    m1, m2 = root_parameters(n)
    s = n + m1 + m2
    return (2 + 2 * (m1 + m2 + 1) + (Fraction(2 * s, m1) + 1)
            + Fraction(2 * s, m2) * (2 * m1 + 1))


def same_face_check(original: Constraint, transformed: Constraint, ctx: TransferContext) -> bool:
    return tight_matchings(ctx, original) == tight_matchings(ctx, transformed)


def search(m: CoefficientMatrix, bound: Optional[int] = None, iterations: int = 2000,
           seed: int = 0) -> dict:
    """Greedy local search over integer ``lam`` in ``[-bound, bound]`` (``mu = 1``).

    Exploratory only: the result is an empirical minimum of the distinct-entry
    count, with no claim of optimality.
    """
    a = m.as_int_array()
    n = m.n
    bound = n if bound is None else bound
    sup = np.array(m.support, dtype=bool)
    rng = random.Random(seed)
    lam = [0] * (2 * n)

    def score(vec):
        img = a + np.array(vec[:n])[:, None] + np.array(vec[n:])[None, :]
        return len(np.unique(img[sup]))

    best = score(lam)
    for _ in range(iterations):
        i = rng.randrange(2 * n)
        old = lam[i]
        lam[i] = rng.randint(-bound, bound)
        s = score(lam)
        if s <= best:
            best = s
        else:
            lam[i] = old
    return {"distinct": best, "lambda": lam, "bound": bound, "iterations": iterations,
            "seed": seed, "optimal": False}


def matrix_to_csv(m: CoefficientMatrix, labels: Optional[Sequence[str]] = None) -> str:
    """Rows ``v+`` and columns ``v-`` in vertex order; non-edges left blank."""
    labels = [str(v) for v in range(m.n)] if labels is None else list(labels)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + [f"{lab}-" for lab in labels])
    for u in range(m.n):
        w.writerow([f"{labels[u]}+"] + [str(m[u, v]) if m.support[u][v] else "" for v in range(m.n)])
    return buf.getvalue()
