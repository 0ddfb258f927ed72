"""Phase-1 rational simplex for ``A z = b, z >= 0`` with Bland's rule.

Everything is ``fractions.Fraction``; no tolerance anywhere.
"""
from fractions import Fraction


def phase_one(A, b):
    """Decide feasibility of ``A z = b, z >= 0``.

    Returns ``("feasible", z)`` with an exact basic solution, or
    ``("infeasible", y)`` with a Farkas vector: ``y^T A <= 0`` columnwise
    and ``y^T b > 0``.
    """
    m = len(A)
    ncols = len(A[0]) if m else 0
    sign = [1 if bi >= 0 else -1 for bi in b]
    width = ncols + m + 1
    T = []
    for i in range(m):
        row = [Fraction(sign[i] * a) for a in A[i]]
        row.extend(Fraction(int(i == j)) for j in range(m))
        row.append(Fraction(sign[i] * b[i]))
        T.append(row)
    # reduced costs of the phase-1 objective (sum of artificials); last entry = -objective
    obj = [Fraction(0)] * width
    for j in range(ncols):
        obj[j] = -sum((T[i][j] for i in range(m)), Fraction(0))
    obj[-1] = -sum((T[i][-1] for i in range(m)), Fraction(0))
    basis = [ncols + i for i in range(m)]

    while True:
        enter = next((j for j in range(width - 1) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen: phase 1 is bounded below by 0
            raise RuntimeError("unbounded phase-1 problem")
        _pivot(T, obj, leave, enter)
        basis[leave] = enter

    if obj[-1] == 0:
        z = [Fraction(0)] * ncols
        for i, j in enumerate(basis):
            if j < ncols:
                z[j] = T[i][-1]
        return "feasible", z
    # y_i = c_i - reduced cost of artificial i, mapped back through the row signs
    y = [(1 - obj[ncols + i]) * sign[i] for i in range(m)]
    return "infeasible", y


def _pivot(T, obj, r, c):
    piv = T[r][c]
    row_r = [v / piv for v in T[r]]
    T[r] = row_r
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            T[i] = [a - f * b for a, b in zip(row, row_r)]
    f = obj[c]
    if f:
        obj[:] = [a - f * b for a, b in zip(obj, row_r)]
