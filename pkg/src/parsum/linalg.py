"""Exact linear algebra over Q and Q(x), on top of sympy's DomainMatrix."""

from __future__ import annotations

from sympy.polys.matrices import DomainMatrix

from .scalar import QQ, K

KD = K.to_domain()


def matrix(rows, domain=KD) -> DomainMatrix:
    rows = [[domain.convert(v) for v in row] for row in rows]
    return DomainMatrix(rows, (len(rows), len(rows[0]) if rows else 0), domain)


def entries(M: DomainMatrix) -> list[list]:
    return M.to_list()


def identity(n: int, domain=KD) -> DomainMatrix:
    return DomainMatrix.eye(n, domain)


def solve_sparse(rows: list[dict[int, object]], rhs: list, ncols: int, domain=QQ) -> dict[int, object] | None:
    """One solution of ``sum_j rows[i][j] * y_j = rhs[i]`` or ``None``.

    Free variables are set to zero. ``rows`` are sparse dicts column -> value.
    """
    data = {}
    for i, (row, b) in enumerate(zip(rows, rhs)):
        r = {j: domain.convert(v) for j, v in row.items() if v}
        if b:
            r[ncols] = domain.convert(b)
        if r:
            data[i] = r
    if not data:
        return {}
    M = DomainMatrix(data, (len(rows), ncols + 1), domain)
    R, pivots = M.rref()
    if pivots and pivots[-1] == ncols:
        return None
    sol = {}
    red = R.to_sdm()
    for i, p in enumerate(pivots):
        v = red.get(i, {}).get(ncols)
        if v:
            sol[p] = v
    return sol


def nullspace(columns: list[list], domain=KD) -> list[list]:
    """Basis of ``{c : sum_k c_k * columns[k] = 0}``."""
    if not columns:
        return []
    m = len(columns[0])
    rows = [[domain.convert(col[i]) for col in columns] for i in range(m)]
    M = DomainMatrix(rows, (m, len(columns)), domain)
    return M.nullspace().to_list()
