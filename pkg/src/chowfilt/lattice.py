"""Exact integer lattice reduction (row Hermite normal form).

Vectors are plain tuples of Python ints.  A reduced basis is a list of
``(pivot_column, row)`` pairs in echelon order with respect to a caller
chosen column priority; reducing a vector against it yields a canonical
representative of the coset ``v + lattice``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

Basis = list[tuple[int, tuple[int, ...]]]


def _axpy(q: int, x: Sequence[int], y: Sequence[int]) -> list[int]:
    # y - q*x
    return [b - q * a for a, b in zip(x, y)]


def hermite_basis(rows: Iterable[Sequence[int]], ncols: int,
                  order: Sequence[int] | None = None) -> Basis:
    """Row-style HNF of the lattice spanned by ``rows``.

    ``order`` lists columns by pivot priority (default: left to right).
    Pivots are positive; entries above a pivot lie in ``[0, pivot)``.
    """
    order = list(range(ncols)) if order is None else list(order)
    work = [list(r) for r in rows if any(r)]
    for r in work:
        if len(r) != ncols:
            raise ValueError("row length does not match ncols")
    basis: list[tuple[int, list[int]]] = []
    for c in order:
        live = [r for r in work if r[c] != 0]
        if not live:
            continue
        rest = [r for r in work if r[c] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                r = _axpy(r[c] // piv[c], piv, r)
                if r[c] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[c] < 0:
            piv = [-x for x in piv]
        basis.append((c, piv))
        work = rest
    # clear entries above later pivots
    for j in range(len(basis)):
        cj, rj = basis[j]
        for i in range(j):
            ci, ri = basis[i]
            q = ri[cj] // rj[cj]
            if q:
                basis[i] = (ci, _axpy(q, rj, ri))
    return [(c, tuple(r)) for c, r in basis]


def reduce_vector(v: Sequence[int], basis: Basis) -> tuple[int, ...]:
    """Canonical representative of ``v`` modulo the lattice."""
    out = list(v)
    for c, row in basis:
        q = out[c] // row[c]
        if q:
            out = _axpy(q, row, out)
    return tuple(out)


def in_lattice(v: Sequence[int], basis: Basis) -> bool:
    return not any(reduce_vector(v, basis))


def smith_decomposition(rows: Sequence[Sequence[int]], ncols: int):
    """Diagonalise the row lattice of ``rows``.

    Returns ``(diag, basis, to_new)``.  In the coordinates ``w = v @ to_new``
    the lattice is ``diag[i] * Z`` in slot ``i`` (``0`` marks a free slot);
    ``basis[i]`` is the new basis vector ``i`` written in old coordinates.
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_decomp

    if not rows:
        eye = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        return [0] * ncols, eye, eye
    m = Matrix([list(r) for r in rows])
    # S = P * M * Q ; row lattice of M maps to row lattice of S under v -> v Q
    s, _p, q = smith_normal_decomp(m, domain=ZZ)
    diag = [0] * ncols
    for i in range(min(s.rows, s.cols)):
        diag[i] = abs(int(s[i, i]))
    qinv = q.inv()
    # old coordinate row vector v = w * Q^-1, so basis vector i is row i of Q^-1
    basis_vectors = [[int(qinv[i, j]) for j in range(ncols)] for i in range(ncols)]
    coords = [[int(q[i, j]) for j in range(ncols)] for i in range(ncols)]
    return diag, basis_vectors, coords
