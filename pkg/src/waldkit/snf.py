"""Exact integer Smith normal form and abelian group presentations.

Matrices are exchanged as sparse triplet lists ``[(row, col, value), ...]``
over Python's arbitrary-precision integers, so no overflow handling is
needed beyond what the interpreter already provides.  The reduction is the
classical row/column elimination with a smallest-pivot heuristic to keep
entry growth down; the matrices arising from desk-scale boundary maps and
K-group presentations are tiny, so simplicity wins over asymptotics.
"""

from __future__ import annotations


def smith_normal_form(triplets, nrows, ncols):
    """Return the nonzero diagonal entries of the Smith normal form.

    The result is a list ``[d1, d2, ...]`` with ``d1 | d2 | ...`` and every
    ``di > 0``.  Zero diagonal entries are omitted; ``len(result)`` is the
    rank of the matrix.
    """
    a = {}
    for i, j, v in triplets:
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise ValueError(f"triplet ({i},{j}) outside {nrows}x{ncols}")
        if v:
            w = a.get((i, j), 0) + v
            if w:
                a[(i, j)] = w
            elif (i, j) in a:
                del a[(i, j)]
    diag = []
    while a:
        pi, pj = min(a, key=lambda ij: (abs(a[ij]), ij))
        while True:
            off_col = [i for (i, j) in a if j == pj and i != pi]
            if off_col:
                i = off_col[0]
                q = a[(i, pj)] // a[(pi, pj)]
                if q:
                    for jj in [j for (r, j) in a if r == pi]:
                        _add(a, (i, jj), -q * a[(pi, jj)])
                if (i, pj) in a:
                    # nonzero remainder strictly smaller than the pivot
                    _swap_rows(a, pi, i)
                continue
            off_row = [j for (i, j) in a if i == pi and j != pj]
            if off_row:
                j = off_row[0]
                q = a[(pi, j)] // a[(pi, pj)]
                if q:
                    for ii in [i for (i, c) in a if c == pj]:
                        _add(a, (ii, j), -q * a[(ii, pj)])
                if (pi, j) in a:
                    _swap_cols(a, pj, j)
                continue
            break
        diag.append(abs(a.pop((pi, pj))))
    # enforce the divisibility chain
    diag.sort()
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            if diag[i] and diag[j] % diag[i]:
                g = _gcd(diag[i], diag[j])
                diag[i], diag[j] = g, diag[i] // g * diag[j]
    diag.sort()
    return diag


def _add(a, key, v):
    if not v:
        return
    w = a.get(key, 0) + v
    if w:
        a[key] = w
    elif key in a:
        del a[key]


def _swap_rows(a, r1, r2):
    moved = {}
    for (i, j) in list(a):
        if i in (r1, r2):
            moved[(r1 + r2 - i, j)] = a.pop((i, j))
    a.update(moved)


def _swap_cols(a, c1, c2):
    moved = {}
    for (i, j) in list(a):
        if j in (c1, c2):
            moved[(i, c1 + c2 - j)] = a.pop((i, j))
    a.update(moved)


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return x


def cokernel_invariants(triplets, nrows, ncols):
    """Invariant factors of Z^ncols / (row space of the matrix).

    Returns ``(torsion, free_rank)`` where ``torsion`` is the sorted list of
    invariant factors > 1 and ``free_rank`` the number of Z summands.
    """
    diag = smith_normal_form(triplets, nrows, ncols)
    rank = len(diag)
    torsion = sorted(d for d in diag if d > 1)
    return torsion, ncols - rank


def group_signature(torsion, free_rank):
    """Canonical encoding: torsion factors then one 0 per Z summand."""
    return list(torsion) + [0] * free_rank
