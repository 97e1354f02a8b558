"""Smith normal form against an independent minors-gcd oracle."""

from itertools import combinations
from math import gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from waldkit.snf import cokernel_invariants, group_signature, smith_normal_form


def dense_to_triplets(rows):
    out = []
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                out.append((i, j, v))
    return out


def minors_gcd_invariants(rows):
    """Invariant factors via Fitting ideals: d_k = gcd of all k x k minors."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    dets = {0: 1}
    k = 1
    while k <= min(nr, nc):
        g = 0
        for rsel in combinations(range(nr), k):
            for csel in combinations(range(nc), k):
                sub = [[rows[i][j] for j in csel] for i in rsel]
                g = gcd(g, det(sub))
        dets[k] = abs(g)
        if dets[k] == 0:
            break
        k += 1
    out = []
    k = 1
    while k in dets and dets[k]:
        out.append(dets[k] // dets[k - 1])
        k += 1
    return out


def det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * m[0][j] * det(minor)
    return total


def test_known_forms():
    assert smith_normal_form([], 3, 3) == []
    assert smith_normal_form([(0, 0, 1), (1, 1, 1)], 2, 2) == [1, 1]
    # diag(2, 3) has SNF diag(1, 6)
    assert smith_normal_form([(0, 0, 2), (1, 1, 3)], 2, 2) == [1, 6]
    assert smith_normal_form([(0, 0, 4), (1, 1, 6)], 2, 2) == [2, 12]


def test_circle_boundary():
    # boundary of a triangle loop: cokernel Z, kernel rank 1
    rows = [[-1, 1, 0], [0, -1, 1], [1, 0, -1]]
    torsion, free = cokernel_invariants(dense_to_triplets(rows), 3, 3)
    assert torsion == [] and free == 1


def test_torsion_presentation():
    # Z^2 / <(2,0),(0,2)> = Z/2 + Z/2
    rows = [[2, 0], [0, 2]]
    torsion, free = cokernel_invariants(dense_to_triplets(rows), 2, 2)
    assert torsion == [2, 2] and free == 0
    assert group_signature(torsion, free) == [2, 2]


@settings(max_examples=120, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(min_value=-6, max_value=6), min_size=1, max_size=4),
        min_size=1,
        max_size=4,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1)
)
def test_matches_minors_oracle(rows):
    got = smith_normal_form(dense_to_triplets(rows), len(rows), len(rows[0]))
    want = minors_gcd_invariants(rows)
    assert got == want
    for a, b in zip(got, got[1:]):
        assert b % a == 0
