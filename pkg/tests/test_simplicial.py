"""Constructors, operators, homology, and cotensors on small complexes."""

from itertools import product as iproduct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waldkit.simplicial import (
    SimplicialMap,
    TruncatedSimplicialSet,
    basic_complex,
    constant_bisimplicial,
    cotensor_into_coskeletal,
    diagonal,
    eilenberg_zilber_report,
    enc,
    external_product,
    homology,
    monotone_maps,
    product,
    pullback,
    validate_simplicial_identities,
)


def count_monotone(n, m):
    # independent oracle: monotone sequences of length n+1 with values in [0, m]
    return sum(
        1
        for t in iproduct(range(m + 1), repeat=n + 1)
        if all(a <= b for a, b in zip(t, t[1:]))
    )


def test_standard_simplex_level_sizes():
    X = basic_complex("standard", 1, trunc_dim=3)
    assert [len(X.simplices(m)) for m in range(4)] == [
        count_monotone(m, 1) for m in range(4)
    ]
    assert [len(X.simplices(m)) for m in range(4)] == [2, 3, 4, 5]
    assert validate_simplicial_identities(X)["ok"]


def test_boundary_has_no_high_nondegenerates():
    X = basic_complex("boundary", 2, trunc_dim=4)
    assert len(X.nondegenerate(0)) == 3
    assert len(X.nondegenerate(1)) == 3
    for m in (2, 3, 4):
        assert X.nondegenerate(m) == ()
    H = homology(X, 2)
    assert H[0] == [0] and H[1] == [0] and H[2] == []


def test_interval_groupoid_counts():
    # oracle: a functor [n] -> (two-object contractible groupoid) is any
    # sequence of n+1 objects, since all homs are singletons
    oracle = [len(list(iproduct((0, 1), repeat=m + 1))) for m in range(4)]
    X = basic_complex("interval_groupoid", 1, trunc_dim=3)
    assert [len(X.simplices(m)) for m in range(4)] == oracle == [2, 4, 8, 16]
    assert X.coskeletal_bound == 2
    assert validate_simplicial_identities(X)["ok"]


def test_horn_requires_index_and_range():
    with pytest.raises(ValueError):
        basic_complex("horn", 2)
    with pytest.raises(ValueError):
        basic_complex("horn", 2, k=5)
    X = basic_complex("horn", 2, k=1, trunc_dim=2)
    assert len(X.nondegenerate(1)) == 2  # the two faces adjacent to vertex 1
    assert validate_simplicial_identities(X)["ok"]


def test_product_unit_law():
    X = basic_complex("boundary", 2, trunc_dim=3)
    pt = basic_complex("standard", 0, trunc_dim=3)
    prod, _, pr2 = product(pt, X)
    assert pr2.validate()["ok"]
    for m in range(4):
        assert len(prod.simplices(m)) == len(X.simplices(m))
    HX = homology(X, 1)
    HP = homology(prod, 1)
    assert HX[1] == HP[1] == [0]


def test_product_square_counts():
    # oracle: level m of Delta[1] x Delta[1] is (pairs of monotone [m]->[1])
    D1 = basic_complex("standard", 1, trunc_dim=3)
    prod, _, _ = product(D1, D1)
    for m in range(4):
        assert len(prod.simplices(m)) == count_monotone(m, 1) ** 2
    assert len(prod.simplices(1)) == 9
    assert len(prod.simplices(2)) == 16
    assert validate_simplicial_identities(prod)["ok"]
    assert eilenberg_zilber_report(prod)["ok"]


def test_pullback_of_identities():
    X = basic_complex("standard", 2, trunc_dim=3)
    idX = SimplicialMap.identity(X)
    pb, p1, _ = pullback(idX, idX)
    for m in range(4):
        assert len(pb.simplices(m)) == len(X.simplices(m))
    assert p1.validate()["ok"]


def test_pullback_along_constant_map():
    # fiber of a constant map at v is the levelwise preimage of v's degeneracies
    X = basic_complex("boundary", 2, trunc_dim=3)
    pt = basic_complex("standard", 0, trunc_dim=3)
    v = X.simplices(0)[0]
    const = SimplicialMap(
        X,
        X,
        {
            (m, x): X.act(0, v, tuple([0] * (m + 1)))
            for m in range(4)
            for x in X.simplices(m)
        },
    )
    incl = SimplicialMap(
        pt,
        X,
        {
            (m, p): X.act(0, v, tuple([0] * (m + 1)))
            for m in range(4)
            for p in pt.simplices(m)
        },
    )
    pb, _, _ = pullback(const, incl)
    for m in range(4):
        assert len(pb.simplices(m)) == len(X.simplices(m))  # const hits everything


def test_validator_reports_corruption():
    X = basic_complex("standard", 2, trunc_dim=2)
    top = X.simplices(2)[-1]
    bad_faces = dict(X.faces)
    bad_faces[(2, top, 0)] = X.simplices(1)[0]
    Y = TruncatedSimplicialSet(2, X.levels, bad_faces, X.degeneracies)
    report = validate_simplicial_identities(Y)
    assert not report["ok"]
    assert any("level 2" in v for v in report["violations"])


def test_homology_of_simplices_and_interval_groupoid():
    for n in (1, 2, 3):
        X = basic_complex("standard", n, trunc_dim=4)
        H = homology(X, 3)
        assert H[0] == [0]
        for d in (1, 2, 3):
            assert H[d] == []
    J = basic_complex("interval_groupoid", 1, trunc_dim=4)
    H = homology(J, 3)
    assert H[0] == [0] and H[1] == [] and H[2] == [] and H[3] == []
    assert H[4] == "unknown (truncated)"


def test_homology_degree_guard():
    X = basic_complex("standard", 1, trunc_dim=2)
    with pytest.raises(ValueError):
        homology(X, 2)


def test_eilenberg_zilber_on_constructors():
    for X in (
        basic_complex("standard", 2, trunc_dim=3),
        basic_complex("boundary", 2, trunc_dim=3),
        basic_complex("interval_groupoid", 1, trunc_dim=3),
    ):
        assert eilenberg_zilber_report(X)["ok"]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_monotone_action_is_functorial(data):
    X = basic_complex("interval_groupoid", 1, trunc_dim=3)
    m = data.draw(st.integers(min_value=0, max_value=3))
    y = data.draw(st.sampled_from(list(X.simplices(m))))
    n = data.draw(st.integers(min_value=0, max_value=3))
    phi = data.draw(st.sampled_from(monotone_maps(n, m)))
    k = data.draw(st.integers(min_value=0, max_value=3))
    psi = data.draw(st.sampled_from(monotone_maps(k, n)))
    composed = tuple(phi[v] for v in psi)
    assert X.act(m, y, composed) == X.act(n, X.act(m, y, phi), psi)


def test_diagonal_of_constant_is_identity():
    X = basic_complex("boundary", 2, trunc_dim=3)
    B = constant_bisimplicial(X, 3)
    assert B.validate()["ok"]
    d = diagonal(B)
    assert d.levels == X.levels
    assert d.faces == X.faces


def test_diagonal_of_external_product_is_product():
    D1 = basic_complex("standard", 1, trunc_dim=2)
    B = external_product(D1, D1)
    assert B.validate()["ok"]
    d = diagonal(B)
    prod, _, _ = product(D1, D1)
    assert [len(d.simplices(m)) for m in range(3)] == [
        len(prod.simplices(m)) for m in range(3)
    ]
    assert d.levels == prod.levels and d.faces == prod.faces


def test_json_round_trip():
    X = basic_complex("interval_groupoid", 1, trunc_dim=2)
    doc = X.to_json()
    Y = TruncatedSimplicialSet.from_json(doc)
    assert X == Y and X.dumps() == Y.dumps()


def test_cotensor_by_point_is_identity():
    X = basic_complex("standard", 2, trunc_dim=3)
    pt = basic_complex("standard", 0, trunc_dim=3)
    cot = cotensor_into_coskeletal(pt, X, up_to=3)
    for m in range(4):
        assert len(cot.simplices(m)) == len(X.simplices(m))
    assert validate_simplicial_identities(cot)["ok"]


def test_cotensor_interval_counts_edges():
    # level 0 of X^{Delta[1]} is the edge set of X
    X = basic_complex("standard", 2, trunc_dim=3)
    D1 = basic_complex("standard", 1, trunc_dim=3)
    cot = cotensor_into_coskeletal(D1, X, up_to=1)
    assert len(cot.simplices(0)) == len(X.simplices(1))
