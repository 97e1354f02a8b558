"""Grids, S_n categories, the cofiber-sequence category, and nerves."""

import json

from waldkit.cats import FunctorData
from waldkit.sconstruction import (
    arrow_category,
    certify_grid,
    diagonal_nerve_w,
    e_category,
    e_projections,
    enumerate_grids,
    object_simplicial_set,
    s_n_category,
    s_n_functor,
    simplicial_operator,
    trivial_grid,
    w_subcategory,
    GapGrid,
)
from waldkit.simplicial import homology, validate_simplicial_identities
from waldkit.waldhausen import (
    instance_pointed_sets,
    sub_waldhausen_instance,
    verify_axioms,
    verify_exact_functor,
    _pointed_mor,
    _pointed_parse,
)


def test_arrow_category_counts():
    for n, want in ((0, 1), (2, 6), (3, 10)):
        A = arrow_category(n)
        assert len(A.objects) == want
        assert A.validate()["ok"]


def oracle_cofiber_squares(W):
    """Independent count of certified cofiber sequences in pointed sets.

    A square (m: A >-> C, q: C -> B over *) is a pushout exactly when q
    collapses the image of m to the basepoint and is a bijection elsewhere.
    """
    count = 0
    for m in sorted(W.cofibrations):
        a, _, mim = _pointed_parse(m)
        c_obj = W.cat.tgt[m]
        c = int(c_obj[1:])
        image = set(mim)
        for b_obj in W.cat.objects:
            b = int(b_obj[1:])
            for q in W.cat.hom(c_obj, b_obj):
                _, _, qim = _pointed_parse(q)
                collapses = all(qim[x] == 0 for x in image)
                outside = [qim[x] for x in range(c) if x not in image]
                injective_onto = (
                    len(set(outside)) == len(outside)
                    and set(outside) == set(range(1, b))
                    and 0 not in outside
                )
                if collapses and injective_onto:
                    count += 1
    return count


def test_grid_counts_pointed_two():
    W = instance_pointed_sets(2)
    assert len(enumerate_grids(W, 0)) == 1
    assert len(enumerate_grids(W, 1)) == len(W.cat.objects) == 2
    grids2 = enumerate_grids(W, 2)
    assert len(grids2) == oracle_cofiber_squares(W) == 3


def test_grid_count_matches_e_category():
    W = instance_pointed_sets(3)
    grids2 = enumerate_grids(W, 2)
    E = e_category(W, W, W)
    assert len(grids2) == len(E.cat.objects) == oracle_cofiber_squares(W) == 9


def test_simplicial_operator_identities_on_grids():
    W = instance_pointed_sets(2)
    for g in enumerate_grids(W, 1):
        up = simplicial_operator(("deg", 0), g, W)
        down = simplicial_operator(("face", 0), up, W)
        assert down.key == g.key


def test_face_zero_quotients_and_face_two_forgets():
    W = instance_pointed_sets(2)
    for g in enumerate_grids(W, 2):
        d0 = simplicial_operator(("face", 0), g, W)
        # the d0 image is the 1-grid on the quotient entry B = g(1, 2)
        assert d0.obj[(0, 1)] == g.obj[(1, 2)]
        d2 = simplicial_operator(("face", 2), g, W)
        assert d2.obj[(0, 1)] == g.obj[(0, 1)]


def test_s_n_category_axioms_and_zero():
    W = instance_pointed_sets(2)
    for n in (0, 1, 2):
        Sn = s_n_category(W, n, validate=True)
        rep = verify_axioms(Sn)
        assert rep["ok"], (n, rep)
    S0 = s_n_category(W, 0)
    assert len(S0.cat.objects) == 1


def test_s_one_equivalent_to_base():
    # S_1 C has the 1-grids as objects; the evaluation at (0, 1) is an
    # isomorphism onto C
    W = instance_pointed_sets(2)
    S1 = s_n_category(W, 1)
    assert len(S1.cat.objects) == len(W.cat.objects)
    assert len(S1.cat.morphisms) == len(W.cat.morphisms)


def test_weq_in_s_n_iff_componentwise():
    # a transformation is a weak equivalence iff its top row components are,
    # which at this size is equivalent to all components being weqs
    W = instance_pointed_sets(2)
    S2 = s_n_category(W, 2)
    for mid, (k1, k2, comps) in S2.nt_of.items():
        top_row = all(W.is_weq(comps[(0, j)]) for j in (1, 2))
        assert (mid in S2.weqs) == top_row == all(
            W.is_weq(c) for c in comps.values()
        )


def test_sn_of_s2_matches_s2_of_sn():
    # object sets: s_n(S_2 C) and s_2(S_n C) agree in cardinality
    W = instance_pointed_sets(2)
    S2 = s_n_category(W, 2)
    S1 = s_n_category(W, 1)
    left = enumerate_grids(S2, 1)
    right = enumerate_grids(S1, 2)
    # s_1 S_2 = objects of S_2; s_2 S_1 = cofiber squares of S_1 = E(S_1)
    assert len(left) == len(S2.cat.objects)
    assert len(right) == len(enumerate_grids(W, 2))


def test_object_simplicial_set_validates():
    W = instance_pointed_sets(2)
    X = object_simplicial_set(W, 3)
    assert validate_simplicial_identities(X)["ok"]
    assert len(X.simplices(0)) == 1
    assert len(X.simplices(1)) == len(W.cat.objects)


def test_e_category_point_subobject():
    W = instance_pointed_sets(2)
    Z = sub_waldhausen_instance(W, ["P1"], label="point")
    E = e_category(Z, W, W)
    for e in E.cat.objects:
        a, _, _, _, _ = E.eobj_parts(e)
        assert a == "P1"


def test_e_projections_exact():
    W = instance_pointed_sets(2)
    E = e_category(W, W, W)
    assert verify_axioms(E)["ok"]
    s, mid, q = e_projections(E)
    for F, tgt in ((s, W), (mid, W), (q, W)):
        rep = verify_exact_functor(F, E, tgt)
        assert rep["ok"], rep


def test_s_n_functor_of_equivalence():
    # S_n of an exact isomorphism is again an isomorphism of categories
    W = instance_pointed_sets(2)
    S2 = s_n_category(W, 2)
    F = FunctorData.identity(W.cat)
    SF = s_n_functor(F, W, W, S2, S2)
    assert SF.validate()["ok"]
    assert set(SF.object_map.values()) == set(S2.cat.objects)


def test_diagonal_nerve_connected():
    W = instance_pointed_sets(2)
    B, diag = diagonal_nerve_w(W, 2)
    assert B.validate()["ok"]
    # level (n, 0) is the grid set
    assert len(B.simplices(1, 0)) == len(enumerate_grids(W, 1))
    assert len(B.simplices(2, 0)) == len(enumerate_grids(W, 2))
    assert validate_simplicial_identities(diag)["ok"]
    H = homology(diag, 1)
    assert H[0] == [0]


def test_grid_json_round_trip():
    W = instance_pointed_sets(2)
    g = enumerate_grids(W, 2)[-1]
    doc = g.to_json()
    g2 = GapGrid.from_json(doc)
    assert g2.key == g.key
    certify_grid(W, g2)
