"""Finite category kit: nerve, tau1, groupoids, equivalences."""

import json

import pytest

from waldkit.cats import (
    FiniteCategory,
    FunctorData,
    NaturalTransformationData,
    Tau1Error,
    chain_category,
    check_equivalence_of_categories,
    contractible_groupoid,
    full_subcategory,
    functor_category,
    maximal_groupoid,
    nerve,
    tau1,
    tau1_counit_iso,
    terminal_category,
)
from waldkit.simplicial import basic_complex, enc, validate_simplicial_identities


def functor_is_isomorphism(F):
    objs_bij = len(set(F.object_map.values())) == len(F.target.objects) == len(
        F.source.objects
    )
    mors_bij = len(set(F.morphism_map.values())) == len(F.target.morphisms) == len(
        F.source.morphisms
    )
    return F.validate()["ok"] and objs_bij and mors_bij


def test_chain_category_validates():
    C = chain_category(2)
    assert C.validate()["ok"]
    assert len(C.objects) == 3 and len(C.morphisms) == 6


def test_nerve_of_terminal_is_point():
    N = nerve(terminal_category(), trunc_dim=3)
    assert [len(N.simplices(m)) for m in range(4)] == [1, 1, 1, 1]
    assert validate_simplicial_identities(N)["ok"]


def test_nerve_of_chain_is_simplex():
    N = nerve(chain_category(1), trunc_dim=3)
    D = basic_complex("standard", 1, trunc_dim=3)
    assert [len(N.simplices(m)) for m in range(4)] == [
        len(D.simplices(m)) for m in range(4)
    ]
    assert validate_simplicial_identities(N)["ok"]
    assert N.coskeletal_bound == 2


def test_nerve_of_free_standing_iso_is_interval_groupoid():
    N = nerve(contractible_groupoid(1), trunc_dim=3)
    J = basic_complex("interval_groupoid", 1, trunc_dim=3)
    assert [len(N.simplices(m)) for m in range(4)] == [
        len(J.simplices(m)) for m in range(4)
    ]


def test_tau1_of_nerve_recovers_category():
    for C in (terminal_category(), chain_category(1), chain_category(2),
              contractible_groupoid(1)):
        F = tau1_counit_iso(C)
        assert functor_is_isomorphism(F)


def test_tau1_of_standard_one_simplex():
    T, _ = tau1(basic_complex("standard", 1, trunc_dim=2))
    assert len(T.objects) == 2 and len(T.morphisms) == 3
    C = chain_category(1)
    assert len(C.morphisms) == len(T.morphisms)


def test_tau1_of_interval_groupoid():
    # path rewriting on the 2-simplices of J[1] gives the contractible groupoid
    T, edge_class = tau1(basic_complex("interval_groupoid", 1, trunc_dim=3))
    assert len(T.objects) == 2 and len(T.morphisms) == 4
    for m in T.morphisms:
        assert T.is_iso(m)


def test_tau1_on_boundary_is_free():
    # no 2-simplices: the free category on the triangle boundary graph
    T, _ = tau1(basic_complex("boundary", 2, trunc_dim=2))
    # three vertices, three identities, three edges, one composite path
    assert len(T.objects) == 3 and len(T.morphisms) == 7


def test_tau1_aborts_on_unbounded_paths():
    # a loop with no relations: irreducible paths of every length
    levels = [["v"], ["e", "i"]]
    faces = {(1, "e", 0): "v", (1, "e", 1): "v", (1, "i", 0): "v", (1, "i", 1): "v"}
    degs = {(0, "v", 0): "i"}
    from waldkit.simplicial import TruncatedSimplicialSet

    loop = TruncatedSimplicialSet(2, levels + [[]], faces, degs)
    with pytest.raises(Tau1Error):
        tau1(loop, path_cap=6)


def test_maximal_groupoid_of_groupoid_is_itself():
    G = contractible_groupoid(2)
    M = maximal_groupoid(G)
    assert set(M.morphisms) == set(G.morphisms)


def test_maximal_groupoid_of_chain_is_discrete():
    M = maximal_groupoid(chain_category(1))
    assert len(M.morphisms) == 2  # identities only


def test_check_equivalence_identity_and_skeleton():
    C = chain_category(1)
    rep = check_equivalence_of_categories(FunctorData.identity(C))
    assert rep["ok"] and rep["inverse_witness"] is not None

    # a two-object category equivalent to the terminal category: the
    # contractible groupoid, mapped from the point by inclusion
    G = contractible_groupoid(1)
    incl = FunctorData(
        terminal_category(), G,
        {terminal_category().objects[0]: "0"},
        {terminal_category().morphisms[0]: G.id_of("0")},
    )
    rep = check_equivalence_of_categories(incl)
    assert rep["ok"]
    W = rep["inverse_witness"]
    assert W["unit"].is_natural_iso() and W["counit"].is_natural_iso()


def test_check_equivalence_detects_non_surjective():
    pt = terminal_category()
    # discrete two-object category
    objs = ["a", "b"]
    D = FiniteCategory(
        objs, ["ia", "ib"],
        {"ia": "a", "ib": "b"}, {"ia": "a", "ib": "b"},
        {"a": "ia", "b": "ib"},
        {("ia", "ia"): "ia", ("ib", "ib"): "ib"},
    )
    F = FunctorData(pt, D, {pt.objects[0]: "a"}, {pt.morphisms[0]: "ia"})
    rep = check_equivalence_of_categories(F)
    assert not rep["ok"] and not rep["essentially_surjective"]


def test_equivalence_stable_under_composition():
    G = contractible_groupoid(1)
    pt = terminal_category()
    incl = FunctorData(pt, G, {pt.objects[0]: "0"}, {pt.morphisms[0]: G.id_of("0")})
    rep = check_equivalence_of_categories(incl)
    back = rep["inverse_witness"]["inverse"]
    composite = back.compose_with(incl)
    assert check_equivalence_of_categories(composite)["ok"]


def test_functor_category_of_interval():
    # functors J_1 -> chain(1): only the two constants (no non-identity isos)
    FC = functor_category(contractible_groupoid(1), chain_category(1))
    assert len(FC.objects) == 2
    assert FC.validate()["ok"]


def test_natural_transformation_validation_catches_non_natural():
    C = chain_category(1)
    idF = FunctorData.identity(C)
    bad = NaturalTransformationData(idF, idF, {o: C.id_of(o) for o in C.objects})
    assert bad.validate()["ok"]
    # now break a component type
    comps = {o: C.id_of(o) for o in C.objects}
    comps[C.objects[0]] = C.hom(C.objects[0], C.objects[1])[0]
    worse = NaturalTransformationData(idF, idF, comps)
    assert not worse.validate()["ok"]


def test_category_json_round_trip():
    C = chain_category(2)
    doc = C.to_json()
    C2 = FiniteCategory.from_json(doc)
    assert C2.validate()["ok"]
    assert C2.objects == C.objects and C2.morphisms == C.morphisms
    assert json.dumps(C2.to_json(), sort_keys=True) == json.dumps(doc, sort_keys=True)
