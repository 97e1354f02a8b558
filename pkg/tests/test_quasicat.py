"""Horn filling, equivalence subcomplexes, pushout slices, and Gap nerves."""

import pytest

from waldkit.cats import chain_category, contractible_groupoid, maximal_groupoid, nerve
from waldkit.quasicat import (
    QuasicategoryProbe,
    compare_equiv_constructions,
    cotensor_matches_functor_nerve,
    equivalence_subcomplex,
    gap_sn_nerve,
    is_quasicategory,
    natural_equivalence_check,
    quasicat_pushout,
    waldhausen_quasicategory_probe,
)
from waldkit.sconstruction import s_n_category
from waldkit.simplicial import SimplicialMap, basic_complex, enc, product
from waldkit.waldhausen import (
    WaldhausenInstance,
    instance_pointed_sets,
    instance_vect_f2,
    _pointed_mor,
)


def test_nerve_is_quasicategory_with_unique_fillers():
    W = instance_pointed_sets(2)
    N = nerve(W.cat, trunc_dim=3)
    rep = is_quasicategory(N, up_to_dim=2)
    assert rep["ok"] and rep["unique_fillers"]
    assert rep["horns_checked"] > 0


def test_boundary_two_is_not_a_quasicategory():
    X = basic_complex("boundary", 2, trunc_dim=2)
    rep = is_quasicategory(X, up_to_dim=1)
    # no inner horns below dimension 2; check at dimension 2
    X3 = basic_complex("boundary", 2, trunc_dim=3)
    rep = is_quasicategory(X3, up_to_dim=2)
    assert not rep["ok"]
    assert rep["counterexample"]["n"] == 2 and rep["counterexample"]["k"] == 1


def test_interval_groupoid_is_quasicategory():
    J = basic_complex("interval_groupoid", 1, trunc_dim=3)
    rep = is_quasicategory(J, up_to_dim=2)
    assert rep["ok"]


def test_equivalence_subcomplex_methods_agree_on_nerves():
    for C in (chain_category(1), contractible_groupoid(1),
              instance_pointed_sets(2).cat):
        N = nerve(C, trunc_dim=3)
        probe = QuasicategoryProbe(N)
        via_tau = equivalence_subcomplex(probe, "tau1_full")
        via_j = equivalence_subcomplex(probe, "J_hom")
        for k in range(4):
            assert set(via_tau.simplices(k)) == set(via_j.simplices(k))


def test_equivalence_subcomplex_is_nerve_of_maximal_groupoid():
    for C in (instance_pointed_sets(2).cat, instance_pointed_sets(3).cat):
        N = nerve(C, trunc_dim=3)
        probe = QuasicategoryProbe(N)
        eq = equivalence_subcomplex(probe, "tau1_full")
        NG = nerve(maximal_groupoid(C), trunc_dim=3)
        for k in range(4):
            assert set(eq.simplices(k)) == set(NG.simplices(k))


def test_kan_nerve_of_groupoid_is_its_own_equivalence_subcomplex():
    N = nerve(contractible_groupoid(1), trunc_dim=3)
    probe = QuasicategoryProbe(N)
    eq = equivalence_subcomplex(probe, "tau1_full")
    for k in range(4):
        assert set(eq.simplices(k)) == set(N.simplices(k))


def test_natural_equivalence_constant_homotopy():
    W = instance_pointed_sets(2)
    N = nerve(W.cat, trunc_dim=2)
    D1 = basic_complex("standard", 1, trunc_dim=2)
    prod, pr1, _ = product(N, D1)
    # degenerate homotopy on the identity: project and include
    alpha = SimplicialMap(prod, N, dict(pr1.assignment))
    probe = QuasicategoryProbe(N)
    rep = natural_equivalence_check(alpha, N, probe)
    assert rep["ok"]
    assert rep["criteria_agree"]


def test_natural_equivalence_detects_noninvertible_component():
    # a homotopy whose component at some vertex is the collapse map
    W = instance_pointed_sets(2)
    C = W.cat
    N = nerve(C, trunc_dim=2)
    D1 = basic_complex("standard", 1, trunc_dim=2)
    prod, pr1, pr2 = product(N, D1)
    collapse = _pointed_mor(2, 2, (0, 0))
    import json

    assignment = {}
    for lvl in range(3):
        for cell in prod.simplices(lvl):
            x, d = json.loads(cell)
            o, ms = json.loads(x)
            t = json.loads(d)
            # functor [lvl] -> C from the pair (chain, monotone map to [1]):
            # on the 0-side it is the chain, on the 1-side composed with
            # the collapse endomorphism family (identity on P1)
            fam = {"P1": C.id_of("P1"), "P2": collapse}
            verts = [o]
            for mm in ms:
                verts.append(C.tgt[mm])
            new_ms = []
            cur = o
            for idx, mm in enumerate(ms):
                if t[idx] == t[idx + 1]:
                    new_ms.append(mm if t[idx] == 0 else C.compose(
                        fam[C.tgt[mm]], C.compose(mm, C.inverse_of(fam[C.src[mm]]) or mm)
                    ))
                else:
                    new_ms.append(C.compose(fam[C.tgt[mm]], mm))
                cur = C.tgt[mm]
            assignment[(lvl, cell)] = enc([o, new_ms])
    # simpler: use the collapse as the component edge directly at P2
    # by checking the component extraction rather than full naturality
    probe = QuasicategoryProbe(N)
    alpha = SimplicialMap(prod, N, assignment)
    rep = natural_equivalence_check(alpha, N, probe)
    assert not rep["ok"]
    assert rep["failing_vertices"]


def test_quasicat_pushout_recovers_categorical():
    W = instance_pointed_sets(2)
    N = nerve(W.cat, trunc_dim=3)
    probe = QuasicategoryProbe(N)
    f = enc(["P1", [_pointed_mor(1, 2, (0,))]])
    g = enc(["P1", [_pointed_mor(1, 2, (0,))]])
    rep = quasicat_pushout(probe, (f, g), W=W, up_to=3)
    # the wedge needs three elements: no pushout within this instance
    assert rep.get("no_candidate") or not rep["initial_evidence"]
    assert rep["match"]

    W3 = instance_pointed_sets(3)
    N3 = nerve(W3.cat, trunc_dim=3)
    probe3 = QuasicategoryProbe(N3)
    f3 = enc(["P1", [_pointed_mor(1, 2, (0,))]])
    rep3 = quasicat_pushout(probe3, (f3, f3), W=W3, up_to=3)
    assert rep3["initial_evidence"]
    assert rep3["match"]


def test_quasicat_pushout_of_equivalence():
    W = instance_pointed_sets(3)
    N = nerve(W.cat, trunc_dim=3)
    probe = QuasicategoryProbe(N)
    swap = _pointed_mor(3, 3, (0, 2, 1))
    any_map = _pointed_mor(3, 2, (0, 1, 1))
    g = enc(["P3", [swap]])
    f = enc(["P3", [any_map]])
    rep = quasicat_pushout(probe, (f, g), W=W, up_to=3)
    assert rep["initial_evidence"]
    assert rep["match"]
    assert rep["equivalence_far_leg"]


def test_gap_vertices_match_s_n_objects():
    W = instance_pointed_sets(2)
    for n in (0, 1, 2):
        gap = gap_sn_nerve(W, n, k_max=1)
        sn = s_n_category(W, n)
        assert set(gap.vertices) == set(sn.grids)
        # k-simplices biject with functor chains into S_n
        assert len(gap.complex.simplices(1)) == len(
            nerve(sn.cat, trunc_dim=1).simplices(1)
        )


def test_gap_level_zero_is_a_point():
    W = instance_pointed_sets(2)
    gap = gap_sn_nerve(W, 0, k_max=1)
    assert len(gap.vertices) == 1


def test_compare_equiv_constructions():
    W = instance_pointed_sets(2)
    for n in (0, 1, 2):
        rep = compare_equiv_constructions(W, n, k_max=2, j_max=1)
        assert rep["ok"], rep


def test_compare_fails_if_weq_dropped():
    W = instance_pointed_sets(3)
    swap = _pointed_mor(3, 3, (0, 2, 1))
    mutant = WaldhausenInstance(
        "mutant", W.cat, W.zero, W.cofibrations, W.weqs - {swap}, W._chooser
    )
    mutant.kind = W.kind
    rep = compare_equiv_constructions(mutant, 1, k_max=1, j_max=0)
    assert not rep["w_comparison"]
    assert not rep["ok"]


def test_cotensor_matches_functor_nerve():
    C = instance_pointed_sets(2).cat
    for jm in (0, 1):
        rep = cotensor_matches_functor_nerve(C, jm, levels=2)
        assert rep["match"], rep


def test_waldhausen_quasicategory_axioms_on_nerves():
    for W in (instance_pointed_sets(2), instance_vect_f2(1)):
        rep = waldhausen_quasicategory_probe(W, trunc=2)
        assert rep["ok"], rep
