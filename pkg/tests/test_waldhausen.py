"""Instances, axioms, pushouts, K0, and split-exact sequence machinery."""

from itertools import product as iproduct

import pytest

from waldkit.cats import FunctorData
from waldkit.waldhausen import (
    BudgetExceeded,
    WaldhausenInstance,
    canonical_pushout,
    instance_pointed_sets,
    instance_vect_f2,
    is_pushout,
    k0,
    k0_direct_sum_signature,
    load_instance,
    sub_waldhausen_instance,
    verify_axioms,
    verify_exact_functor,
    verify_pushout_functoriality,
    verify_sub_waldhausen,
    _pointed_mor,
)


def count_based_maps(a, b):
    # oracle: based maps from a pointed a-set to a pointed b-set
    return b ** (a - 1)


def test_pointed_sets_enumeration_matches_oracle():
    W = instance_pointed_sets(2)
    assert len(W.cat.objects) == 2
    # oracle count: sum of b^(a-1) over cards a, b in {1, 2}
    want = sum(count_based_maps(a, b) for a in (1, 2) for b in (1, 2))
    assert len(W.cat.morphisms) == want == 5
    assert W.cat.validate()["ok"]


def test_pointed_sets_three_morphism_count():
    W = instance_pointed_sets(3)
    want = sum(count_based_maps(a, b) for a in (1, 2, 3) for b in (1, 2, 3))
    assert len(W.cat.morphisms) == want == 23
    assert W.cat.validate()["ok"]


def test_vect_f2_counts():
    W = instance_vect_f2(1)
    assert len(W.cat.objects) == 2
    assert len(W.cat.hom("V1", "V1")) == 2
    W2 = instance_vect_f2(2)
    assert len(W2.cat.hom("V2", "V2")) == 16
    assert W2.cat.validate()["ok"]


def test_pointed_pushout_amalgam():
    W = instance_pointed_sets(3)
    # span P2 <- P1 >-> P2 has the wedge P3 as pushout
    f = _pointed_mor(1, 2, (0,))
    g = _pointed_mor(1, 2, (0,))
    po = canonical_pushout(W, (f, g))
    assert po.obj == "P3"
    assert is_pushout(W.cat, f, g, po.obj, po.from_left, po.from_cof)


def test_pointed_pushout_out_of_range():
    W = instance_pointed_sets(2)
    f = _pointed_mor(1, 2, (0,))
    g = _pointed_mor(1, 2, (0,))
    assert W.pushout(f, g) is None
    with pytest.raises(BudgetExceeded):
        canonical_pushout(W, (f, g))


def test_pointed_pushout_collapse_example():
    # ({*,1} <-collapse- {*,1} >->id {*,1}) has pushout {*,1}
    W = instance_pointed_sets(2)
    collapse = _pointed_mor(2, 2, (0, 0))
    ident = _pointed_mor(2, 2, (0, 1))
    po = canonical_pushout(W, (collapse, ident))
    assert po.obj == "P2"


def test_pushout_of_identity_cofibration():
    W = instance_pointed_sets(3)
    f = _pointed_mor(2, 3, (0, 2))
    ident = _pointed_mor(2, 2, (0, 1))
    po = canonical_pushout(W, (f, ident))
    assert po.obj == "P3"
    assert po.from_left == W.cat.id_of("P3")


def test_vect_pushout_direct_sum():
    W = instance_vect_f2(2)
    z_to_v1 = W.zero_to("V1")
    po = canonical_pushout(W, (z_to_v1, z_to_v1))
    assert po.obj == "V2"


def test_axioms_pass_on_instances():
    for W in (instance_pointed_sets(2), instance_pointed_sets(3), instance_vect_f2(1)):
        rep = verify_axioms(W)
        assert rep["ok"], rep
        assert rep["clauses"]["pushouts"]["checked"] > 0


def test_axioms_catch_missing_cofibration():
    W = instance_pointed_sets(2)
    smaller = frozenset(m for m in W.cofibrations if m != W.zero_to("P2"))
    mutant = WaldhausenInstance(
        "mutant", W.cat, W.zero, smaller, W.weqs, W._chooser
    )
    rep = verify_axioms(mutant)
    assert not rep["ok"]
    assert not rep["clauses"]["zero_sections_cofibrations"]["pass"]


def test_axioms_with_weq_everything_pass_vacuously():
    # with every map a weak equivalence, the iso and gluing clauses hold
    # trivially; the checker must not invent a failure
    W = instance_pointed_sets(2)
    mutant = WaldhausenInstance(
        "mutant", W.cat, W.zero, W.cofibrations, frozenset(W.cat.morphisms), W._chooser
    )
    assert verify_axioms(mutant)["ok"]


def test_axioms_catch_missing_iso_in_weq():
    W = instance_pointed_sets(3)
    swap = _pointed_mor(3, 3, (0, 2, 1))
    mutant = WaldhausenInstance(
        "mutant", W.cat, W.zero, W.cofibrations, W.weqs - {swap}, W._chooser
    )
    rep = verify_axioms(mutant)
    assert not rep["ok"]
    assert not rep["clauses"]["isos_and_closure"]["pass"]


def test_pushout_functoriality():
    W = instance_pointed_sets(2)
    rep = verify_pushout_functoriality(W)
    assert rep["ok"] and rep["checked"] > 0


def test_exact_functor_identity_and_skeleton():
    W = instance_pointed_sets(2)
    rep = verify_exact_functor(FunctorData.identity(W.cat), W, W)
    assert rep["ok"]


def test_exact_functor_collapse_to_point():
    W = instance_pointed_sets(2)
    Z = sub_waldhausen_instance(W, ["P1"], label="point")
    collapse = FunctorData(
        W.cat, Z.cat,
        {o: "P1" for o in W.cat.objects},
        {m: Z.cat.id_of("P1") for m in W.cat.morphisms},
    )
    rep = verify_exact_functor(collapse, W, Z)
    assert rep["ok"]


def test_k0_pointed_sets_is_Z():
    for k in (2, 3):
        p = k0(instance_pointed_sets(k))
        assert p.signature == [0]


def test_k0_vect_is_Z():
    p = k0(instance_vect_f2(2))
    assert p.signature == [0]


def test_k0_point_instance_trivial():
    W = instance_pointed_sets(2)
    Z = sub_waldhausen_instance(W, ["P1"], label="point")
    assert k0(Z).signature == []


def test_k0_direct_sum():
    pa = k0(instance_pointed_sets(2))
    pb = k0(instance_pointed_sets(2))
    assert k0_direct_sum_signature(pa, pb) == [0, 0]


def test_sub_waldhausen_full_and_zero():
    W = instance_pointed_sets(2)
    assert verify_sub_waldhausen(W, W)["ok"]
    Z = sub_waldhausen_instance(W, ["P1"])
    assert verify_sub_waldhausen(Z, W)["ok"]
    assert verify_axioms(Z)["ok"]


def test_load_instance_descriptor():
    W = load_instance({"instance": "pointed_sets", "size": 2})
    assert W.label.startswith("pointed_sets")
    with pytest.raises(ValueError):
        load_instance({"instance": "nope", "size": 1})
