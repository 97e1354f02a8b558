"""The comparison functor pipeline and Waldhausen equivalence certification."""

import pytest

from waldkit.cats import FunctorData
from waldkit.waldhausen import (
    SplitExactSequenceData,
    WaldhausenInstance,
    build_universal_sequence,
    check_waldhausen_equivalence,
    instance_pointed_sets,
    phi_comparison,
)


def test_waldhausen_equivalence_identity():
    W = instance_pointed_sets(2)
    rep = check_waldhausen_equivalence(FunctorData.identity(W.cat), W, W)
    assert rep["ok"]


def test_waldhausen_equivalence_rejects_enlarged_target_cofibrations():
    # an equivalence that does not reflect cofibrations: enlarge the
    # target's cofibration class by the collapse map
    W = instance_pointed_sets(2)
    from waldkit.waldhausen import _pointed_mor

    collapse = _pointed_mor(2, 2, (0, 0))
    bigger = WaldhausenInstance(
        "mutant", W.cat, W.zero, W.cofibrations | {collapse}, W.weqs, W._chooser
    )
    rep = check_waldhausen_equivalence(FunctorData.identity(W.cat), W, bigger)
    assert not rep["ok"]
    assert not rep["clauses"]["reflects_cofibrations"]["pass"]


@pytest.mark.parametrize("size", [2, 3])
def test_phi_comparison_universal_sequence(size):
    W = instance_pointed_sets(size)
    S = build_universal_sequence(W, W, W)
    Phi, rep = phi_comparison(S)
    assert rep["ok"], rep
    assert Phi is not None
    for gate in rep["hypotheses"].values():
        assert gate["pass"]
    assert rep["psi_after_phi_is_identity"]["pass"]
    assert rep["waldhausen_equivalence"]["pass"]


def mutate(S, **kw):
    fields = dict(
        A=S.A, E=S.E, B=S.B, i=S.i, f=S.f, j=S.j, g=S.g,
        unit_A=S.unit_A, counit_B=S.counit_B, counit_E=S.counit_E, unit_E=S.unit_E,
    )
    fields.update(kw)
    return SplitExactSequenceData(**fields)


def test_phi_gate_one_mutation():
    # remove the counit components from the cofibrations of E
    W = instance_pointed_sets(2)
    S = build_universal_sequence(W, W, W)
    counits = {S.counit_E.components[e] for e in S.E.cat.objects}
    non_iso_counits = {m for m in counits if not S.E.cat.is_iso(m)}
    assert non_iso_counits
    E2 = WaldhausenInstance(
        S.E.label, S.E.cat, S.E.zero,
        S.E.cofibrations - non_iso_counits, S.E.weqs, S.E._chooser,
    )
    E2.parts = S.E.parts
    E2.eobj_parts = S.E.eobj_parts
    E2.emor_parts = S.E.emor_parts
    E2.A, E2.C, E2.B = S.E.A, S.E.C, S.E.B
    _, rep = phi_comparison(mutate(S, E=E2))
    assert not rep["ok"]
    assert not rep["hypotheses"]["counit_components_cofibrations"]["pass"]


def test_phi_gate_two_mutation():
    # enlarge the cofibrations of E by a morphism with a cofibration
    # subobject component but a collapsing quotient component; its induced
    # comparison is a different morphism that stays non-cofibrant
    W = instance_pointed_sets(3)
    S = build_universal_sequence(W, W, W)
    E = S.E
    from waldkit.waldhausen import _pointed_mor

    extra = None
    for mu in E.cat.morphisms:
        fa, fc, fb = E.emor_parts(mu)
        if mu in E.cofibrations:
            continue
        if fa not in W.cofibrations or fb in W.cofibrations:
            continue
        e1 = E.cat.src[mu]
        ij_mu = S.i.on_mor(S.j.on_mor(mu))
        po = E.pushout(ij_mu, S.counit_E.components[e1])
        if po is None:
            continue
        induced = po.mediate(S.counit_E.components[E.cat.tgt[mu]], mu)
        if induced != mu and induced not in E.cofibrations:
            extra = mu
            break
    assert extra is not None
    E2 = WaldhausenInstance(
        E.label, E.cat, E.zero, E.cofibrations | {extra}, E.weqs, E._chooser
    )
    E2.parts = E.parts
    E2.eobj_parts = E.eobj_parts
    E2.emor_parts = E.emor_parts
    E2.A, E2.C, E2.B = E.A, E.C, E.B
    _, rep = phi_comparison(mutate(S, E=E2))
    assert not rep["ok"]
    assert rep["hypotheses"]["counit_components_cofibrations"]["pass"]
    assert not rep["hypotheses"]["induced_maps_cofibrations"]["pass"]
    assert rep["hypotheses"]["zero_quotient_sequences_isos"]["pass"]


def test_phi_gate_three_mutation():
    # adjoin a non-iso cofiber sequence onto the zero object by declaring
    # the collapse a cofibration of the subobject instance
    W = instance_pointed_sets(2)
    from waldkit.waldhausen import _pointed_mor

    collapse = _pointed_mor(2, 1, (0, 0))
    A2 = WaldhausenInstance(
        "mutant-A", W.cat, W.zero, W.cofibrations | {collapse}, W.weqs, W._chooser
    )
    S = build_universal_sequence(W, W, W)
    _, rep = phi_comparison(mutate(S, A=A2))
    assert not rep["ok"]
    assert not rep["hypotheses"]["zero_quotient_sequences_isos"]["pass"]
    # the other gates must still pass: the failure is at the intended gate
    assert rep["hypotheses"]["counit_components_cofibrations"]["pass"]
    assert rep["hypotheses"]["induced_maps_cofibrations"]["pass"]
