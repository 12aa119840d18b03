import pytest

from helpers import f_hodge_tate, ns, weight1_lattice
from nilorbit.errors import InvariantError, MissingWitness, MixedRegime
from nilorbit.exact import Matrix
from nilorbit.fans import (QUALIFIER, ConeSystem, btilde_meet, build_weak_fan, canonical_cone,
                           fan_check, integral_exp_multiple, same_system, strong_compatibility,
                           weak_fan_check)
from nilorbit.hodge import NilpotentCone
from nilorbit.scenario import fixture_path, ingest


def system(name, **kw):
    return ingest(fixture_path(name)).to_system(**kw)


def test_crossing_cones_are_not_a_fan():
    rep = fan_check(system("weight1_witness.json"))
    assert not rep.verdicts["fan"]
    assert any(v["kind"] == "overlap" for v in rep.violations)


def test_build_gives_weak_fan_and_is_idempotent():
    refined, rep = build_weak_fan(system("weight1_witness.json"))
    assert rep.ok, rep.verdicts
    assert rep.details["refined_cones"] == 4
    assert fan_check(refined).verdicts["fan"]
    again, rep2 = build_weak_fan(refined)
    assert rep2.ok and same_system(refined, again)


def test_disjoint_cones_are_left_alone():
    lat = weight1_lattice(2)
    F = f_hodge_tate(2)
    a = NilpotentCone((ns([[1, 0], [0, 0]]), ns([[1, 1], [1, 1]])))
    b = NilpotentCone((ns([[1, 1], [1, 1]]), ns([[0, 0], [0, 1]])))
    s = ConeSystem(lat, [a, b], [], ("I",), [F, F])
    refined, rep = build_weak_fan(s)
    assert rep.ok and same_system(refined, s)


def test_strong_compatibility_needs_integral_exponentials():
    assert integral_exp_multiple(Matrix([[0, 1], [0, 0]])) == 1
    rep = strong_compatibility(system("cy3_iv_h1.json"))
    assert rep.ok and rep.details["k"]["sigma[1]"] == 6


def test_witness_must_preserve_the_form():
    s = ingest(fixture_path("weight1_witness.json"))
    bad = Matrix([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(InvariantError, match="preserves Q"):
        ConeSystem(s.lattice, [s.nilpotent_cone("sigma")], [bad])


def test_missing_witness_and_unsupported_types():
    s = ingest(fixture_path("weight1_witness.json"))
    sys_ = ConeSystem(s.lattice, [s.nilpotent_cone("sigma")], [], ("I",), [None])
    with pytest.raises(MissingWitness):
        build_weak_fan(sys_)
    with pytest.raises(MixedRegime):
        build_weak_fan(s.to_system(phi=("II",)))


def test_engineered_pair_is_reported_ill_formed():
    s = ingest(fixture_path("cy3_iv_pair.json"))
    rep = weak_fan_check(s.to_system())
    assert not rep.ok
    assert rep.details.get("ill_formed")
    assert "Ill-formed pair" in rep.to_markdown()
    sig, tau = (s.nilpotent_cone(c.name) for c in s.cones[:2])
    verdict = btilde_meet(sig, tau, s.to_system(), s.witness(s.cones[0].name), s.witness(s.cones[1].name))
    assert verdict.verdict == "No"


def test_reports_carry_the_qualifier():
    rep = weak_fan_check(system("chamber_example.json"))
    assert rep.to_json()["qualifier"] == QUALIFIER
    assert "seconds" not in rep.to_json()
    assert "seconds" in rep.to_json(timing=True)


def test_canonical_cone_ignores_order_and_scale():
    a, b = ns([[1, 0], [0, 0]]), ns([[0, 0], [0, 1]])
    assert canonical_cone([a, b]).same_as(canonical_cone([b * 3, a]))


def test_unrefined_ht14_family_is_not_a_weak_fan():
    rep = weak_fan_check(system("ht14_like.json"))
    assert rep.verdicts["orbit_witnesses"] and not rep.verdicts["weak_fan"]
    assert rep.violations and not rep.unknown
    # face closure of the witness orbit, counted by LMHS type
    assert rep.details["types"] == {"IV_2": 11, "I_1": 8, "I_2": 6, "pure": 1}
