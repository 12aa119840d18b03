import random

import pytest
from hypothesis import given, strategies as st

import oracles
from helpers import f_hodge_tate, ns, random_sp_nilpotent, random_weight1_cone, weight1_lattice
from nilorbit.errors import InteriorDisagreement, InvariantError, NotNilpotentOrbit, UnknownDiagram
from nilorbit.exact import Matrix, Subspace
from nilorbit.hodge import (LMHSType, NilpotentCone, SymplecticLattice, WeightFiltration,
                            classify_lmhs, cone_weight_filtration, deligne_splitting,
                            is_nilpotent_orbit, jm_weight_filtration, lmhs_splitting,
                            standard_form, type_from_table)
from nilorbit.scenario import fixture_path, ingest


def test_standard_form_shape():
    q = standard_form((1, 1))
    assert q == Matrix([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])


@pytest.mark.parametrize("Q, weight, hodge, message", [
    (Matrix([[0, 1], [1, 0]]), 1, (1, 1), "antisymmetry"),
    (Matrix([[0, 0], [0, 0]]), 1, (1, 1), "nondegeneracy"),
    (standard_form((1,)), 1, (2, 0), "symmetric"),
    (standard_form((2,)), 3, (2, 0, 0, 2), "Calabi-Yau"),
    (standard_form((1,)), 2, (1, 0, 1), "only weights"),
])
def test_lattice_validation(Q, weight, hodge, message):
    with pytest.raises(InvariantError, match=message):
        SymplecticLattice(Q, weight, hodge)


@given(st.integers(0, 10 ** 6))
def test_jm_matches_jordan_chains(seed):
    rng = random.Random(seed)
    Q = standard_form((rng.choice((2, 3)),))
    N = random_sp_nilpotent(Q, rng, density=0.5)
    W = jm_weight_filtration(N)
    ref = oracles.jm_oracle(N)
    for k, vecs in ref.items():
        assert Subspace.span([oracles.to_fractions(v) for v in vecs], N.nrows) == W[k]


def test_jm_of_zero_is_trivial():
    W = jm_weight_filtration(Matrix.zeros(4))
    assert W[0].is_full() and W[-1].is_zero()


def test_shift_moves_indices():
    W = jm_weight_filtration(Matrix([[0, 1], [0, 0]]))
    V = W.shift(1)
    assert V[0] == W[-1] and V[2] == W[1]
    assert W.graded_dims() == {-1: 1, 1: 1}


@given(st.integers(0, 10 ** 6))
def test_weight_one_orbits_are_type_I(seed):
    lat, cone, F = random_weight1_cone(random.Random(seed))
    assert is_nilpotent_orbit(cone, F, lat).ok
    t = classify_lmhs(cone, F, lat)
    # rank of the generator sum is the number of (1,1) classes
    assert t.kind in ("I", "HT")
    assert t.a == cone.interior_point().rank()
    table = lmhs_splitting(cone, F, lat).table()
    assert all(table.get((q, p), 0) == d for (p, q), d in table.items())
    assert sum(table.values()) == lat.rank


@given(st.integers(0, 10 ** 6))
def test_orbit_test_agrees_with_hodge_riemann_oracle(seed):
    rng = random.Random(seed)
    lat, cone, F = random_weight1_cone(rng)
    sign = rng.choice((1, -1))
    gens = [g * sign for g in cone.generators]
    steps = {1: F[1].basis}
    ours = is_nilpotent_orbit(NilpotentCone(tuple(gens)), F, lat).ok
    assert ours == oracles.orbit_oracle(lat.Q, 1, lat.sign, steps, gens)
    assert ours == (sign == 1)


def test_fixture_types_and_sign_flip():
    for name, tag in (("elliptic_ht.json", "HT"), ("cy3_i_h1.json", "I_1"), ("cy3_iv_h1.json", "IV_1")):
        s = ingest(fixture_path(name))
        cone, F = s.nilpotent_cone("sigma"), s.witness("sigma")
        assert classify_lmhs(cone, F, s.lattice).tag == tag
        with pytest.raises(NotNilpotentOrbit):
            classify_lmhs(NilpotentCone(tuple(g * -1 for g in cone.generators)), F, s.lattice)


def test_certificate_names_the_failing_check():
    s = ingest(fixture_path("elliptic_ht.json"))
    cone, F = s.nilpotent_cone("sigma"), s.witness("sigma")
    cert = is_nilpotent_orbit(NilpotentCone(tuple(g * -1 for g in cone.generators)), F, s.lattice)
    assert cert.failed and cert.failed[0].startswith("positivity")


def test_deligne_splitting_of_ht14_cones_is_symmetric():
    s = ingest(fixture_path("ht14_like.json"))
    for c in s.cones:
        split = lmhs_splitting(s.nilpotent_cone(c.name), s.witness(c.name), s.lattice)
        table = split.table()
        assert sum(table.values()) == s.lattice.rank
        assert all(table.get((q, p), 0) == d for (p, q), d in table.items())


def test_interior_disagreement_is_detected():
    # positive semidefinite generators: every interior point has rank two
    lat = weight1_lattice(2)
    cone = NilpotentCone((ns([[1, 0], [0, 0]]), ns([[0, 0], [0, 1]])))
    W = cone_weight_filtration(cone, random.Random(0), samples=4)
    assert W == jm_weight_filtration(cone.interior_point())
    assert is_nilpotent_orbit(cone, f_hodge_tate(2), lat).ok
    # S = diag(1,-1) and diag(0,1): the sum diag(1,0) has rank one, 1*S + 2*T has rank two
    bad = NilpotentCone((ns([[1, 0], [0, -1]]), ns([[0, 0], [0, 1]])))
    with pytest.raises(InteriorDisagreement):
        cone_weight_filtration(bad, random.Random(1), samples=20)


def test_lmhs_type_tags():
    assert LMHSType.parse("IV_2").tag == "IV_2"
    assert LMHSType.parse("ht").kind == "HT"
    assert LMHSType("HT", 2).in_phi(["I"])
    assert not LMHSType("IV", 1).in_phi(["I"])
    with pytest.raises(ValueError):
        LMHSType.parse("V_1")


def test_unknown_diagram():
    lat = weight1_lattice(1)
    with pytest.raises(UnknownDiagram):
        type_from_table({(2, 2): 2}, lat)


def test_weight_filtration_from_dict_fills_gaps():
    W = WeightFiltration.from_dict(2, {-1: Subspace.span([(1, 0)], 2), 1: Subspace.full(2)})
    assert W[0] == W[-1] and W[1].is_full() and W[-2].is_zero()


def test_deligne_splitting_direct():
    s = ingest(fixture_path("cy3_iv_h1.json"))
    cone, F = s.nilpotent_cone("sigma"), s.witness("sigma")
    W = jm_weight_filtration(cone.interior_point()).shift(3)
    split = deligne_splitting(W, F)
    assert split.table() == {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1}
