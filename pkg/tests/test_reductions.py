import random

import pytest

from helpers import random_symplectic
from nilorbit.errors import NotParabolic, NotTypeI, NotTypeIV
from nilorbit.exact import Matrix
from nilorbit.hodge import is_nilpotent_orbit, jm_weight_filtration
from nilorbit.reductions import (adapted_symplectic_basis, bracket_certificate, levi_decompose,
                                 same_quotient, type_I_restrict, type_IV_quotient)
from nilorbit.scenario import fixture_path, ingest


def load(name, cone="sigma"):
    s = ingest(fixture_path(name))
    return s, s.nilpotent_cone(cone), s.witness(cone)


@pytest.mark.parametrize("name, kind", [("cy3_i_h1.json", "CY3_I"), ("cy3_iv_h1.json", "CY3_IV"),
                                        ("elliptic_ht.json", "weight1")])
def test_adapted_basis_reaches_standard_form(name, kind):
    s, cone, _ = load(name)
    W = jm_weight_filtration(cone.interior_point())
    b = adapted_symplectic_basis(W, s.lattice.Q, kind)
    assert b.P.T @ s.lattice.Q @ b.P == b.template()
    # every W_k is a coordinate span in the adapted basis
    for k in W.indices():
        for v in W[k].basis:
            c = b.coords(v)
            assert all(x == 0 for x, w in zip(c, b.weights) if w > k)


def test_adapted_basis_survives_a_change_of_lattice_basis():
    s, cone, _ = load("cy3_iv_h1.json")
    Q = s.lattice.Q
    g = random_symplectic(Q, random.Random(5), steps=6)
    N = g @ cone.interior_point() @ g.inverse()
    b = adapted_symplectic_basis(jm_weight_filtration(N), Q, "CY3_IV")
    assert b.P.T @ Q @ b.P == b.template()


def test_levi_decomposition_recovers_element():
    s, cone, _ = load("cy3_iv_h1.json")
    W = jm_weight_filtration(cone.interior_point())
    b = adapted_symplectic_basis(W, s.lattice.Q, "CY3_IV")
    gamma = s.group_elements["T6"]
    pair = levi_decompose(gamma, b)
    assert pair.product() == gamma
    u = b.to_adapted(pair.unipotent)
    assert all(u[i, i] == 1 for i in range(u.nrows))


def test_levi_rejects_non_parabolic():
    s, cone, _ = load("cy3_iv_h1.json")
    b = adapted_symplectic_basis(jm_weight_filtration(cone.interior_point()), s.lattice.Q, "CY3_IV")
    swap = Matrix([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]])
    with pytest.raises(NotParabolic):
        levi_decompose(swap, b)


@pytest.mark.parametrize("name", ["cy3_i_h1.json", "cy3_i_h1_z.json"])
def test_type_I_restriction(name):
    s, cone, F = load(name)
    red = type_I_restrict(cone, F, s.lattice, list(s.group_elements.values()))
    assert red.ok, red.checks.failed
    assert red.reduced_type.kind == "HT"
    assert red.polarized.ok
    assert red.labels == ["beta_1", "e_1"]


def test_type_I_rejects_type_IV():
    s, cone, F = load("cy3_iv_h1.json")
    with pytest.raises(NotTypeI):
        type_I_restrict(cone, F, s.lattice)


def test_type_IV_rejects_type_I():
    s, cone, F = load("cy3_i_h1.json")
    with pytest.raises(NotTypeIV):
        type_IV_quotient(cone, F, s.lattice)


def test_type_IV_quotient_polarized_for_a_equal_one():
    s, cone, F = load("cy3_iv_h1.json")
    red = type_IV_quotient(cone, F, s.lattice, [s.group_elements["T6"]])
    assert red.ok and red.polarized.ok
    assert red.lattice.sign == -s.lattice.sign
    assert is_nilpotent_orbit(red.cone, red.F, red.lattice).ok


def test_type_IV_quotient_is_lorentzian_for_a_two():
    s, cone, F = load("ht14_like.json", "sigma_x")
    red = type_IV_quotient(cone, F, s.lattice)
    assert red.ok and red.reduced_type.a == 2
    # the reduced triple has the I(2) diagram but the induced form is indefinite
    assert not red.polarized.ok
    assert any(name.startswith("positivity") for name in red.polarized.failed)


def test_bracket_certificate_on_pair():
    s = ingest(fixture_path("cy3_iv_pair.json"))
    sig, tau = (s.nilpotent_cone(c.name) for c in s.cones[:2])
    F = s.witness(s.cones[0].name)
    b = adapted_symplectic_basis(jm_weight_filtration(sig.interior_point()), s.lattice.Q, "CY3_IV")
    assert same_quotient(sig, tau, b)
    cert = bracket_certificate(sig, tau, F, s.lattice)
    assert cert.fires
    assert (cert.N1 - cert.N2).is_zero() is False
    assert cert.to_json()["fires"] is True


def test_bracket_certificate_needs_distinct_cones():
    s = ingest(fixture_path("cy3_iv_pair.json"))
    sig = s.nilpotent_cone(s.cones[0].name)
    cert = bracket_certificate(sig, sig, s.witness(s.cones[0].name), s.lattice)
    assert not cert.fires and "cones_distinct" in cert.checks.failed
