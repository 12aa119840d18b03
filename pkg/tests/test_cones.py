import random

import pytest
import sympy
from hypothesis import assume, given, strategies as st

import oracles
from nilorbit.cones import (Cone, ConeComplex, _cofactor_vector, _int_det, chamber_subdivision,
                            cone_from_constraints, faces, intersect, is_fan, refines,
                            star_subdivide_complex, star_subdivision)
from nilorbit.errors import NotFaceClosed, RayOutside

vec2 = st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(any)


def closure(*cones):
    out = []
    for c in cones:
        out += list(faces(c).cones)
    return ConeComplex.of(cones[0].dim, out)


def test_cone_normalises_generators():
    c = Cone(2, [(2, 0), (0, 3), (1, 1)])
    assert c.generators == ((0, 1), (1, 0))
    assert c.contains((1, 1)) and not c.contains((1, 0)) and c.contains_closed((1, 0))


def test_hrep_of_a_ray_in_space():
    c = Cone(3, [(1, 1, 0)])
    h = c.hrep()
    assert len(h.equalities) == 2 and len(h.facets) == 1
    assert c.contains((2, 2, 0)) and not c.contains((1, 0, 0))


def test_faces_of_simplicial_cone():
    c = Cone(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert len(faces(c)) == 8  # including the zero cone


def test_intersection_of_open_cones():
    a, b = Cone(2, [(1, 0), (1, 2)]), Cone(2, [(1, 1), (0, 1)])
    m = intersect(a, b)
    assert m == Cone(2, [(1, 1), (1, 2)])
    assert intersect(Cone(2, [(1, 0)]), Cone(2, [(0, 1)])) is None


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_integer_determinant(rows):
    assert _int_det(rows) == sympy.Matrix(rows).det()


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=3, max_size=3))
def test_cofactor_vector_is_in_the_kernel(rows):
    y = _cofactor_vector([tuple(r) for r in rows], 4)
    if sympy.Matrix(rows).rank() < 3:
        assert y is None
    else:
        assert all(sum(a * b for a, b in zip(r, y)) == 0 for r in rows)


def test_cone_from_constraints_recovers_cone():
    c = Cone(3, [(1, 0, 0), (0, 1, 0), (1, 1, 1)])
    h = c.hrep()
    assert cone_from_constraints(3, h.equalities, h.facets) == c


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).filter(any),
                min_size=3, max_size=3), st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)))
def test_star_subdivision_refines(gens, w):
    c = Cone(3, gens)
    assume(c.cone_dim == 3 and any(w))
    ray = tuple(a + b for a, b in zip(c.interior_point(), w))
    assume(c.contains_closed(ray))
    sub = star_subdivision(c, ray)
    assert is_fan(sub)[0]
    assert refines(sub, faces(c))


def test_star_subdivision_rejects_outside_ray():
    with pytest.raises(RayOutside):
        star_subdivision(Cone(2, [(1, 0), (1, 1)]), (0, 1))
    with pytest.raises(RayOutside):
        star_subdivide_complex(faces(Cone(2, [(1, 0), (1, 1)])), (0, 1))


def test_is_fan_reports_overlap_and_missing_face():
    a, b = Cone(2, [(1, 0), (1, 2)]), Cone(2, [(1, 1), (0, 1)])
    ok, why = is_fan(closure(a, b))
    assert not ok and why["kind"] == "overlap"
    ok, why = is_fan(ConeComplex.of(2, [a]))
    assert not ok and why["kind"] == "missing_face"


def test_chamber_subdivision_of_fixture_pair():
    cx = closure(Cone(2, [(1, 0), (0, 1)]), Cone(2, [(2, 1), (1, 2)]))
    fine = chamber_subdivision(cx)
    assert len(fine) == 8 == oracles.chamber_count_oracle([[(1, 0), (0, 1)], [(2, 1), (1, 2)]])
    assert is_fan(fine)[0] and refines(fine, cx)


def test_chamber_subdivision_needs_face_closed_input():
    with pytest.raises(NotFaceClosed):
        chamber_subdivision(ConeComplex.of(2, [Cone(2, [(1, 0), (0, 1)])]))


@given(vec2, vec2, vec2, vec2)
def test_chamber_subdivision_random_planar(a1, a2, b1, b2):
    a, b = Cone(2, [a1, a2]), Cone(2, [b1, b2])
    assume(a.cone_dim == 2 and b.cone_dim == 2)
    fine = chamber_subdivision(closure(a, b))
    assert is_fan(fine)[0]
    assert refines(fine, closure(a, b))
    assert len(fine) == oracles.chamber_count_oracle([list(a.generators), list(b.generators)])


def test_chamber_subdivision_is_idempotent():
    rng = random.Random(3)
    gens = [tuple(rng.randint(0, 3) for _ in range(3)) for _ in range(6)]
    a, b = Cone(3, gens[:3]), Cone(3, gens[3:])
    assert a.cone_dim == 3 and b.cone_dim == 3
    fine = chamber_subdivision(closure(a, b))
    again = chamber_subdivision(fine)
    assert again.same_cones(fine)
