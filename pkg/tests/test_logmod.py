import pytest

from nilorbit.cones import Cone, ConeComplex, faces
from nilorbit.errors import CenterOutside, MissingLimit, NotARefinement, NotReachableByStars
from nilorbit.exact import Matrix
from nilorbit.logmod import (BlowupStep, blowup_chart, boundary_orbit, exceptional_logs_integral,
                             log_of_ray, source_chart, subdivision_to_blowups)
from nilorbit.scenario import fixture_path, ingest

QUAD = Cone(2, [(1, 0), (0, 1)])


def split_at(ray):
    return ConeComplex.of(2, list(faces(Cone(2, [(1, 0), ray])).cones)
                          + list(faces(Cone(2, [ray, (0, 1)])).cones))


def scenario_chart():
    s = ingest(fixture_path("blowup_example.json"))
    logs = [s.matrices["Nx"], s.matrices["Ny"]]
    return s, source_chart("U", ["x", "y"], logs, s.filtrations["psi0"])


def test_source_chart_is_smooth():
    _, ch = scenario_chart()
    assert ch.index() == 1
    assert ch.substitution() == {"x": "x", "y": "y"}
    assert ch.divisors == ("D_x", "D_y")


def test_source_chart_needs_commuting_logs():
    a, b = Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]])
    with pytest.raises(ValueError):
        source_chart("U", ["x", "y"], [a, b])


def test_ordinary_blowup_charts():
    s, ch = scenario_chart()
    plan = subdivision_to_blowups(QUAD, split_at((1, 1)), ch)
    assert [st.weights for st in plan.steps] == [(1, 1)]
    subs = {c.name: c.substitution() for c in plan.charts}
    assert subs == {"U.1": {"x": "x", "y": "x*y'"}, "U.2": {"x": "x'*y", "y": "y"}}
    assert [c.divisors for c in plan.charts] == [("E_1", "D_y"), ("D_x", "E_1")]
    assert all(c.index() == 1 for c in plan.charts)
    assert exceptional_logs_integral(plan.charts)
    assert "blow-up with weights [1, 1]" in plan.script()


def test_weighted_blowup_has_an_orbifold_chart():
    _, ch = scenario_chart()
    plan = subdivision_to_blowups(QUAD, split_at((1, 2)), ch)
    assert plan.steps[0].weights == (1, 2)
    assert sorted(c.index() for c in plan.charts) == [1, 2]
    assert "weighted blow-up" in plan.script()
    subs = {c.name: c.substitution() for c in plan.charts}
    assert subs == {"U.1": {"x": "x", "y": "x^2*y'"}, "U.2": {"x": "x'*y", "y": "y^2"}}


def test_log_of_ray_is_linear():
    s, ch = scenario_chart()
    Nx, Ny = ch.source_logs
    assert log_of_ray((2, 3), ch.source_logs) == Nx * 2 + Ny * 3
    for c in subdivision_to_blowups(QUAD, split_at((1, 1)), ch).charts:
        assert c.logs == tuple(log_of_ray(r, ch.source_logs) for r in c.rays)


def test_plan_without_chart_still_records_steps():
    plan = subdivision_to_blowups(QUAD, split_at((1, 1)))
    assert len(plan.steps) == 1 and not plan.charts
    assert plan.final.same_cones(split_at((1, 1)))
    assert plan.to_json()["final"]


def test_two_step_plan_in_lexicographic_order():
    target = ConeComplex.of(2, [f for g in [[(1, 0), (2, 1)], [(2, 1), (1, 1)], [(1, 1), (0, 1)]]
                                for f in faces(Cone(2, g)).cones])
    plan = subdivision_to_blowups(QUAD, target)
    assert [st.weights for st in plan.steps] == [(1, 1), (2, 1)]
    assert plan.final.same_cones(target)


def test_non_refinement_is_rejected():
    with pytest.raises(NotARefinement):
        subdivision_to_blowups(QUAD, faces(Cone(2, [(1, 0), (-1, 1)])))
    with pytest.raises(NotARefinement):
        subdivision_to_blowups(Cone(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)]),
                               faces(Cone(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])))


def test_interior_ray_is_one_star():
    c = Cone(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    cells = [Cone(3, [(1, 0, 0), (0, 1, 0), (1, 1, 1)]), Cone(3, [(0, 1, 0), (0, 0, 1), (1, 1, 1)]),
             Cone(3, [(1, 0, 0), (0, 0, 1), (1, 1, 1)])]
    target = ConeComplex.of(3, [f for x in cells for f in faces(x).cones])
    assert len(subdivision_to_blowups(c, target).steps) == 1


def test_target_not_reached_by_stars():
    # rays a = e1+e2 and b = e2+e3 on two edges; stars in lexicographic order (b, then a)
    # give the diagonal e1-b, so the triangulation using the diagonal a-e3 is not reached
    e1, e2, e3, a, b = (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1)
    c = Cone(3, [e1, e2, e3])

    def tri(*cells):
        return ConeComplex.of(3, [f for x in cells for f in faces(Cone(3, x)).cones])

    plan = subdivision_to_blowups(c, tri([a, e2, b], [e1, a, b], [e1, b, e3]))
    assert [st.weights for st in plan.steps] == [b, a]
    with pytest.raises(NotReachableByStars):
        subdivision_to_blowups(c, tri([a, e2, b], [a, b, e3], [e1, a, e3]))


def test_center_outside_chart():
    _, ch = scenario_chart()
    with pytest.raises(CenterOutside):
        blowup_chart(ch, BlowupStep((1, -1), []))


def test_boundary_orbit_on_source_and_exceptional():
    s, ch = scenario_chart()
    cone, lim, cert = boundary_orbit(ch, ["x", "y"], s.lattice)
    assert len(cone.generators) == 2 and cert.ok
    plan = subdivision_to_blowups(QUAD, split_at((1, 1)), ch)
    for c in plan.charts:
        cone, lim, cert = boundary_orbit(c, ["E_1"], s.lattice)
        assert cone.generators == (ch.source_logs[0] + ch.source_logs[1],)
        assert cert.ok
    with pytest.raises(KeyError):
        boundary_orbit(ch, ["z"])


def test_boundary_orbit_needs_a_limit():
    s, ch = scenario_chart()
    bare = source_chart("U", ["x", "y"], list(ch.source_logs))
    with pytest.raises(MissingLimit):
        boundary_orbit(bare, ["x"])
