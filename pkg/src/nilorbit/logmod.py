"""Cone subdivisions as toric blow-ups of polydisk charts.

A chart of the base near a normal crossing point has coordinates u_1..u_n and
monodromy logarithms attached to the first k of them.  The source cone is
<N_1, ..., N_k>; a chart after blowing up corresponds to a simplicial cone
<v_1, ..., v_k> with v_i integer vectors in the coordinates of the source
cone.  The original coordinates are the monomials

    x_j = prod_i u_i^{(v_i)_j}

and the log attached to u_i is sum_j (v_i)_j N_j.  A star subdivision at a
ray r replaces, in every chart whose cone contains r, the chart by one chart
for each v_i with a positive coefficient in r.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cones import Cone, ConeComplex, faces, refines, star_subdivide_complex
from .errors import (CenterOutside, MissingLimit, NotARefinement,
                     NotReachableByStars)
from .exact import Matrix, exp_nilpotent
from .hodge import (HodgeFiltration, NilpotentCone, SymplecticLattice,
                    is_nilpotent_orbit)


@dataclass(frozen=True)
class LocalChart:
    """Polydisk chart: ``labels`` name the coordinates, ``rays[i]`` is the cone vector of coordinate i.

    Only the first ``len(rays)`` coordinates carry a divisor with monodromy;
    the remaining ones are untouched disk directions.
    """

    name: str
    labels: tuple
    rays: tuple                 # integer vectors in the source cone coordinates
    source_logs: tuple          # N_1..N_k of the source cone
    limit: HodgeFiltration | None = None
    divisors: tuple = ()        # divisor name for each ray coordinate
    source_labels: tuple = ()   # labels of the original coordinates

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return len(self.rays)

    @property
    def logs(self) -> tuple:
        return tuple(log_of_ray(r, self.source_logs) for r in self.rays)

    def cone(self) -> Cone:
        return Cone(self.k, self.rays)

    def index(self) -> int:
        """|det| of the ray matrix: 1 for a smooth chart, the orbifold order otherwise."""
        return abs(int(Matrix([list(r) for r in self.rays]).det()))

    def substitution(self) -> dict:
        """Original coordinate label -> monomial in this chart's coordinates."""
        out = {}
        src = self.source_labels or tuple(f"x_{j + 1}" for j in range(self.k))
        for j, lab in enumerate(src):
            factors = []
            for i, r in enumerate(self.rays):
                e = r[j]
                if e == 1:
                    factors.append(self.labels[i])
                elif e:
                    factors.append(f"{self.labels[i]}^{e}")
            out[lab] = "*".join(factors) if factors else "1"
        for lab in self.labels[self.k:]:
            out[lab] = lab
        return out

    def to_json(self):
        return {"name": self.name, "labels": list(self.labels), "divisors": list(self.divisors),
                "rays": [[int(a) for a in r] for r in self.rays],
                "logs": [m.to_json() for m in self.logs], "index": self.index(),
                "substitution": self.substitution()}


def log_of_ray(r: Sequence, logs: Sequence[Matrix]) -> Matrix:
    out = logs[0] * 0
    for c, n in zip(r, logs):
        if c:
            out = out + n * c
    return out


def source_chart(name: str, labels: Sequence[str], logs: Sequence[Matrix],
                 limit: HodgeFiltration | None = None) -> LocalChart:
    k = len(logs)
    for i, a in enumerate(logs):
        for b in logs[i + 1:]:
            if not (a @ b - b @ a).is_zero():
                raise ValueError("chart logs must commute")
    rays = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    return LocalChart(name, tuple(labels), rays, tuple(logs), limit,
                      tuple(f"D_{labels[i]}" for i in range(k)), tuple(labels[:k]))


@dataclass
class BlowupStep:
    center: tuple               # primitive ray in source cone coordinates
    affected: list              # names of the charts that contain the center
    results: list = field(default_factory=list)  # LocalChart produced
    exceptional: str = ""

    @property
    def weights(self) -> tuple:
        return tuple(int(a) for a in self.center)

    def to_json(self):
        return {"center": list(self.weights), "exceptional_divisor": self.exceptional,
                "affected": self.affected, "charts": [c.to_json() for c in self.results]}


@dataclass
class SubdivisionPlan:
    source: Cone
    steps: list
    final: ConeComplex
    charts: list = field(default_factory=list)

    def to_json(self):
        return {"source": [list(map(int, g)) for g in self.source.generators],
                "steps": [s.to_json() for s in self.steps],
                "final": [[list(map(int, g)) for g in c.generators] for c in self.final.cones],
                "charts": [c.to_json() for c in self.charts]}

    def script(self) -> str:
        """Human readable blow-up script."""
        lines = [f"# blow-up plan: {len(self.steps)} step(s)"]
        for n, s in enumerate(self.steps, 1):
            kind = "blow-up" if all(w in (0, 1) for w in s.weights) else "weighted blow-up"
            lines.append(f"step {n}: {kind} with weights {list(s.weights)}, exceptional divisor {s.exceptional}")
            lines.append(f"  affected charts: {', '.join(s.affected)}")
            for c in s.results:
                sub = ", ".join(f"{k} = {v}" for k, v in c.substitution().items())
                lines.append(f"  chart {c.name} ({', '.join(c.labels)}): {sub}; index {c.index()}")
        return "\n".join(lines) + "\n"


def _coefficients(rays: Sequence, r: Sequence) -> tuple | None:
    m = Matrix([list(v) for v in rays]).T
    return m.solve(tuple(Fraction(a) for a in r))


def blowup_chart(chart: LocalChart, step: BlowupStep, exceptional: str | None = None) -> list[LocalChart]:
    """Charts covering the blow-up of ``chart`` along the stratum of ``step.center``."""
    r = tuple(step.center)
    c = _coefficients(chart.rays, r)
    if c is None or any(x < 0 for x in c) or not any(c):
        raise CenterOutside(f"center {list(r)} is not in the monodromy cone of chart {chart.name}")
    ename = exceptional or step.exceptional or "E"
    out = []
    for i, ci in enumerate(c):
        if ci <= 0:
            continue
        rays = list(chart.rays)
        rays[i] = r
        labels = list(chart.labels)
        divisors = list(chart.divisors)
        # the exceptional coordinate takes the slot (and label) of the replaced one
        for j in range(chart.k):
            if j != i and c[j] > 0:
                labels[j] = labels[j] + "'"
        divisors[i] = ename
        out.append(LocalChart(f"{chart.name}.{i + 1}", tuple(labels), tuple(rays), chart.source_logs,
                              chart.limit, tuple(divisors), chart.source_labels))
    return out


def subdivision_to_blowups(sigma: Cone, target: ConeComplex, chart: LocalChart | None = None) -> SubdivisionPlan:
    """Star subdivisions at the new rays of ``target`` (lexicographic order) realising it.

    ``sigma`` must be simplicial and ``target`` a fan refining its closure.
    With ``chart`` the plan also carries the charts after every step.
    """
    if not sigma.is_simplicial():
        raise NotARefinement("source cone must be simplicial")
    coarse = faces(sigma)
    if not refines(target, coarse) or not all(coarse.cones[0].dim == c.dim for c in target.cones):
        raise NotARefinement("target does not refine the closed source cone")
    old = set(sigma.generators)
    new_rays = sorted(r for r in target.rays() if r not in old)
    current = coarse
    steps = []
    charts = [chart] if chart is not None else []
    for n, r in enumerate(new_rays, 1):
        affected = [c for c in current.maximal() if c.contains_closed(r)]
        step = BlowupStep(tuple(r), [], [], f"E_{n}")
        current = star_subdivide_complex(current, r)
        if chart is not None:
            nxt = []
            for ch in charts:
                if ch.cone().contains_closed(r):
                    step.affected.append(ch.name)
                    res = blowup_chart(ch, step)
                    step.results.extend(res)
                    nxt.extend(res)
                else:
                    nxt.append(ch)
            charts = nxt
        else:
            step.affected = [str(list(map(int, g))) for c in affected for g in [c.interior_point()]]
        steps.append(step)
    if not current.same_cones(target):
        raise NotReachableByStars("target fan is not reached by star subdivisions at its own rays "
                                  "in lexicographic order")
    return SubdivisionPlan(sigma, steps, current, charts)


def boundary_orbit(chart: LocalChart, stratum: Sequence[str], lattice: SymplecticLattice | None = None):
    """(cone of the stratum's logs, limit filtration), with an optional orbit check.

    ``stratum`` lists coordinate labels (or divisor names) set to zero.  The
    label is relative to this chart's coordinates.
    """
    if chart.limit is None:
        raise MissingLimit(f"chart {chart.name} carries no limit filtration")
    idx = []
    for s in stratum:
        if s in chart.labels[:chart.k]:
            idx.append(chart.labels.index(s))
        elif s in chart.divisors:
            idx.append(chart.divisors.index(s))
        elif s in chart.labels:
            continue  # a disk direction carries no monodromy
        else:
            raise KeyError(f"{s!r} is not a coordinate of chart {chart.name}")
    logs = chart.logs
    cone = NilpotentCone(tuple(logs[i] for i in sorted(set(idx))))
    cert = None
    if lattice is not None and cone.generators:
        cert = is_nilpotent_orbit(cone, chart.limit, lattice)
    return cone, chart.limit, cert


def exceptional_logs_integral(charts: Sequence[LocalChart]) -> bool:
    return all(exp_nilpotent(m).is_integral() for c in charts for m in c.logs)
