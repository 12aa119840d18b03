"""Scenario files: JSON input describing a lattice, cones, filtrations and charts.

Entries are strings "p/q" or "a+b i" (plain integers are accepted too) so no
binary floating point ever enters.  ``ingest`` parses, validates against the
bundled JSON schema and then checks every mathematical invariant, raising an
``InputError`` subclass that names the offending field.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import InvariantError, NilorbitError, ParseError, SchemaError
from .exact import (I_UNIT, Matrix, exp_nilpotent, format_entry, log_unipotent,
                    parse_entry)
from .fans import ConeSystem, GroupElement
from .hodge import HodgeFiltration, LMHSType, NilpotentCone, SymplecticLattice

SCHEMA_VERSION = 1


def schema() -> dict:
    return json.loads(resources.files("nilorbit").joinpath("schema/scenario.schema.json").read_text())


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture, e.g. ``fixture_path("cy3_iv_h1.json")``."""
    return Path(str(resources.files("nilorbit").joinpath("fixtures", name)))


def fixture_names() -> list[str]:
    return sorted(p.name for p in resources.files("nilorbit").joinpath("fixtures").iterdir()
                  if p.name.endswith(".json"))


def _entry(x, where: str):
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"{where}: entries must be integers or strings, got {x!r}")
    if isinstance(x, int):
        return x
    try:
        return parse_entry(x)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{where}: cannot parse entry {x!r}") from e


def _matrix(data, where: str) -> Matrix:
    if not data or any(len(r) != len(data[0]) for r in data):
        raise ParseError(f"{where}: ragged or empty matrix")
    return Matrix([[_entry(a, f"{where}[{i}][{j}]") for j, a in enumerate(r)] for i, r in enumerate(data)])


def _vector(data, where: str) -> tuple:
    return tuple(_entry(a, f"{where}[{i}]") for i, a in enumerate(data))


@dataclass
class ConeSpec:
    name: str
    generators: list      # Matrix
    witness: str | None
    sources: list         # names or inline markers, for serialisation


@dataclass
class ChartSpec:
    name: str
    dim: int
    labels: list
    logs: list            # names of matrices attached to the first coordinates
    limit: str | None


@dataclass
class Scenario:
    raw: dict
    lattice: SymplecticLattice
    matrices: dict
    cones: list
    filtrations: dict
    group_elements: dict
    phi: tuple
    charts: list
    manifest: dict
    options: dict
    source: str = "<memory>"
    basis_labels: list = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.raw.get("name", "")

    def cone(self, name: str) -> ConeSpec:
        for c in self.cones:
            if c.name == name:
                return c
        raise InvariantError(f"cones: no cone named {name!r}")

    def nilpotent_cone(self, name: str) -> NilpotentCone:
        return NilpotentCone(tuple(self.cone(name).generators))

    def witness(self, name: str) -> HodgeFiltration | None:
        c = self.cone(name)
        return self.filtrations[c.witness] if c.witness else None

    def to_system(self, phi=None) -> ConeSystem:
        return ConeSystem(self.lattice, [NilpotentCone(tuple(c.generators)) for c in self.cones],
                          [GroupElement(m, n) for n, m in self.group_elements.items()],
                          tuple(phi or self.phi),
                          [self.filtrations[c.witness] if c.witness else None for c in self.cones],
                          [c.name for c in self.cones])

    def to_dict(self) -> dict:
        return copy.deepcopy(self.raw)

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.raw, sort_keys=True).encode()).hexdigest()[:16]


# --- parsing ---------------------------------------------------------------

def _parse_filtration(name, spec, n, matrices):
    where = f"filtrations.{name}"
    if "of" in spec:
        base = spec["of"]
        return ("derived", base, spec)
    if "steps" in spec:
        steps = {int(p): [_vector(v, f"{where}.steps.{p}") for v in vs] for p, vs in spec["steps"].items()}
        return ("ready", HodgeFiltration.from_pieces(n, steps), None)
    pieces = {int(p): [_vector(v, f"{where}.pieces.{p}") for v in vs] for p, vs in spec["pieces"].items()}
    return ("ready", HodgeFiltration.from_pieces(n, pieces), None)


def _resolve_filtrations(raw_f, n, matrices):
    out, pending = {}, {}
    for name, spec in raw_f.items():
        kind, val, extra = _parse_filtration(name, spec, n, matrices)
        if kind == "ready":
            out[name] = val
        else:
            pending[name] = spec
    while pending:
        progressed = False
        for name in list(pending):
            spec = pending[name]
            if spec["of"] not in out:
                if spec["of"] not in pending:
                    raise InvariantError(f"filtrations.{name}: unknown base filtration {spec['of']!r}")
                continue
            total = None
            for m in spec.get("exp_i_sum", []):
                if m not in matrices:
                    raise InvariantError(f"filtrations.{name}: unknown matrix {m!r}")
                total = matrices[m] if total is None else total + matrices[m]
            F = out[spec["of"]]
            if total is not None:
                scale = _entry(spec.get("scale", 1), f"filtrations.{name}.scale")
                F = F.transform(exp_nilpotent(total * (I_UNIT * scale)))
            out[name] = F
            del pending[name]
            progressed = True
        if not progressed:
            raise InvariantError(f"filtrations: circular definitions among {sorted(pending)}")
    return out


def from_dict(data: dict, source: str = "<memory>") -> Scenario:
    try:
        jsonschema.validate(data, schema())
    except jsonschema.ValidationError as e:
        path = ".".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{path}: {e.message}") from None
    lat = data["lattice"]
    Q = _matrix(lat["Q"], "lattice.Q")
    try:
        lattice = SymplecticLattice(Q, lat["weight"], tuple(lat["hodge_numbers"]), lat.get("sign", 1))
    except InvariantError as e:
        raise InvariantError(f"lattice: {e}") from None
    n = lattice.rank
    matrices = {}
    for name, m in data.get("matrices", {}).items():
        matrices[name] = _matrix(m, f"matrices.{name}")
        if matrices[name].shape != (n, n):
            raise InvariantError(f"matrices.{name}: shape {matrices[name].shape}, lattice rank {n}")
    for name, spec in data.get("unipotents", {}).items():
        T = _matrix(spec, f"unipotents.{name}")
        if not T.is_integral():
            raise InvariantError(f"unipotents.{name}: unipotent integrality")
        try:
            matrices[name] = log_unipotent(T)
        except NilorbitError as e:
            raise InvariantError(f"unipotents.{name}: {e}") from None
    filtrations = _resolve_filtrations(data.get("filtrations", {}), n, matrices)
    for name, F in filtrations.items():
        if F.n != n:
            raise InvariantError(f"filtrations.{name}: ambient dimension {F.n}, lattice rank {n}")
        d = F.defects(lattice)
        if d:
            raise InvariantError(f"filtrations.{name}: {'; '.join(d)}")
    cones = []
    for k, c in enumerate(data.get("cones", [])):
        cname = c.get("name", f"cone_{k + 1}")
        gens = []
        for j, g in enumerate(c["generators"]):
            where = f"cones.{cname}.generators[{j}]"
            if isinstance(g, str):
                if g not in matrices:
                    raise InvariantError(f"{where}: unknown matrix {g!r}")
                m = matrices[g]
            else:
                m = _matrix(g, where)
            try:
                lattice.check_element(m, where)
            except InvariantError as e:
                raise InvariantError(str(e)) from None
            gens.append(m)
        try:
            NilpotentCone(tuple(gens))
        except InvariantError:
            raise InvariantError(f"cones.{cname}: generators commute") from None
        w = c.get("witness")
        if w is not None and w not in filtrations:
            raise InvariantError(f"cones.{cname}.witness: unknown filtration {w!r}")
        cones.append(ConeSpec(cname, gens, w, list(c["generators"])))
    names = [c.name for c in cones]
    if len(set(names)) != len(names):
        raise InvariantError("cones: duplicate cone names")
    groups = {}
    for name, m in data.get("group_elements", {}).items():
        g = _matrix(m, f"group_elements.{name}")
        if not g.is_integral():
            raise InvariantError(f"group_elements.{name}: integrality")
        if g.T @ Q @ g != Q:
            raise InvariantError(f"group_elements.{name}: preserves Q")
        groups[name] = g
    phi = tuple(data.get("phi", ["I", "IV"]))
    for t in phi:
        if t not in ("I", "II", "III", "IV"):
            try:
                LMHSType.parse(t)
            except ValueError:
                raise InvariantError(f"phi: unknown type {t!r}") from None
    charts = []
    for c in data.get("charts", []):
        where = f"charts.{c['name']}"
        for m in c.get("logs", []):
            if m not in matrices:
                raise InvariantError(f"{where}.logs: unknown matrix {m!r}")
        if len(c.get("logs", [])) > c["dim"]:
            raise InvariantError(f"{where}: more logs than coordinates")
        if len(c.get("labels", [])) != c["dim"]:
            raise InvariantError(f"{where}.labels: expected {c['dim']} labels")
        lim = c.get("limit")
        if lim is not None and lim not in filtrations:
            raise InvariantError(f"{where}.limit: unknown filtration {lim!r}")
        charts.append(ChartSpec(c["name"], c["dim"], list(c["labels"]), list(c.get("logs", [])), lim))
    return Scenario(copy.deepcopy(data), lattice, matrices, cones, filtrations, groups, phi, charts,
                    dict(data.get("manifest", {})), dict(data.get("options", {})), source,
                    list(data.get("basis_labels", [])))


def ingest(path) -> Scenario:
    p = Path(path)
    if not p.exists():
        candidate = fixture_path(str(path))
        if candidate.exists():
            p = candidate
        else:
            raise ParseError(f"{path}: no such file")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{p.name}: invalid JSON ({e.msg} at line {e.lineno})") from None
    return from_dict(data, str(p))


def dumps(s: Scenario) -> str:
    return json.dumps(s.to_dict(), indent=1, sort_keys=False) + "\n"


# --- writing helpers used by fixture builders and reductions ---------------

def matrix_json(m: Matrix) -> list:
    return m.to_json()


def vector_json(v) -> list:
    return [format_entry(a) for a in v]


def filtration_json(F: HodgeFiltration) -> dict:
    return {"steps": {str(p): [vector_json(v) for v in F[p].basis] for p in range(1, F.top + 1)}}
