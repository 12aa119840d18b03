"""Fan, weak fan and strong compatibility checks on finite witness data.

A ``ConeSystem`` is a finite list of generating nilpotent cones with optional
orbit witnesses F, a finite list of integral symplectic group elements and a
set of admitted LMHS types.  All verdicts are relative to the supplied
witnesses: the full Ad-orbit of the generating cones is never enumerated.

The checked collection is the face closure of {Ad_g s : s generating, g in
witnesses or the identity}.  Each member carries the orbit witness of the
cone it came from (transported as g F for Ad_g s).

Pairs of cones are compared only inside groups with equal weight filtration:
two cones that meet and both underlie nilpotent orbits have the same W.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from .cones import (Cone, ConeComplex, _sign_normal, arrangement_forms,
                    chamber_subdivision, combine, cone_inside, coordinates_in,
                    faces, independent_basis, intersect, is_fan, matrix_cone)
from .errors import InvariantError, MissingWitness, MixedRegime, WrongShape
from .exact import Matrix, exp_nilpotent, preserves_form
from .hodge import (HodgeFiltration, LMHSType, NilpotentCone,
                    SymplecticLattice, WeightFiltration, classify_lmhs,
                    is_nilpotent_orbit, jm_weight_filtration,
                    primitive_matrix_key, zero_cone_weight)
from .reductions import (adapted_symplectic_basis, bracket_certificate,
                         quotient_block, same_quotient)

QUALIFIER = "relative to supplied witnesses"
SUPPORTED = {"pure", "HT", "I", "IV"}
MAX_K = 24


@dataclass(frozen=True)
class GroupElement:
    matrix: Matrix
    name: str = ""

    def inverse(self) -> Matrix:
        return self.matrix.inverse()


@dataclass
class ConeSystem:
    lattice: SymplecticLattice
    cones: list                     # NilpotentCone
    witnesses: list = field(default_factory=list)        # GroupElement
    phi: tuple = ("I", "IV")
    orbit_witnesses: list = field(default_factory=list)  # HodgeFiltration or None, parallel to cones
    names: list = field(default_factory=list)

    def __post_init__(self):
        self.cones = list(self.cones)
        self.witnesses = [w if isinstance(w, GroupElement) else GroupElement(w) for w in self.witnesses]
        if not self.orbit_witnesses:
            self.orbit_witnesses = [None] * len(self.cones)
        self.orbit_witnesses = list(self.orbit_witnesses)
        if len(self.orbit_witnesses) != len(self.cones):
            raise InvariantError("orbit witness list does not match the cone list")
        if not self.names:
            self.names = [f"sigma_{i + 1}" for i in range(len(self.cones))]
        self.phi = tuple(self.phi)
        for c, name in zip(self.cones, self.names):
            for k, g in enumerate(c.generators):
                self.lattice.check_element(g, f"{name} generator {k + 1}")
        for k, w in enumerate(self.witnesses):
            if not w.matrix.is_integral():
                raise InvariantError(f"group element {w.name or k + 1}: integrality")
            if not preserves_form(w.matrix, self.lattice.Q):
                raise InvariantError(f"group element {w.name or k + 1}: preserves Q")

    def witness_for(self, cone: NilpotentCone):
        key = cone.key()
        for c, f in zip(self.cones, self.orbit_witnesses):
            if c.key() == key:
                return f
        return None


@dataclass
class FanReport:
    command: str
    verdicts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    unknown: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self, timing: bool = False):
        out = {"command": self.command, "qualifier": QUALIFIER, "ok": self.ok,
               "verdicts": dict(self.verdicts), "violations": self.violations,
               "unknown": self.unknown, "details": self.details, "notes": self.notes}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out

    def to_markdown(self) -> str:
        lines = [f"## {self.command}", "", f"Verdicts {QUALIFIER}.", "", "| check | result |", "|---|---|"]
        for k, v in self.verdicts.items():
            lines.append(f"| {k} | {'pass' if v else 'FAIL'} |")
        if self.violations:
            lines += ["", "### Violations", ""]
            lines += [f"- {v.get('kind')}: {v.get('pair', v.get('cone', ''))}" for v in self.violations]
        for e in self.details.get("ill_formed", []):
            lines += ["", f"Ill-formed pair {e['pair']}: {e['btilde']['reason']}"]
        if self.unknown:
            lines += ["", "### Undecided pairs", ""]
            lines += [f"- {u.get('pair')}: {u.get('reason')}" for u in self.unknown]
        if self.notes:
            lines += ["", "### Notes", ""] + [f"- {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


# --- canonical matrix cones ------------------------------------------------

def canonical_cone(mats: Sequence[Matrix]) -> NilpotentCone:
    """Cone with primitive integral extreme rays in a fixed order."""
    mats = [m for m in mats if not m.is_zero()]
    if not mats:
        return NilpotentCone(())
    basis = independent_basis(mats)
    c = matrix_cone(mats, basis)
    return _from_coords(c, basis)


def _primitive_matrix(m: Matrix) -> Matrix:
    n = m.nrows
    v = primitive_matrix_key(m)
    return Matrix([[v[i * n + j] for j in range(n)] for i in range(n)])


def _from_coords(c: Cone, basis) -> NilpotentCone:
    gens = [_primitive_matrix(combine(g, basis)) for g in c.generators]
    gens.sort(key=lambda m: primitive_matrix_key(m))
    return NilpotentCone(tuple(gens))


def _label(cone: NilpotentCone) -> list:
    return [g.to_json() for g in cone.generators]


# --- placed cones ----------------------------------------------------------

@dataclass
class Placed:
    cone: NilpotentCone
    F: HodgeFiltration | None
    origin: str
    parent: int | None = None  # index of the generating cone it descends from

    @property
    def key(self):
        return self.cone.key()


_MEMO: dict = {}


def clear_memo():
    _MEMO.clear()


class _Cache:
    """Memo of weight filtrations and types, keyed by cone and filtration.

    The tables are shared by every run on the same lattice, so a rebuild or a
    re-check of refined output does not redo the Hodge theory.
    """

    def __init__(self, lattice: SymplecticLattice):
        self.lattice = lattice
        lk = (lattice.Q, lattice.weight, lattice.hodge_numbers, lattice.sign)
        self.w, self.types, self.orbit = _MEMO.setdefault(lk, ({}, {}, {}))

    def W(self, cone: NilpotentCone) -> WeightFiltration:
        k = cone.key()
        if k not in self.w:
            n = self.lattice.rank
            self.w[k] = jm_weight_filtration(cone.interior_point()) if cone.generators else zero_cone_weight(n)
        return self.w[k]

    def is_orbit(self, p: Placed) -> bool:
        if p.F is None:
            return False
        k = (p.key, p.F)
        if k not in self.orbit:
            self.orbit[k] = is_nilpotent_orbit(p.cone, p.F, self.lattice).ok
        return self.orbit[k]

    def type(self, p: Placed) -> LMHSType | None:
        if p.F is None:
            return None
        k = (p.key, p.F)
        if k not in self.types:
            try:
                self.types[k] = classify_lmhs(p.cone, p.F, self.lattice, require_orbit=False)
            except Exception:
                self.types[k] = None
        return self.types[k]


def _transport(p: Placed, g: GroupElement, ginv: Matrix) -> Placed:
    cone = canonical_cone([g.matrix @ n @ ginv for n in p.cone.generators])
    F = p.F.transform(g.matrix) if p.F is not None else None
    return Placed(cone, F, f"Ad_{g.name or 'g'}({p.origin})", p.parent)


def _faces_of(p: Placed) -> list[Placed]:
    if not p.cone.generators:
        return [p]
    basis = independent_basis(p.cone.generators)
    c = matrix_cone(p.cone.generators, basis)
    out = []
    for f in faces(c).cones:
        fc = _from_coords(f, basis)
        out.append(Placed(fc, p.F, p.origin if fc.key() == p.key else f"face of {p.origin}", p.parent))
    return out


def placed_family(system: ConeSystem, generating: Sequence[Placed] | None = None) -> list[Placed]:
    """Face closure of the generating cones and their transports, first witness wins on duplicates."""
    if generating is None:
        generating = [Placed(canonical_cone(c.generators), f, name, i)
                      for i, (c, f, name) in enumerate(zip(system.cones, system.orbit_witnesses, system.names))]
    moved = list(generating)
    for g in system.witnesses:
        ginv = g.inverse()
        moved += [_transport(p, g, ginv) for p in generating]
    seen = {}
    for p in moved:
        for f in _faces_of(p):
            if f.key not in seen:
                seen[f.key] = f
    return sorted(seen.values(), key=lambda p: (p.cone.dim if p.cone.generators else 0, p.key))


def _group_by_weight(placed: list[Placed], cache: _Cache) -> list[list[Placed]]:
    groups: list[tuple[WeightFiltration, list]] = []
    for p in placed:
        w = cache.W(p.cone)
        for gw, members in groups:
            if gw == w:
                members.append(p)
                break
        else:
            groups.append((w, [p]))
    return [m for _, m in groups]


def _group_coords(members: list[Placed]):
    mats = [g for p in members for g in p.cone.generators]
    basis = independent_basis(mats)
    return basis, [matrix_cone(p.cone.generators, basis) if basis else Cone(0) for p in members]


# --- strong compatibility --------------------------------------------------

def integral_exp_multiple(n: Matrix, bound: int = MAX_K) -> int | None:
    for k in range(1, bound + 1):
        if exp_nilpotent(n * k).is_integral():
            return k
    return None


def strong_compatibility(system: ConeSystem) -> FanReport:
    t0 = time.perf_counter()
    rep = FanReport("strong_compatibility")
    ks = {}
    ok = True
    for c, name in zip(system.cones, system.names):
        for j, g in enumerate(c.generators):
            k = integral_exp_multiple(g)
            ks[f"{name}[{j + 1}]"] = k
            if k is None:
                ok = False
                rep.violations.append({"kind": "no_integral_exponential", "cone": name, "generator": j + 1,
                                       "bound": MAX_K})
    rep.verdicts["integral_logs"] = ok
    wok = all(w.matrix.is_integral() and preserves_form(w.matrix, system.lattice.Q) for w in system.witnesses)
    rep.verdicts["witnesses_integral_symplectic"] = wok
    rep.details["k"] = ks
    rep.details["ad_closure"] = "definitional: the checked collection is generated by the witness orbit"
    rep.seconds = time.perf_counter() - t0
    return rep


# --- pairwise decisions ----------------------------------------------------

@dataclass
class MeetVerdict:
    verdict: str  # "Shared", "No", "Unknown"
    reason: str
    certificate: dict | None = None

    def to_json(self):
        return {"verdict": self.verdict, "reason": self.reason, "certificate": self.certificate}


def btilde_meet(sigma: NilpotentCone, tau: NilpotentCone, system: ConeSystem,
                F_sigma: HodgeFiltration | None = None, F_tau: HodgeFiltration | None = None,
                cache: _Cache | None = None) -> MeetVerdict:
    """Is there one F making both (sigma, F) and (tau, F) nilpotent orbits?  Assumes sigma ∩ tau is nonempty."""
    lat = system.lattice
    cache = cache or _Cache(lat)
    F_sigma = F_sigma if F_sigma is not None else system.witness_for(sigma)
    F_tau = F_tau if F_tau is not None else system.witness_for(tau)
    ps, pt = Placed(sigma, F_sigma, "sigma"), Placed(tau, F_tau, "tau")
    if cache.W(sigma) != cache.W(tau):
        return MeetVerdict("No", "weight filtrations differ, so no common base point over a shared element")
    for a, b in ((ps, pt), (pt, ps)):
        if a.F is not None and cache.is_orbit(a) and is_nilpotent_orbit(b.cone, a.F, lat).ok:
            return MeetVerdict("Shared", "one orbit witness works for both cones")
    t = cache.type(ps) or cache.type(pt)
    if t is not None and t.kind == "IV" and sigma.key() != tau.key():
        # the bracket argument needs W and a filtration for the adapted basis, not valid orbits
        F = F_sigma if F_sigma is not None else F_tau
        try:
            basis = adapted_symplectic_basis(cache.W(sigma), lat.Q, "CY3_IV")
        except WrongShape as e:
            return MeetVerdict("Unknown", f"no adapted basis: {e}")
        if same_quotient(sigma, tau, basis):
            cert = bracket_certificate(sigma, tau, F, lat)
            if cert.fires:
                return MeetVerdict("No", "distinct type IV cones with equal quotients "
                                   "share no base point", cert.to_json())
    if F_sigma is None or F_tau is None or not (cache.is_orbit(ps) and cache.is_orbit(pt)):
        return MeetVerdict("Unknown", "missing or invalid orbit witness")
    if lat.weight == 1:
        return MeetVerdict("Shared", "weight 1: meeting orbit cones share a base point")
    if t is not None and t.kind == "I":
        return MeetVerdict("Shared", "type I: meeting orbit cones share a base point")
    if t is not None and t.kind == "IV":
        return MeetVerdict("Unknown", "type IV pair with different quotient images")
    return MeetVerdict("Unknown", f"type {t.tag if t else '?'} is outside the decided regimes")


# --- weak fan check --------------------------------------------------------

def _check_placed(placed: list[Placed], system: ConeSystem, cache: _Cache, rep: FanReport):
    groups = _group_by_weight(placed, cache)
    fan_ok, weak_ok = True, True
    n_pairs = n_outside = 0
    for members in groups:
        basis, cs = _group_coords(members)
        if not basis:
            continue
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if cs[i] == cs[j]:
                    continue
                meet = intersect(cs[i], cs[j])
                if meet is None:
                    continue
                n_pairs += 1
                fan_ok = False
                a, b = members[i], members[j]
                pair = [a.origin, b.origin]
                v = btilde_meet(a.cone, b.cone, system, a.F, b.F, cache)
                entry = {"kind": "overlap", "pair": pair, "cones": [_label(a.cone), _label(b.cone)],
                         "meet": _label(_from_coords(meet, basis)), "btilde": v.to_json()}
                ta, tb = cache.type(a), cache.type(b)
                in_phi = any(t is not None and t.in_phi(system.phi) for t in (ta, tb))
                if v.verdict == "Shared" and in_phi:
                    weak_ok = False
                    rep.violations.append(entry)
                elif v.verdict == "Unknown" and in_phi:
                    rep.unknown.append({"pair": pair, "reason": v.reason})
                else:
                    if not in_phi:
                        n_outside += 1
                    if v.certificate is not None:
                        rep.details.setdefault("ill_formed", []).append(entry)
                    rep.details.setdefault("separated_pairs", []).append(entry)
    return fan_ok, weak_ok, n_pairs, n_outside


def weak_fan_check(system: ConeSystem, generating: Sequence[Placed] | None = None) -> FanReport:
    t0 = time.perf_counter()
    rep = FanReport("weak_fan_check")
    cache = _Cache(system.lattice)
    placed = placed_family(system, generating)
    bad = [p.origin for p in placed if p.F is not None and p.parent is not None
           and p.cone.generators and not cache.is_orbit(p)]
    missing = [p.origin for p in placed if p.F is None]
    fan_ok, weak_ok, n_pairs, n_out = _check_placed(placed, system, cache, rep)
    rep.verdicts["face_closed"] = True
    rep.verdicts["orbit_witnesses"] = not bad
    rep.verdicts["weak_fan"] = weak_ok and not rep.unknown
    rep.details["fan"] = fan_ok
    rep.details["cones_checked"] = len(placed)
    rep.details["meeting_pairs"] = n_pairs
    rep.details["pairs_outside_phi"] = n_out
    rep.details["types"] = _type_census(placed, cache)
    if bad:
        rep.details["invalid_witnesses"] = bad
    if missing:
        rep.details["without_witness"] = missing
    if rep.unknown:
        rep.notes.append("undecided pairs are treated as potential violations")
    rep.notes.append("pairs with different weight filtrations are not compared: meeting orbit cones share W")
    rep.seconds = time.perf_counter() - t0
    return rep


def fan_check(system: ConeSystem) -> FanReport:
    """Plain fan axioms on the face closure of the witness orbit."""
    rep = weak_fan_check(system)
    rep.command = "fan_check"
    rep.verdicts["fan"] = rep.details["fan"]
    return rep


def _type_census(placed: list[Placed], cache: _Cache) -> dict:
    out = {}
    for p in placed:
        t = cache.type(p)
        tag = t.tag if t else "?"
        out[tag] = out.get(tag, 0) + 1
    return dict(sorted(out.items()))


# --- construction ----------------------------------------------------------

def _regime(members: list[Placed], cache: _Cache, lattice: SymplecticLattice) -> str:
    if lattice.weight == 1:
        return "weight1"
    kinds = {cache.type(p).kind for p in members if cache.type(p) is not None}
    return "IV" if "IV" in kinds else "standard"


def _quotient_forms(members, basis, cx: ConeComplex, lattice, W):
    """Arrangement pulled back from the images of the group's cones in End(W_1/W_-2)."""
    ab = adapted_symplectic_basis(W, lattice.Q, "CY3_IV")
    images = [quotient_block(b, ab) for b in basis]
    img_basis = independent_basis([m for m in images if not m.is_zero()])
    if not img_basis:
        return []
    cols = [coordinates_in(m, img_basis) for m in images]
    pull = Matrix.from_columns(cols)
    img_cones = []
    for c in cx.maximal():
        gens = [quotient_block(combine(g, basis), ab) for g in c.generators]
        gens = [g for g in gens if not g.is_zero()]
        if gens:
            img_cones.append(matrix_cone(gens, img_basis))
    return arrangement_forms(cx, pullback=pull, image_cones=img_cones)


def _equivariant_forms(forms, basis, witnesses, rounds: int = 8) -> list[tuple]:
    """Close the arrangement under the witnesses that preserve the span of ``basis``.

    Hyperplanes of lower dimensional cones are only defined modulo their
    span's annihilator, so without this closure a cut through one cone need
    not have its transport through the transported cone.
    """
    actions = []
    for g in witnesses:
        ginv = g.inverse()
        for a, b in ((g.matrix, ginv), (ginv, g.matrix)):
            cols = [coordinates_in(a @ m @ b, basis) for m in basis]
            if all(c is not None for c in cols):
                actions.append(Matrix.from_columns(cols).inverse())
    out = set(forms)
    frontier = set(forms)
    for _ in range(rounds):
        new = set()
        for Ai in actions:
            for f in frontier:
                g = tuple(sum(f[i] * Ai[i, j] for i in range(len(f))) for j in range(len(f)))
                g = _sign_normal(g)
                if g not in out:
                    new.add(g)
        if not new:
            break
        out |= new
        frontier = new
    return sorted(out)


def _subdivide_group(cx, members, basis, regime, system, lat, cache) -> ConeComplex:
    forms = arrangement_forms(cx)
    if regime == "IV":
        # quotient cuts on top of the cones' own hyperplanes keep the result a fan
        W = cache.W(members[0].cone)
        forms = sorted(set(forms) | set(_quotient_forms(members, basis, cx, lat, W)))
    forms = _equivariant_forms(forms, basis, system.witnesses)
    return chamber_subdivision(cx, forms)


def build_weak_fan(system: ConeSystem):
    """Refine the witness orbit of the generating cones by chamber subdivision.

    Returns (refined system, report).  The refined generating cones are the
    maximal cells; each inherits the orbit witness of the cone it lies in.
    """
    t0 = time.perf_counter()
    bad_phi = [t for t in system.phi if _phi_kind(t) not in SUPPORTED]
    if bad_phi:
        raise MixedRegime(f"types {bad_phi} are outside the supported regimes (pure, HT, I, IV)")
    missing = [n for n, f in zip(system.names, system.orbit_witnesses) if f is None]
    if missing:
        raise MissingWitness(f"cones without orbit witness: {missing}")
    lat = system.lattice
    cache = _Cache(lat)
    placed = placed_family(system)
    groups = _group_by_weight(placed, cache)
    cells: dict = {}
    group_info = []
    for members in groups:
        basis, cs = _group_coords(members)
        if not basis:
            for p in members:
                cells.setdefault(p.key, p)
            continue
        cx = ConeComplex.of(len(basis), _closure(cs), tuple(basis))
        regime = _regime(members, cache, lat)
        if is_fan(cx)[0]:
            # nothing overlaps: subdividing again would only add cuts
            refined = cx
            group_info.append({"regime": regime, "cones": len(members), "span_dim": len(basis),
                               "cells": len(refined), "fan": True, "subdivided": False})
        else:
            refined = _subdivide_group(cx, members, basis, regime, system, lat, cache)
            group_info.append({"regime": regime, "cones": len(members), "span_dim": len(basis),
                               "cells": len(refined), "fan": is_fan(refined)[0], "subdivided": True})
        for c in refined.cones:
            nc = _from_coords(c, basis)
            if nc.key() in cells:
                continue
            parent = next((p for p, pc in sorted(zip(members, cs), key=lambda t: -t[1].cone_dim)
                           if cone_inside(c, pc)), None)
            if parent is None:
                parent = next(p for p in placed if _inside_matrix(nc, p.cone))
            cells[nc.key()] = Placed(nc, parent.F, f"cell of {parent.origin}", parent.parent)
    out_cx = list(cells.values())
    maximal = _maximal_placed(out_cx)
    names = [f"cell_{i + 1}" for i in range(len(maximal))]
    for p, nm in zip(maximal, names):
        p.origin = f"{nm} ({p.origin})"
    refined = ConeSystem(lat, [p.cone for p in maximal], list(system.witnesses), system.phi,
                         [p.F for p in maximal], names)
    rep = weak_fan_check(refined)
    sc = strong_compatibility(refined)
    rep.command = "build_weak_fan"
    rep.verdicts["strong_compatibility"] = sc.ok
    rep.details["groups"] = group_info
    rep.details["input_cones"] = len(system.cones)
    rep.details["refined_cones"] = len(maximal)
    rep.details["strong_compatibility"] = sc.to_json()
    rep.seconds = time.perf_counter() - t0
    return refined, rep


def _phi_kind(tag: str) -> str:
    if tag in ("I", "II", "III", "IV"):
        return tag
    return LMHSType.parse(tag).kind


def _closure(cs: list[Cone]) -> list[Cone]:
    out = set()
    for c in cs:
        out.update(faces(c).cones)
    return list(out)


def _inside_matrix(a: NilpotentCone, b: NilpotentCone) -> bool:
    basis = independent_basis(list(a.generators) + list(b.generators))
    if not basis:
        return True
    return cone_inside(matrix_cone(a.generators, basis), matrix_cone(b.generators, basis)) if b.generators else not a.generators


def _maximal_placed(ps: list[Placed]) -> list[Placed]:
    """Cells that are not proper faces of other cells, in a deterministic order."""
    face_keys = set()
    for p in ps:
        for f in _faces_of(p):
            if f.key != p.key:
                face_keys.add(f.key)
    out = [p for p in ps if p.key not in face_keys and p.cone.generators]
    return sorted(out, key=lambda p: p.key)


def same_system(a: ConeSystem, b: ConeSystem) -> bool:
    return sorted(c.key() for c in a.cones) == sorted(c.key() for c in b.cones)
