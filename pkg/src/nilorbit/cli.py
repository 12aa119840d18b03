"""Command line entry point.

    nilorbit ingest SCENARIO
    nilorbit run COMMAND SCENARIO [--json | --md] [--seed N] [--phi I,IV] [--max-dim N] [--out PATH]
    nilorbit fixtures

Exit status: 0 when every verdict passes, 1 when some verdict fails, 2 on
input errors (bad file, schema, invariants, unknown command).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .cones import (ConeComplex, chamber_subdivision, faces, independent_basis,
                    is_fan, matrix_cone)
from .errors import InputError, NilorbitError, UnknownCommand
from .fans import QUALIFIER, build_weak_fan, fan_check, same_system, strong_compatibility
from .hodge import (NilpotentCone, classify_lmhs, cone_weight_filtration,
                    is_nilpotent_orbit)
from .logmod import (boundary_orbit, exceptional_logs_integral, source_chart,
                     subdivision_to_blowups)
from .reductions import type_I_restrict, type_IV_quotient
from .scenario import (Scenario, filtration_json, fixture_names, ingest,
                       vector_json)

COMMANDS = ("jm", "classify", "check-orbit", "check-fan", "build-fan", "reduce", "logmod", "subdivide")


class Report:
    def __init__(self, command: str, scenario: Scenario):
        self.command = command
        self.scenario = scenario
        self.verdicts: dict = {}
        self.results: dict = {}
        self.lines: list = []

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def verdict(self, name: str, ok: bool):
        self.verdicts[name] = bool(ok)

    def to_json(self) -> dict:
        return {"command": self.command, "scenario": self.scenario.name, "ok": self.ok,
                "qualifier": QUALIFIER, "verdicts": self.verdicts, "results": self.results,
                "provenance": {"input_sha256": self.scenario.digest(), "tool_version": __version__}}

    def to_markdown(self) -> str:
        out = [f"# {self.command}: {self.scenario.name}", "", f"Verdicts {QUALIFIER}.", ""]
        out += self.lines
        out += ["", "| verdict | result |", "|---|---|"]
        out += [f"| {k} | {'pass' if v else 'FAIL'} |" for k, v in self.verdicts.items()]
        out += ["", f"overall: {'pass' if self.ok else 'FAIL'}"]
        return "\n".join(out) + "\n"


# --- commands --------------------------------------------------------------

def _cones_with_witness(s: Scenario):
    for c in s.cones:
        yield c, NilpotentCone(tuple(c.generators)), (s.filtrations[c.witness] if c.witness else None)


def cmd_jm(s: Scenario, args, rep: Report):
    rng = random.Random(args.seed)
    for spec, cone, _ in _cones_with_witness(s):
        try:
            W = cone_weight_filtration(cone, rng)
            rep.verdict(f"{spec.name}: interior agreement", True)
        except NilorbitError as e:
            rep.verdict(f"{spec.name}: interior agreement", False)
            rep.results[spec.name] = {"error": str(e)}
            continue
        dims = {str(k): W[k].dim for k in W.indices()}
        rep.results[spec.name] = {"dims": dims,
                                  "steps": {str(k): [vector_json(v) for v in W[k].basis] for k in W.indices()}}
        rep.lines.append(f"- {spec.name}: dim W_k = {dims}")


def _census(s: Scenario, cone: NilpotentCone, F):
    """Types of (edge, interior, edge) for 2-cones, else just the cone."""
    lat = s.lattice
    tags = []
    parts = [NilpotentCone((g,)) for g in cone.generators]
    if len(parts) == 2:
        seq = [parts[0], cone, parts[1]]
    else:
        seq = [cone]
    for c in seq:
        try:
            tags.append(classify_lmhs(c, F, lat, require_orbit=False).tag)
        except NilorbitError as e:
            tags.append(f"?({type(e).__name__})")
    return "|".join(tags)


def cmd_classify(s: Scenario, args, rep: Report):
    expect = s.manifest.get("types", {})
    for spec, cone, F in _cones_with_witness(s):
        if F is None:
            continue
        cert = is_nilpotent_orbit(cone, F, s.lattice)
        rep.verdict(f"{spec.name}: nilpotent orbit", cert.ok)
        try:
            t = classify_lmhs(cone, F, s.lattice, require_orbit=False).tag
        except NilorbitError as e:
            t = f"unknown ({e})"
        res = {"type": t, "orbit": cert.ok}
        line = f"- {spec.name}: {t}"
        if spec.name in expect:
            census = _census(s, cone, F)
            res["census"] = census
            rep.verdict(f"{spec.name}: manifest {expect[spec.name]}", census == expect[spec.name])
            line += f"  (edges and interior: {census})"
        rep.results[spec.name] = res
        rep.lines.append(line)


def cmd_check_orbit(s: Scenario, args, rep: Report):
    for spec, cone, F in _cones_with_witness(s):
        if F is None:
            continue
        cert = is_nilpotent_orbit(cone, F, s.lattice)
        rep.verdict(spec.name, cert.ok)
        rep.results[spec.name] = cert.to_json()
        rep.lines.append(f"- {spec.name}: {'orbit' if cert.ok else 'not an orbit, failed ' + ', '.join(cert.failed)}")


def cmd_check_fan(s: Scenario, args, rep: Report):
    system = s.to_system(args.phi)
    fr = fan_check(system)
    sc = strong_compatibility(system)
    for k, v in fr.verdicts.items():
        rep.verdict(k, v)
    rep.verdict("strong_compatibility", sc.ok)
    rep.results["fan"] = fr.to_json()
    rep.results["strong_compatibility"] = sc.to_json()
    rep.lines.append(fr.to_markdown())


def system_to_scenario(s: Scenario, system) -> dict:
    """The refined cone system written as a scenario sharing the input's lattice and filtrations."""
    raw = s.to_dict()
    fnames = {}
    filts = {}
    for i, F in enumerate(system.orbit_witnesses):
        if F is None:
            continue
        key = id(F)
        if key not in fnames:
            nm = next((n for n, G in s.filtrations.items() if G == F), None) or f"F_{len(fnames) + 1}"
            fnames[key] = nm
            filts[nm] = filtration_json(F)
    raw["filtrations"] = filts
    raw["matrices"] = {}
    raw.pop("unipotents", None)
    raw["cones"] = []
    for name, c, F in zip(system.names, system.cones, system.orbit_witnesses):
        entry = {"name": name, "generators": [g.to_json() for g in c.generators]}
        if F is not None:
            entry["witness"] = fnames[id(F)]
        raw["cones"].append(entry)
    raw["charts"] = []
    raw["name"] = f"{s.name}-refined"
    raw["provenance"] = {"source": s.name, "operation": "build-fan", "input_sha256": s.digest()}
    return raw


def cmd_build_fan(s: Scenario, args, rep: Report):
    system = s.to_system(args.phi)
    refined, fr = build_weak_fan(system)
    for k, v in fr.verdicts.items():
        rep.verdict(k, v)
    again, _ = build_weak_fan(refined)
    rep.verdict("idempotent", same_system(refined, again))
    rep.results["report"] = fr.to_json()
    out = system_to_scenario(s, refined)
    rep.results["refined"] = out
    rep.lines.append(f"refined {len(system.cones)} generating cones into {len(refined.cones)} cells")
    rep.lines.append(fr.to_markdown())
    if args.out:
        Path(args.out).write_text(json.dumps(out, indent=1) + "\n")


def reduced_to_scenario(s: Scenario, spec_name: str, red) -> dict:
    lat = red.lattice
    F = filtration_json(red.F)
    return {
        "schema_version": 1,
        "name": f"{s.name}-{spec_name}-{red.kind}",
        "description": f"weight-1 reduction ({red.kind}) of cone {spec_name}",
        "lattice": {"Q": lat.Q.to_json(), "weight": 1, "hodge_numbers": list(lat.hodge_numbers), "sign": lat.sign},
        "basis_labels": list(red.labels),
        "matrices": {f"N_{i + 1}": g.to_json() for i, g in enumerate(red.cone.generators)},
        "filtrations": {"F": F},
        "cones": [{"name": spec_name, "generators": [f"N_{i + 1}" for i in range(len(red.cone.generators))],
                   "witness": "F"}],
        "group_elements": {f"g_{i + 1}": g.to_json() for i, g in enumerate(red.group_elements)
                           if g.is_integral()},
        "phi": ["I"],
        "provenance": dict(red.provenance, source=s.name, cone=spec_name,
                           index_denominator=red.index_denominator,
                           reduced_basis=[vector_json(v) for v in red.basis]),
    }


def cmd_reduce(s: Scenario, args, rep: Report):
    gammas = list(s.group_elements.values())
    outs = {}
    for spec, cone, F in _cones_with_witness(s):
        if F is None:
            continue
        try:
            t = classify_lmhs(cone, F, s.lattice)
        except NilorbitError as e:
            rep.results[spec.name] = {"skipped": str(e)}
            continue
        if t.kind == "I":
            red = type_I_restrict(cone, F, s.lattice, gammas)
        elif t.kind == "IV":
            red = type_IV_quotient(cone, F, s.lattice, gammas)
        else:
            rep.results[spec.name] = {"skipped": f"type {t.tag} has no reduction"}
            continue
        rep.verdict(f"{spec.name}: {red.kind}", red.ok)
        data = reduced_to_scenario(s, spec.name, red)
        outs[spec.name] = data
        rep.results[spec.name] = {"source_type": t.tag, "reduced_type": red.reduced_type.tag,
                                  "reduced_orbit": red.polarized.ok if red.polarized else None,
                                  "checks": red.checks.to_json(), "scenario": data}
        pol = "polarized" if red.polarized and red.polarized.ok else "not polarized"
        rep.lines.append(f"- {spec.name}: {t.tag} -> {red.reduced_type.tag} on rank {red.lattice.rank} ({pol})")
    if args.out and outs:
        Path(args.out).write_text(json.dumps(outs if len(outs) > 1 else next(iter(outs.values())), indent=1) + "\n")


def _target_for_chart(s: Scenario, logs):
    """Chamber subdivision of the scenario cones lying in the span of the chart logs."""
    basis = list(logs)
    k = len(basis)
    cones = []
    for spec in s.cones:
        try:
            c = matrix_cone(spec.generators, basis)
        except NilorbitError:
            continue
        cones.extend(faces(c).cones)
    cx = ConeComplex.of(k, cones, tuple(basis))
    return chamber_subdivision(cx)


def _combination(weights, names) -> str:
    terms = []
    for w, n in zip(weights, names):
        if w:
            terms.append(n if w == 1 else f"{w}*{n}")
    return "+".join(terms).replace("+-", "-") or "0"


def cmd_logmod(s: Scenario, args, rep: Report):
    if not s.charts:
        raise InputError("charts: logmod needs at least one chart")
    for ch in s.charts:
        logs = [s.matrices[m] for m in ch.logs]
        limit = s.filtrations[ch.limit] if ch.limit else None
        chart = source_chart(ch.name, ch.labels, logs, limit)
        sigma = matrix_cone(logs, logs)
        target = _target_for_chart(s, logs)
        plan = subdivision_to_blowups(sigma, target.face_closure() if not target.is_face_closed() else target, chart)
        rep.verdict(f"{ch.name}: plan realises the target", plan.final.same_cones(target))
        rep.verdict(f"{ch.name}: integral logs", exceptional_logs_integral(plan.charts))
        orbits = {}
        for step in plan.steps:
            labels = []
            for c in plan.charts:
                if step.exceptional in c.divisors:
                    cone, lim, cert = boundary_orbit(c, [step.exceptional], s.lattice if limit else None)
                    labels.append((c.name, cone.key()))
                    orbits.setdefault(step.exceptional, []).append(
                        {"chart": c.name, "cone": [g.to_json() for g in cone.generators],
                         "orbit": cert.ok if cert else None})
                    if cert is not None:
                        rep.verdict(f"{ch.name}: ({step.exceptional} in {c.name}) is a nilpotent orbit", cert.ok)
            rep.verdict(f"{ch.name}: label constant along {step.exceptional}", len({k for _, k in labels}) <= 1)
        rep.results[ch.name] = {"plan": plan.to_json(), "script": plan.script(), "boundary_orbits": orbits}
        rep.lines.append(plan.script())
        for step in plan.steps:
            log = _combination(step.weights, ch.logs)
            rep.results[ch.name].setdefault("exceptional_logs", {})[step.exceptional] = log
            rep.lines.append(f"- {step.exceptional}: N_E = {log}; boundary orbit ({log}, {ch.limit or 'no limit'})")


def cmd_subdivide(s: Scenario, args, rep: Report):
    mats = [g for c in s.cones for g in c.generators]
    basis = independent_basis(mats)
    if args.max_dim is not None and len(basis) > args.max_dim:
        rep.verdict("span within --max-dim", False)
        rep.results["span_dim"] = len(basis)
        return
    cones = []
    for c in s.cones:
        cones.extend(faces(matrix_cone(c.generators, basis)).cones)
    cx = ConeComplex.of(len(basis), cones, tuple(basis))
    out = chamber_subdivision(cx)
    ok, bad = is_fan(out)
    rep.verdict("output is a fan", ok)
    by = out.by_dim()
    rep.results["span_dim"] = len(basis)
    rep.results["cones"] = [[list(map(int, g)) for g in c.generators] for c in out.cones]
    rep.results["counts"] = {str(k): len(v) for k, v in sorted(by.items())}
    rep.lines.append(f"{len(out)} cells in a span of dimension {len(basis)}: "
                     + ", ".join(f"{len(v)} of dim {k}" for k, v in sorted(by.items())))


DISPATCH = {"jm": cmd_jm, "classify": cmd_classify, "check-orbit": cmd_check_orbit,
            "check-fan": cmd_check_fan, "build-fan": cmd_build_fan, "reduce": cmd_reduce,
            "logmod": cmd_logmod, "subdivide": cmd_subdivide}


def run(command: str, scenario: Scenario, args) -> Report:
    if command not in DISPATCH:
        raise UnknownCommand(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    rep = Report(command, scenario)
    DISPATCH[command](scenario, args, rep)
    return rep


# --- argument handling -----------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilorbit", description="Nilpotent orbits, fans and reductions in exact arithmetic.")
    p.add_argument("--version", action="version", version=f"nilorbit {__version__}")
    sub = p.add_subparsers(dest="action", required=True)
    g = sub.add_parser("ingest", help="validate a scenario file")
    g.add_argument("scenario")
    g.add_argument("--json", action="store_true")
    r = sub.add_parser("run", help="run a command on a scenario")
    r.add_argument("command", help=", ".join(COMMANDS))
    r.add_argument("scenario")
    fmt = r.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="print the JSON report")
    fmt.add_argument("--md", action="store_true", help="print the markdown report (default)")
    r.add_argument("--seed", type=int, default=0, help="seed for interior-point sampling")
    r.add_argument("--phi", type=lambda t: tuple(x for x in t.split(",") if x), default=None,
                   help="comma separated admitted types, e.g. I,IV")
    r.add_argument("--max-dim", type=int, default=None, help="refuse chamber computations in larger spans")
    r.add_argument("--out", default=None, help="write the refined or reduced scenario here")
    sub.add_parser("fixtures", help="list bundled fixtures")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.action == "fixtures":
            print("\n".join(fixture_names()))
            return 0
        scenario = ingest(args.scenario)
        if args.action == "ingest":
            info = {"name": scenario.name, "rank": scenario.lattice.rank, "weight": scenario.lattice.weight,
                    "cones": [c.name for c in scenario.cones], "filtrations": sorted(scenario.filtrations),
                    "charts": [c.name for c in scenario.charts], "valid": True}
            print(json.dumps(info, indent=1) if args.json else f"{scenario.name}: valid")
            return 0
        rep = run(args.command, scenario, args)
    except InputError as e:
        print(f"input error ({type(e).__name__}): {e}", file=sys.stderr)
        return 2
    except NilorbitError as e:
        print(f"error ({type(e).__name__}): {e}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(rep.to_json(), indent=1, sort_keys=True))
    else:
        print(rep.to_markdown(), end="")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
