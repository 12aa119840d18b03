"""Regenerate the bundled scenario fixtures in src/nilorbit/fixtures/.

Every matrix is built here from a short exact recipe and every fixture is
re-ingested and classified before it is written, so a broken recipe stops
the script instead of producing a bad file.

    python scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

from nilorbit.exact import I_UNIT, Matrix, exp_nilpotent
from nilorbit.fans import integral_exp_multiple
from nilorbit.hodge import (HodgeFiltration, NilpotentCone, classify_lmhs,
                            is_nilpotent_orbit, standard_form)
from nilorbit.scenario import filtration_json, from_dict, vector_json

OUT = Path(__file__).resolve().parent.parent / "src" / "nilorbit" / "fixtures"


def mat(entries: dict, n: int) -> Matrix:
    m = [[0] * n for _ in range(n)]
    for (i, j), v in entries.items():
        m[i][j] += v
    return Matrix(m)


def unit(k: int, n: int) -> tuple:
    return tuple(1 if j == k else 0 for j in range(n))


def base(name, description, Q, weight, hodge, labels=None, sign=1):
    d = {"schema_version": 1, "name": name, "description": description,
         "lattice": {"Q": Q.to_json(), "weight": weight, "hodge_numbers": list(hodge), "sign": sign}}
    if labels:
        d["basis_labels"] = labels
    return d


# --- weight 1 --------------------------------------------------------------

Q1 = standard_form((1,))
Q2 = Matrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])


def NS(S) -> Matrix:
    """Weight-1 nilpotent [[0, S], [0, 0]] on (e_1, e_2, e^1, e^2)."""
    return Matrix([[0, 0, S[0][0], S[0][1]], [0, 0, S[1][0], S[1][1]], [0] * 4, [0] * 4])


F_HT2 = HodgeFiltration.from_pieces(4, {1: [(I_UNIT, 0, 1, 0), (0, I_UNIT, 0, 1)]})


def elliptic_ht():
    d = base("elliptic_ht", "elliptic curve degeneration: rank 2, N maps e^1 to e_1, F^1 spanned by e^1 + z e_1",
             Q1, 1, (1, 1), ["e_1", "e^1"])
    z = Fraction(1, 3) + 2 * I_UNIT
    d["matrices"] = {"N": mat({(0, 1): 1}, 2).to_json()}
    d["filtrations"] = {"F": {"pieces": {"1": [vector_json((z, 1))]}}}
    d["cones"] = [{"name": "sigma", "generators": ["N"], "witness": "F"}]
    d["unipotents"] = {"T": mat({(0, 0): 1, (1, 1): 1, (0, 1): 1}, 2).to_json()}
    d["phi"] = ["I"]
    d["manifest"] = {"types": {"sigma": "HT"}}
    return d


def weight1_witness():
    d = base("weight1_witness", "two crossing 2-cones of rank-one forms on a g=2 weight-1 lattice, "
             "with one integral witness flipping the off-diagonal sign", Q2, 1, (2, 2),
             ["e_1", "e_2", "e^1", "e^2"])
    d["matrices"] = {"Nx": NS([[1, 0], [0, 0]]).to_json(), "Ny": NS([[0, 0], [0, 1]]).to_json(),
                     "Nu": NS([[1, 1], [1, 1]]).to_json(), "Nv": NS([[1, -1], [-1, 1]]).to_json()}
    d["filtrations"] = {"F": filtration_json(F_HT2)}
    d["cones"] = [{"name": "sigma", "generators": ["Nx", "Ny"], "witness": "F"},
                  {"name": "tau", "generators": ["Nu", "Nv"], "witness": "F"}]
    d["group_elements"] = {"gamma": mat({(0, 0): 1, (1, 1): -1, (2, 2): 1, (3, 3): -1}, 4).to_json()}
    d["phi"] = ["I"]
    return d


def chamber_example():
    d = base("chamber_example", "two overlapping 2-cones in one plane of a g=2 weight-1 lattice",
             Q2, 1, (2, 2), ["e_1", "e_2", "e^1", "e^2"])
    d["matrices"] = {"Nx": NS([[1, 0], [0, 0]]).to_json(), "Ny": NS([[0, 0], [0, 1]]).to_json(),
                     "A": NS([[2, 0], [0, 1]]).to_json(), "B": NS([[1, 0], [0, 2]]).to_json()}
    d["filtrations"] = {"F": filtration_json(F_HT2)}
    d["cones"] = [{"name": "sigma", "generators": ["Nx", "Ny"], "witness": "F"},
                  {"name": "tau", "generators": ["A", "B"], "witness": "F"}]
    d["phi"] = ["I"]
    return d


def blowup_example():
    d = base("blowup_example", "two-parameter degeneration with monodromy logs N_x, N_y and a second cone "
             "<N_x, N_x+N_y>; resolved by one blow-up of the origin", Q2, 1, (2, 2),
             ["e_1", "e_2", "e^1", "e^2"])
    d["matrices"] = {"Nx": NS([[1, 0], [0, 0]]).to_json(), "Ny": NS([[0, 0], [0, 1]]).to_json(),
                     "Nxy": NS([[1, 0], [0, 1]]).to_json()}
    d["filtrations"] = {"psi0": filtration_json(F_HT2)}
    d["cones"] = [{"name": "sigma", "generators": ["Nx", "Ny"], "witness": "psi0"},
                  {"name": "tau", "generators": ["Nx", "Nxy"], "witness": "psi0"}]
    d["charts"] = [{"name": "U", "dim": 2, "labels": ["x", "y"], "logs": ["Nx", "Ny"], "limit": "psi0"}]
    d["phi"] = ["I"]
    return d


# --- weight 3, (1,1,1,1) -----------------------------------------------------

Q4 = standard_form((1, 1))
LAB4 = ["f_0", "f_1", "f^1", "f^0"]
N_I = mat({(0, 3): 1}, 4)
F_I = HodgeFiltration.from_pieces(4, {3: [(0, 1, I_UNIT, 0)], 2: [unit(3, 4)], 1: [unit(0, 4)]})
N_IV = mat({(2, 3): 1, (1, 2): -1, (0, 1): -1}, 4)
F_IV = HodgeFiltration.from_pieces(4, {3: [unit(3, 4)], 2: [unit(2, 4)], 1: [unit(1, 4)]})


def cy3_i_h1(z=None):
    name = "cy3_i_h1" if z is None else "cy3_i_h1_z"
    desc = "(1,1,1,1) weight-3 type I_1 degeneration, N maps f^0 to f_0"
    d = base(name, desc, Q4, 3, (1, 1, 1, 1), LAB4)
    d["matrices"] = {"N": N_I.to_json()}
    F = F_I if z is None else F_I.transform(exp_nilpotent(N_I * z))
    if z is not None:
        d["description"] += f"; limit filtration moved by exp(zN) with z = {z}"
    d["filtrations"] = {"F": filtration_json(F)}
    d["cones"] = [{"name": "sigma", "generators": ["N"], "witness": "F"}]
    d["group_elements"] = {"T": exp_nilpotent(N_I).to_json()}
    d["phi"] = ["I", "IV"]
    d["manifest"] = {"types": {"sigma": "I_1"}}
    return d


def cy3_iv_h1():
    d = base("cy3_iv_h1", "(1,1,1,1) weight-3 type IV_1 degeneration (maximal unipotent monodromy)",
             Q4, 3, (1, 1, 1, 1), ["w_-", "e_1", "e^1", "w_+"])
    d["matrices"] = {"N": N_IV.to_json()}
    d["filtrations"] = {"F_split": filtration_json(F_IV),
                        "F": {"of": "F_split", "exp_i_sum": ["N"]}}
    d["cones"] = [{"name": "sigma", "generators": ["N"], "witness": "F"}]
    k = integral_exp_multiple(N_IV)
    d["group_elements"] = {f"T{k}": exp_nilpotent(N_IV * k).to_json()}
    d["phi"] = ["I", "IV"]
    d["manifest"] = {"types": {"sigma": "IV_1"}}
    return d


def cy3_iv_pair():
    M = mat({(0, 3): 1}, 4)
    d = base("cy3_iv_pair", "two distinct type IV 2-cones with the same weight filtration and the same quotient "
             "image, sharing an interior ray", Q4, 3, (1, 1, 1, 1), ["w_-", "e_1", "e^1", "w_+"])
    d["matrices"] = {"N": N_IV.to_json(), "M": M.to_json(), "NpM": (N_IV + M).to_json(),
                     "NmM": (N_IV - M).to_json()}
    d["filtrations"] = {"F": filtration_json(F_IV)}
    d["cones"] = [{"name": "sigma", "generators": ["N", "NpM"], "witness": "F"},
                  {"name": "tau", "generators": ["NmM", "NpM"], "witness": "F"}]
    d["phi"] = ["I", "IV"]
    # no filtration can serve both cones; F only fixes the adapted basis
    d["manifest"] = {"orbits": False}
    return d


def bad_q():
    d = base("bad_q", "lattice form that is not antisymmetric", Matrix([[0, 1], [1, 0]]), 1, (1, 1))
    return d


# --- weight 3, (1,2,2,1): synthetic cone census ------------------------------

Q6 = standard_form((1, 2))
E, EH = {0: 1, 1: 2}, {0: 4, 1: 3}
KAPPA = {(0, 0, 0): 1, (1, 1, 1): 1, (0, 0, 1): 2, (0, 1, 1): 2}


def N6(a, B) -> Matrix:
    """w_+ -> sum a_k e^k,  e^k -> sum_j B_jk e_j,  e_k -> -a_k w_-  (basis w_-, e_1, e_2, e^2, e^1, w_+)."""
    m = {}
    for k in range(2):
        m[(EH[k], 5)] = m.get((EH[k], 5), 0) + a[k]
        m[(0, E[k])] = m.get((0, E[k]), 0) - a[k]
        for j in range(2):
            m[(E[j], EH[k])] = m.get((E[j], EH[k]), 0) + B[j][k]
    return mat(m, 6)


def _kappa(i, j, k):
    return KAPPA[tuple(sorted((i, j, k)))]


def NT(t) -> Matrix:
    """Type IV element of the large complex structure cone in direction t."""
    B = [[-sum(t[k] * _kappa(k, i, j) for k in range(2)) for j in range(2)] for i in range(2)]
    return N6(t, B)


def NU(u) -> Matrix:
    """Type I element with rank-one block u u^T."""
    return N6((0, 0), [[u[0] * u[0], u[0] * u[1]], [u[1] * u[0], u[1] * u[1]]])


def ht14_like():
    n = 6
    d = base("ht14_like", "synthetic rank-6 (1,2,2,1) cone system with three IV/IV, three IV/I and six I/I "
             "2-cones; the swap of the two e-directions is the only witness", Q6, 3, (1, 2, 2, 1),
             ["w_-", "e_1", "e_2", "e^2", "e^1", "w_+"])
    mats = {}
    iv = {"x": ((1, 0), (1, 1)), "y": ((1, 1), (0, 1)), "z": ((2, 1), (1, 2))}
    ivi = {"0": ((1, 1), (1, -1)), "1": ((2, 1), (1, -2)), "2": ((1, 2), (2, -1))}
    ii = {"1": ((1, 0), (0, 1)), "2": ((1, 1), (1, -1)), "3": ((1, 0), (1, 1)),
          "4": ((0, 1), (1, 1)), "5": ((1, 2), (2, 1)), "6": ((1, -2), (2, -1))}

    def tname(t):
        return "T_" + "_".join(str(x).replace("-", "m") for x in t)

    def uname(u):
        return "U_" + "_".join(str(x).replace("-", "m") for x in u)

    F_split = HodgeFiltration.from_pieces(n, {3: [unit(5, n)], 2: [unit(4, n), unit(3, n)],
                                                1: [unit(1, n), unit(2, n)]})
    F_I3 = HodgeFiltration.from_pieces(n, {3: [(1, 0, 0, 0, 0, I_UNIT)], 2: [unit(4, n), unit(3, n)],
                                             1: [unit(1, n), unit(2, n)]})
    filts = {"F_split": filtration_json(F_split), "F_I": filtration_json(F_I3)}
    cones, types = [], {}
    for k, (a, b) in iv.items():
        for t in (a, b):
            mats[tname(t)] = NT(t).to_json()
        nm = f"sigma_{k}"
        filts[f"F_{nm}"] = {"of": "F_split", "exp_i_sum": [tname(a), tname(b)]}
        cones.append({"name": nm, "generators": [tname(a), tname(b)], "witness": f"F_{nm}"})
        types[nm] = "IV_2|IV_2|IV_2"
    for k, (t, u) in ivi.items():
        mats[tname(t)] = NT(t).to_json()
        mats[uname(u)] = NU(u).to_json()
        nm = f"sigma_{k}"
        filts[f"F_{nm}"] = {"of": "F_split", "exp_i_sum": [tname(t), uname(u)]}
        cones.append({"name": nm, "generators": [tname(t), uname(u)], "witness": f"F_{nm}"})
        types[nm] = "IV_2|IV_2|I_1"
    for k, (u, v) in ii.items():
        mats[uname(u)] = NU(u).to_json()
        mats[uname(v)] = NU(v).to_json()
        nm = f"tau_{k}"
        filts[f"F_{nm}"] = {"of": "F_I", "exp_i_sum": [uname(u), uname(v)]}
        cones.append({"name": nm, "generators": [uname(u), uname(v)], "witness": f"F_{nm}"})
        types[nm] = "I_1|I_2|I_1"
    d["matrices"] = mats
    d["filtrations"] = filts
    d["cones"] = cones
    P = mat({(0, 0): 1, (1, 2): 1, (2, 1): 1, (3, 4): 1, (4, 3): 1, (5, 5): 1}, n)
    d["group_elements"] = {"swap": P.to_json()}
    d["phi"] = ["I", "IV"]
    d["manifest"] = {"types": types}
    return d


FIXTURES = {
    "elliptic_ht": elliptic_ht,
    "weight1_witness": weight1_witness,
    "chamber_example": chamber_example,
    "blowup_example": blowup_example,
    "cy3_i_h1": cy3_i_h1,
    "cy3_i_h1_z": lambda: cy3_i_h1(Fraction(1, 2) + I_UNIT),
    "cy3_iv_h1": cy3_iv_h1,
    "cy3_iv_pair": cy3_iv_pair,
    "ht14_like": ht14_like,
}


def _census(s, cone, F):
    parts = [NilpotentCone((g,)) for g in cone.generators]
    seq = [parts[0], cone, parts[1]] if len(parts) == 2 else [cone]
    return "|".join(classify_lmhs(c, F, s.lattice, require_orbit=False).tag for c in seq)


def check(d: dict) -> list[str]:
    s = from_dict(d)
    problems = []
    for c in s.cones:
        F = s.filtrations[c.witness]
        cone = NilpotentCone(tuple(c.generators))
        cert = is_nilpotent_orbit(cone, F, s.lattice)
        if not cert.ok and s.manifest.get("orbits", True):
            problems.append(f"{c.name}: not an orbit ({', '.join(cert.failed)})")
        want = s.manifest.get("types", {}).get(c.name)
        if want is not None:
            got = _census(s, cone, F) if "|" in want else classify_lmhs(cone, F, s.lattice).tag
            if got != want:
                problems.append(f"{c.name}: manifest says {want}, classifier says {got}")
    return problems


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    bad = 0
    for name, make in FIXTURES.items():
        d = make()
        problems = check(d)
        for p in problems:
            print(f"{name}: {p}", file=sys.stderr)
        bad += bool(problems)
        (OUT / f"{name}.json").write_text(json.dumps(d, indent=1) + "\n")
        print(f"wrote {name}.json")
    (OUT / "bad_q.json").write_text(json.dumps(bad_q(), indent=1) + "\n")
    print("wrote bad_q.json (invalid on purpose)")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
