"""Exact nilpotent orbits, limiting mixed Hodge structures, cone fans and reductions."""

__version__ = "0.1.0"

from .errors import NilorbitError, InputError  # noqa: E402
from .exact import Matrix, Subspace  # noqa: E402
from .hodge import (SymplecticLattice, HodgeFiltration, NilpotentCone,  # noqa: E402
                    jm_weight_filtration, cone_weight_filtration, deligne_splitting,
                    is_nilpotent_orbit, classify_lmhs)
from .cones import Cone, ConeComplex, chamber_subdivision, star_subdivision, is_fan  # noqa: E402
from .fans import ConeSystem, weak_fan_check, strong_compatibility, build_weak_fan  # noqa: E402
from .reductions import type_I_restrict, type_IV_quotient, bracket_certificate  # noqa: E402
from .logmod import subdivision_to_blowups, source_chart, boundary_orbit  # noqa: E402
from .scenario import ingest, from_dict  # noqa: E402

__all__ = [
    "NilorbitError", "InputError", "Matrix", "Subspace",
    "SymplecticLattice", "HodgeFiltration", "NilpotentCone", "jm_weight_filtration",
    "cone_weight_filtration", "deligne_splitting", "is_nilpotent_orbit", "classify_lmhs",
    "Cone", "ConeComplex", "chamber_subdivision", "star_subdivision", "is_fan",
    "ConeSystem", "weak_fan_check", "strong_compatibility", "build_weak_fan",
    "type_I_restrict", "type_IV_quotient", "bracket_certificate",
    "subdivision_to_blowups", "source_chart", "boundary_orbit",
    "ingest", "from_dict", "__version__",
]
