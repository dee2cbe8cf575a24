"""Finite presemifield constructions and their invariants over small Galois fields."""

from . import errors
from .census import (
    SweepSummary,
    sweep_A,
    sweep_B,
    sweep_C,
    sweep_twisted,
    sweep_X,
    theorem_equivalence_sweep,
    x_validity_vs_bruteforce,
)
from .families import (
    Presemifield,
    make_A,
    make_B,
    make_C,
    make_dickson,
    make_hughes_kleinfeld,
    make_knuth,
    make_twisted,
    make_X,
    presemifield_from_table,
    reparametrize,
    star_table,
)
from .fields import FieldCtx, build_field
from .semifield import (
    BRUTE_LIMIT,
    Certificate,
    NucleiReport,
    Semifield,
    classify_algebra,
    ganley_presemifield,
    ganley_semifield,
    nuclei_bruteforce,
    nuclei_linear,
    to_semifield,
    verify_presemifield,
)
from .theory import (
    Prediction,
    WKernelSpec,
    b_comm_criterion,
    c_comm_criterion,
    check_prediction,
    classify_commutative_C,
    commutative_catalog,
    number_facts,
    predict_nuclei,
)
from .towers import Tower, build_tower

__version__ = "0.1.0"

__all__ = [
    "BRUTE_LIMIT",
    "Certificate",
    "FieldCtx",
    "NucleiReport",
    "Prediction",
    "Presemifield",
    "Semifield",
    "SweepSummary",
    "Tower",
    "WKernelSpec",
    "b_comm_criterion",
    "build_field",
    "build_tower",
    "c_comm_criterion",
    "check_prediction",
    "classify_algebra",
    "classify_commutative_C",
    "commutative_catalog",
    "errors",
    "ganley_presemifield",
    "ganley_semifield",
    "make_A",
    "make_B",
    "make_C",
    "make_dickson",
    "make_hughes_kleinfeld",
    "make_knuth",
    "make_twisted",
    "make_X",
    "nuclei_bruteforce",
    "nuclei_linear",
    "number_facts",
    "predict_nuclei",
    "presemifield_from_table",
    "reparametrize",
    "star_table",
    "sweep_A",
    "sweep_B",
    "sweep_C",
    "sweep_twisted",
    "sweep_X",
    "theorem_equivalence_sweep",
    "to_semifield",
    "verify_presemifield",
    "x_validity_vs_bruteforce",
]
