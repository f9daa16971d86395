"""Numerical laboratory for composition-operator dynamics on the real line.

Symbols are smooth strictly monotone maps; the package computes their
iterates and jets, evaluates mixing / hypercyclicity / non-transitivity
criteria as protocol-stamped verdicts with witnesses, solves the unit-step
conjugacy equation H(psi(x)) = H(x) + 1, and runs the explicit
candidate-vector construction at desk scale.
"""

__version__ = "0.1.0"

from .jets import Jet, jet_add, jet_compose, jet_invert, jet_mul, jet_scale
from .symbols import (
    ExtensionSpec,
    Fragment,
    GrowthCertificate,
    Symbol,
    get_symbol,
    make_exp_double,
    make_gauss_perturbed,
    make_sqrt_glide,
    make_tiled_3x,
    make_translation,
    reflect,
    smooth_monotone_extension,
)
from .orbits import OrbitTransport, image_interval, inverse_eval, iterate, transport, transport_jet
from .schwartz import (
    DecayTable,
    Weight,
    default_weight_family,
    evidence_weight_family,
    majorant,
    rapid_decay_test,
    seminorm,
    weight_catalog,
)
from .classify import (
    Verdict,
    check_abel_growth,
    check_hypercyclic_sufficient,
    check_mixing_bijective,
    check_mixing_nonsurjective,
    check_necessary,
    check_not_transitive,
)
from .abel import AbelSolution, abel_implies_dynamics, quasi_conjugacy_check, solve_abel, verify_abel
from .hypvec import Bump, Schedule, assemble_g, default_targets, select_schedule, verify_orbit_approach

__all__ = [
    "Jet", "jet_add", "jet_compose", "jet_invert", "jet_mul", "jet_scale",
    "Symbol", "Fragment", "ExtensionSpec", "GrowthCertificate",
    "get_symbol", "make_translation", "make_sqrt_glide", "make_tiled_3x",
    "make_exp_double", "make_gauss_perturbed", "reflect", "smooth_monotone_extension",
    "OrbitTransport", "iterate", "inverse_eval", "transport", "transport_jet", "image_interval",
    "Weight", "DecayTable", "weight_catalog", "default_weight_family",
    "evidence_weight_family", "majorant", "seminorm", "rapid_decay_test",
    "Verdict", "check_necessary", "check_mixing_bijective", "check_mixing_nonsurjective",
    "check_hypercyclic_sufficient", "check_not_transitive", "check_abel_growth",
    "AbelSolution", "solve_abel", "verify_abel", "quasi_conjugacy_check", "abel_implies_dynamics",
    "Bump", "Schedule", "select_schedule", "assemble_g", "verify_orbit_approach", "default_targets",
]
