"""Certified Morse data for even unimodular lattices under Gaussian-core energy.

The package decides, with exact arithmetic, whether a lattice in the catalog
is a critical point of the energy at every Gaussian parameter alpha, and at
critical lattices computes the full traceless Hessian spectrum with certified
error radii, classifying each point as a local minimum, local maximum, or
saddle.  See README.md for the command-line interface.
"""

from .latcat import LatticeEntry, UnknownLattice, get, list_catalog, make_entry
from .modforms import QSeries, eisenstein, discriminant, theta_even_unimodular
from .morse import (
    Certificate,
    CertificateFails,
    CriticalityResult,
    Inapplicable,
    NotCritical,
    SpectrumReport,
    ToleranceUnreachable,
    alpha_sweep,
    criticality,
    hessian_spectrum,
    large_alpha_class,
    noncritical_certificate,
)
from .rootsys import RootSystem, make_irreducible, parse_root_system
from .symspace import QSpectrum, closed_spectrum, numeric_spectrum

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertificateFails",
    "CriticalityResult",
    "Inapplicable",
    "LatticeEntry",
    "NotCritical",
    "QSeries",
    "QSpectrum",
    "RootSystem",
    "SpectrumReport",
    "ToleranceUnreachable",
    "UnknownLattice",
    "alpha_sweep",
    "closed_spectrum",
    "criticality",
    "discriminant",
    "eisenstein",
    "get",
    "hessian_spectrum",
    "large_alpha_class",
    "list_catalog",
    "make_entry",
    "make_irreducible",
    "noncritical_certificate",
    "numeric_spectrum",
    "parse_root_system",
    "theta_even_unimodular",
    "__version__",
]
