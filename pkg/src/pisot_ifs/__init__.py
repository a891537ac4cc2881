"""Certified Fourier analysis of self-similar measures with Pisot contraction ratios."""

__version__ = "0.1.0"

from .balls import CertifiedComplex, CertifiedReal, working_precision
from .errors import *  # noqa: F401,F403
from .ifs import (
    GenericSystem,
    PisotFormSystem,
    ProbabilityVector,
    canonicalize,
    classify_uniqueness,
    degenerate_limit,
    dimension_threshold_roots,
    similarity_dimension,
)
from .limit import LimitEvaluator, M_hat, mc_limit_check, m_hat, sweep
from .numberfield import FieldElement, PisotField, embed, in_T, power_mod_one, trace, verify_pisot
from .serialization import load_system, parse_system
from .transform import NuEvaluator, nu_hat, sample_nu
