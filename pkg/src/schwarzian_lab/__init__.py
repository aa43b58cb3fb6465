"""Numerical toolkit for small-Schwarzian sufficient conditions.

Computes the sharp constants behind Schwarzian-derivative criteria for
meromorphic convexity and for band-bounded convexity quantities, classifies
user-supplied functions into the associated disk classes by grid sampling,
and rebuilds the extremal constructions by integrating w'' + p w = 0 along
radial rays.
"""

__version__ = "0.1.0"

from . import classify, constants, expr, jets, ode, series  # noqa: F401
from .classify import (  # noqa: F401
    KaplanProfile,
    check_cbeta,
    check_convex_order,
    check_kaplan,
    check_merom_convex,
    check_merom_starlike,
    check_starlike_order,
    coefficient_relation_check,
    schwarzian_at,
    starlike_implication_probe,
    sup_schwarzian,
)
from .constants import c_alpha, chiang_order, delta_max, phi_psi, tan_deficit  # noqa: F401
from .expr import FnExpr, eval_jet, parse, pretty  # noqa: F401
from .grids import ClassVerdict, GridSpec  # noqa: F401
from .jets import Jet3, fd_jet_oracle  # noqa: F401
from .ode import (  # noqa: F401
    PotentialP,
    RaySolution,
    RealProfile,
    cot_starlike_margin,
    gabriel_functional,
    gabriel_identity_residual,
    map_from_potential,
    ratio_schwarzian_check,
    sharpness_witness,
    solve_ray,
)
from .series import TruncatedSeries, analytic_series, pole_series  # noqa: F401
