"""Pointwise Schwarzian evaluation and disk-grid membership checks.

Each check samples the defining differential inequality of a function
class over a polar grid and reports the worst slack (margin) found, with
the attaining point as witness.  Conditions stated for the full open disk
can only be certified on samples; margins are returned raw so callers can
judge the safety gap themselves.

Functions can be supplied as parsed expressions (``FnExpr`` + parameter
environment) or as any object with an ``eval_jet(z) -> Jet3`` method, such
as the quotient maps built by the radial ODE integrator.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable

from . import expr as expr_mod
from .errors import (
    DivisionByZeroJet,
    DomainError,
    DomainErrorJet,
    NotLocallyUnivalent,
    PoleInGrid,
    ZeroOfF,
    ZeroOfG,
)
from .grids import ClassVerdict, GridSpec, ordered_map, verdict_from_margins
from .jets import Jet3

# |f'(z)| at or below this is treated as a vanishing derivative.
UNIVALENCE_GUARD = 1e-12
# |f(z)| at or below this is treated as a zero of the function.
ZERO_GUARD = 1e-12

JetSource = Callable[[complex], Jet3]


def _check_order(order: float) -> None:
    if not 0.0 <= order < 1.0:
        raise DomainError(f"order {order} outside [0, 1)")


def _jet_source(f, env=None) -> JetSource:
    if isinstance(f, expr_mod.FnExpr):
        bound = dict(env or {})
        return lambda z: expr_mod.eval_jet(f, z, bound)
    if hasattr(f, "eval_jet"):
        return f.eval_jet
    if callable(f):
        return f
    raise TypeError(f"cannot evaluate jets of {type(f).__name__}")


def _schwarzian_of_jet(j: Jet3, z: complex) -> complex:
    if abs(j.d1) <= UNIVALENCE_GUARD:
        raise NotLocallyUnivalent(z)
    q = j.d2 / j.d1
    return j.d3 / j.d1 - 1.5 * q * q


def schwarzian_at(f, env, z: complex) -> complex:
    """S_f(z) = f'''/f' - (3/2)(f''/f')^2 from one jet evaluation."""
    src = _jet_source(f, env)
    return _schwarzian_of_jet(src(z), z)


def sup_schwarzian(f, env, grid: GridSpec) -> float:
    """Max of |S_f| over the grid: a lower bound for the true supremum."""
    src = _jet_source(f, env)
    angles = grid.angles()

    def ring(r: float) -> float:
        best = 0.0
        for t in angles:
            z = r * cmath.exp(1j * t)
            best = max(best, abs(_schwarzian_of_jet(src(z), z)))
        return best

    return max(ordered_map(ring, grid.radii()))


def _scan(
    margin_at: Callable[[complex], float],
    grid: GridSpec,
    virtual: tuple[float, complex] | None = None,
) -> ClassVerdict:
    """Evaluate a margin over the grid; margin_at may return NaN to skip."""
    angles = grid.angles()

    def ring(r: float) -> list[tuple[float, complex]]:
        out = []
        for t in angles:
            z = r * cmath.exp(1j * t)
            out.append((margin_at(z), z))
        return out

    rows = ordered_map(ring, grid.radii())
    margins: list[tuple[float, complex]] = [] if virtual is None else [virtual]
    skipped = 0
    for row in rows:
        for m, z in row:
            if math.isnan(m):
                skipped += 1
            else:
                margins.append((m, z))
    if not margins:
        return ClassVerdict(True, math.inf, 0j, 0, skipped)
    return verdict_from_margins(margins, skipped=skipped)


def _guarded(src: JetSource) -> JetSource:
    """Translate jet pole/domain errors into PoleInGrid with a witness."""

    def wrapped(z: complex) -> Jet3:
        try:
            return src(z)
        except (DivisionByZeroJet, DomainErrorJet):
            raise PoleInGrid(z) from None

    return wrapped


def _zeros_inside(src: JetSource, r: float, n: int) -> tuple[int, complex]:
    """Zero count of f on |z| < r via the argument principle on the circle,
    together with the circle sample of smallest |f| (the zero witness
    heuristic).  Needs n fine enough that the phase moves < pi per step."""
    tau = 2.0 * math.pi
    total = 0.0
    prev = None
    smallest = math.inf
    witness = r + 0j
    for j in range(n + 1):
        z = r * cmath.exp(1j * tau * (j % n) / n)
        w = src(z).d0
        if abs(w) < smallest:
            smallest, witness = abs(w), z
        ph = cmath.phase(w)
        if prev is not None:
            d = ph - prev
            while d > math.pi:
                d -= tau
            while d < -math.pi:
                d += tau
            total += d
        prev = ph
    return round(total / tau), witness


def check_merom_convex(f, env, alpha: float, grid: GridSpec) -> ClassVerdict:
    """-Re(1 + z f''/f') > alpha on the disk, for a simple-pole function.

    The quantity tends to 1 as z -> 0 for any simple-pole normalized f, so
    the origin enters as a virtual sample with margin 1 - alpha.
    """
    _check_order(alpha)
    if grid.r_min < 1e-3:
        raise ValueError("grid r_min below 1e-3 cannot keep clear of the pole at 0")
    src = _guarded(_jet_source(f, env))

    def margin_at(z: complex) -> float:
        j = src(z)
        if abs(j.d1) <= UNIVALENCE_GUARD:
            raise NotLocallyUnivalent(z)
        return -(1.0 + (z * j.d2 / j.d1).real) - alpha

    return _scan(margin_at, grid, virtual=(1.0 - alpha, 0j))


def check_merom_starlike(f, env, alpha: float, grid: GridSpec) -> ClassVerdict:
    """-Re(z f'/f) > alpha on the disk, for a simple-pole function with no
    zeros off the origin.  Virtual origin sample with margin 1 - alpha.

    Zero-freeness is checked by the argument principle on the outer sample
    circle: with one simple pole inside, a zero-free f must wind exactly -1.
    """
    _check_order(alpha)
    if grid.r_min < 1e-3:
        raise ValueError("grid r_min below 1e-3 cannot keep clear of the pole at 0")
    src = _guarded(_jet_source(f, env))
    winding, zero_witness = _zeros_inside(src, grid.r_max, grid.n_angular)
    if winding + 1 > 0:
        raise ZeroOfF(zero_witness)

    def margin_at(z: complex) -> float:
        j = src(z)
        if abs(j.d0) <= ZERO_GUARD:
            raise ZeroOfF(z)
        return -(z * j.d1 / j.d0).real - alpha

    return _scan(margin_at, grid, virtual=(1.0 - alpha, 0j))


def check_convex_order(g, env, beta_order: float, grid: GridSpec) -> ClassVerdict:
    """Re(1 + z g''/g') > beta_order on the disk."""
    _check_order(beta_order)
    src = _jet_source(g, env)

    def margin_at(z: complex) -> float:
        j = src(z)
        if abs(j.d1) <= UNIVALENCE_GUARD:
            raise NotLocallyUnivalent(z)
        return 1.0 + (z * j.d2 / j.d1).real - beta_order

    return _scan(margin_at, grid)


def check_starlike_order(g, env, beta_order: float, grid: GridSpec) -> ClassVerdict:
    """Re(z g'/g) > beta_order on the disk, g(0) = 0 only at the origin.

    The quantity tends to 1 at the origin (virtual sample).  Off-origin
    zeros are detected by the argument principle on the outer sample
    circle: a function vanishing only at 0 must wind exactly +1 there.
    """
    _check_order(beta_order)
    src = _jet_source(g, env)
    winding, zero_witness = _zeros_inside(src, grid.r_max, grid.n_angular)
    if winding > 1:
        raise ZeroOfG(zero_witness)

    def margin_at(z: complex) -> float:
        j = src(z)
        if abs(j.d0) <= ZERO_GUARD:
            raise ZeroOfG(z)
        return (z * j.d1 / j.d0).real - beta_order

    return _scan(margin_at, grid, virtual=(1.0 - beta_order, 0j))


def check_cbeta(g, env, beta: float, grid: GridSpec) -> ClassVerdict:
    """Band condition -beta/(2beta-3) < Re(1 + z g''/g') < beta.

    At beta = 3/2 the lower edge is -infinity, so only the upper bound is
    checked; at beta = infinity only the lower bound -1/2 applies.
    """
    from .constants import cbeta_lower_bound

    lower = cbeta_lower_bound(beta)
    upper = beta  # +inf when beta is infinite
    src = _jet_source(g, env)

    def margin_at(z: complex) -> float:
        j = src(z)
        if abs(j.d1) <= UNIVALENCE_GUARD:
            raise NotLocallyUnivalent(z)
        q = 1.0 + (z * j.d2 / j.d1).real
        up = upper - q if math.isfinite(upper) else math.inf
        low = q - lower if math.isfinite(lower) else math.inf
        return min(up, low)

    return _scan(margin_at, grid)


@dataclass(frozen=True)
class KaplanProfile:
    """Cumulative angular integral K(theta) of Re(1 + z g''/g') at |z| = r."""

    r: float
    thetas: tuple[float, ...]
    cumulative: tuple[float, ...]

    @property
    def full_turn(self) -> float:
        """K(2 pi); equals 2 pi up to quadrature error for any locally
        univalent g (mean-value property of the harmonic Re(z g''/g'))."""
        return self.cumulative[-1]


def _kaplan_cumulative(src: JetSource, r: float, n_theta: int) -> tuple[list[float], list[float]]:
    tau = 2.0 * math.pi
    thetas = [tau * j / n_theta for j in range(n_theta + 1)]
    vals = []
    for t in thetas:
        z = r * cmath.exp(1j * t)
        j = src(z)
        if abs(j.d1) <= UNIVALENCE_GUARD:
            raise NotLocallyUnivalent(z)
        vals.append(1.0 + (z * j.d2 / j.d1).real)
    dt = tau / n_theta
    cum = [0.0]
    for k in range(n_theta):
        cum.append(cum[-1] + 0.5 * dt * (vals[k] + vals[k + 1]))
    return thetas, cum


def _min_arc_increment(cum: list[float], n: int) -> float:
    """Min of K(t2) - K(t1) over arcs up to one full turn, with wraparound
    handled through K(t + 2 pi) = K(t) + 2 pi."""
    two_pi = 2.0 * math.pi
    ext = list(cum) + [cum[k] + two_pi for k in range(1, len(cum))]
    best = math.inf
    window: deque[int] = deque()  # indices of decreasing K values
    for j in range(1, len(ext)):
        i = j - 1
        while window and ext[window[-1]] <= ext[i]:
            window.pop()
        window.append(i)
        while window[0] < j - n:
            window.popleft()
        best = min(best, ext[j] - ext[window[0]])
    return best


def min_arc_increment(profile: KaplanProfile) -> float:
    """Smallest arc integral K(t2) - K(t1) seen by a profile; the class
    condition asks this to exceed -pi."""
    return _min_arc_increment(list(profile.cumulative), len(profile.cumulative) - 1)


def check_kaplan(g, env, r: float, n_theta: int = 512) -> tuple[bool, KaplanProfile]:
    """Close-to-convexity probe: every arc integral of Re(1 + z g''/g')
    on |z| = r must exceed -pi.

    Composite trapezoid quadrature; its error is estimated by Richardson
    halving and added to the -pi threshold, so acceptance is conservative.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius r = {r} outside (0, 1)")
    if n_theta < 256:
        raise ValueError(f"n_theta = {n_theta} below 256")
    if n_theta % 2:
        n_theta += 1
    src = _jet_source(g, env)
    thetas, cum = _kaplan_cumulative(src, r, n_theta)
    _, cum_half = _kaplan_cumulative(src, r, n_theta // 2)
    quad_tol = max(abs(cum[-1] - cum_half[-1]), 1e-12)
    worst = _min_arc_increment(cum, n_theta)
    profile = KaplanProfile(r, tuple(thetas), tuple(cum))
    return worst > -math.pi + quad_tol, profile


def starlike_implication_probe(g, env, grid: GridSpec) -> ClassVerdict:
    """Empirical probe of the implication
    Re(1 + z g''/g') < 3/2  =>  |z g'/g - 2/3| < 2/3.

    Samples where the antecedent fails are skipped and counted; the margin
    at the remaining points is the consequent's slack.  A consistency
    check on samples, not a proof.
    """
    src = _jet_source(g, env)

    def margin_at(z: complex) -> float:
        j = src(z)
        if abs(j.d1) <= UNIVALENCE_GUARD:
            raise NotLocallyUnivalent(z)
        if abs(j.d0) <= ZERO_GUARD:
            raise ZeroOfG(z)
        antecedent = 1.0 + (z * j.d2 / j.d1).real
        if antecedent >= 1.5:
            return math.nan  # skipped
        return 2.0 / 3.0 - abs(z * j.d1 / j.d0 - 2.0 / 3.0)

    return _scan(margin_at, grid)


def coefficient_relation_check(g, env, tol: float = 1e-10) -> bool:
    """|a2^2 - a3| agrees with |S_g(0)|/6 to tol, with a2 = g''(0)/2 and
    a3 = g'''(0)/6 read off one jet at the origin."""
    src = _jet_source(g, env)
    j = src(0j)
    a2 = j.d2 / 2.0
    a3 = j.d3 / 6.0
    s0 = _schwarzian_of_jet(j, 0j)
    return abs(abs(a2 * a2 - a3) - abs(s0) / 6.0) <= tol
