"""Sharp constants and admissible-parameter solvers.

The critical Schwarzian bound for meromorphic convexity of order alpha is
``c_alpha = t*^2`` where ``t*`` is the smallest positive root of
``2t = (1 + alpha) tan t``.  The band-class thresholds are

    phi(beta) = min((beta-1)/(beta+1), 3(beta-1)/(7beta-9))
    psi(beta) = max((beta+3)/(beta+1), (11beta-15)/(7beta-9))

with limits (3/7, 11/7) as beta -> infinity, and the admissibility
inequality for the pair (eta, delta) reads

    2 eta + psi(beta) * delta * (1 + eta) * e^(delta/2) < 2 phi(beta).

All roots are found by plain bisection on monotone brackets: robustness
over speed.
"""

from __future__ import annotations

import math

from .errors import DomainError, EtaTooLarge, HypothesisViolated

INF = math.inf

# Upper bracket end in t-space stops just short of the tangent singularity.
_T_HI_MARGIN = 1e-9
# Admissibility search bracket: the left side of the inequality at delta = 10
# exceeds 2 for every admissible (eta, beta).
_DELTA_HI = 10.0


def _bisect(fn, lo: float, hi: float, tol: float) -> float:
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise ValueError(f"root not bracketed on [{lo}, {hi}]: f = ({f_lo}, {f_hi})")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval at floating-point resolution
            break
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def tan_deficit(x: float, alpha: float) -> float:
    """2x - (1 + alpha) tan x on [0, pi/2).

    Positive up to the critical root, negative beyond it.
    """
    if not 0.0 <= x < math.pi / 2:
        raise DomainError(f"x = {x} outside [0, pi/2)")
    _check_alpha(alpha)
    return 2.0 * x - (1.0 + alpha) * math.tan(x)


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"order alpha = {alpha} outside [0, 1)")


def c_alpha(alpha: float, tol: float = 1e-12) -> float:
    """Critical Schwarzian half-bound for convexity of order alpha.

    Returns t*^2 for the unique root t* of 2t = (1 + alpha) tan t inside
    (arctan sqrt((1-alpha)/(1+alpha)), pi/2); the root can sit no lower
    than that arctan value.  Bisection down to a t-interval of width tol.
    """
    _check_alpha(alpha)
    if tol < 1e-14:
        raise DomainError(f"tol = {tol} below supported resolution 1e-14")
    lo = math.atan(math.sqrt((1.0 - alpha) / (1.0 + alpha)))
    hi = math.pi / 2 - _T_HI_MARGIN
    t_star = _bisect(lambda t: 2.0 * t - (1.0 + alpha) * math.tan(t), lo, hi, tol)
    return t_star * t_star


def _check_beta(beta: float) -> None:
    if not (beta >= 1.5 or math.isinf(beta)):
        raise DomainError(f"beta = {beta} below 3/2")


def parse_beta(text: str) -> float:
    """Accept a numeric beta or the marker 'inf'."""
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    return float(text)


def phi_psi(beta: float) -> tuple[float, float]:
    """Band-class thresholds (phi(beta), psi(beta)); limits (3/7, 11/7) at infinity."""
    _check_beta(beta)
    if math.isinf(beta):
        return 3.0 / 7.0, 11.0 / 7.0
    phi = min((beta - 1.0) / (beta + 1.0), 6.0 * (beta - 1.0) / (2.0 * (7.0 * beta - 9.0)))
    psi = max((beta + 3.0) / (beta + 1.0), (11.0 * beta - 15.0) / (7.0 * beta - 9.0))
    return phi, psi


def cbeta_lower_bound(beta: float) -> float:
    """Lower edge of the band: -beta/(2beta - 3); -inf at beta = 3/2, -1/2 at infinity."""
    _check_beta(beta)
    if math.isinf(beta):
        return -0.5
    if beta == 1.5:
        return -INF
    return -beta / (2.0 * beta - 3.0)


def admissibility_gap(eta: float, delta: float, beta: float) -> float:
    """2 phi(beta) minus the left side of the admissibility inequality.

    Positive exactly when (eta, delta) satisfies the hypothesis.
    """
    phi, psi = phi_psi(beta)
    return 2.0 * phi - (2.0 * eta + psi * delta * (1.0 + eta) * math.exp(delta / 2.0))


def delta_max(eta: float, beta: float, tol: float = 1e-12) -> float:
    """Largest admissible Schwarzian half-bound for a given eta and beta.

    Solves equality in the admissibility inequality; the left side is
    strictly increasing in delta, so any delta strictly below the returned
    value satisfies the hypothesis.
    """
    if tol < 1e-14:
        raise DomainError(f"tol = {tol} below supported resolution 1e-14")
    phi, _ = phi_psi(beta)
    if eta < 0.0:
        raise DomainError(f"eta = {eta} negative")
    if eta >= phi:
        raise EtaTooLarge(f"eta = {eta} not below phi(beta) = {phi}")
    return _bisect(lambda d: -admissibility_gap(eta, d, beta), 0.0, _DELTA_HI, tol)


def chiang_order(eta: float, delta: float) -> float:
    """Convexity order guaranteed by Chiang's criterion.

    Requires 6 eta + 5 delta (1 + eta) e^(delta/2) < 2; the order is
    (2 - 6 eta - 5 (1+eta) delta e^(delta/2)) / (2 - 2 eta - (1+eta) delta e^(delta/2)),
    always in (0, 1].
    """
    grow = (1.0 + eta) * delta * math.exp(delta / 2.0)
    if 6.0 * eta + 5.0 * grow >= 2.0:
        raise HypothesisViolated(
            f"6*eta + 5*delta*(1+eta)*e^(delta/2) = {6.0 * eta + 5.0 * grow} >= 2"
        )
    return (2.0 - 6.0 * eta - 5.0 * grow) / (2.0 - 2.0 * eta - grow)
