"""Radial integration of w'' + p(z) w = 0 and what it buys us.

The fundamental pair (w1 with w1(0)=1, w1'(0)=0; w2 with w2(0)=0,
w2'(0)=1) is advanced along rays z = rho * e^(i theta) with a classical
fixed-step fourth-order scheme.  Because the equation has no first-order
term the Wronskian w1 w2' - w1' w2 stays exactly 1, which doubles as a
conservation check on the integrator.

Ratios of independent solutions have Schwarzian 2p; quotient maps built
from the pair realize prescribed-Schwarzian functions with a chosen second
Taylor coefficient, and the energy identities of the w2 branch drive the
convexity bound's proof machinery that the rest of the toolkit verifies
numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from . import expr as expr_mod
from .constants import c_alpha
from .errors import (
    CNotAboveCAlpha,
    CotSingular,
    DenominatorVanishes,
    DivisionByZeroJet,
    DomainError,
    DomainErrorJet,
    PotentialSingularOnRay,
    WZeroAtEvaluationPoint,
)
from .grids import ClassVerdict, GridSpec, verdict_from_margins
from .jets import Jet3


class PotentialP:
    """Analytic coefficient p(z) of w'' + p w = 0; the target Schwarzian is 2p.

    Either a constant or a parsed expression with its parameter bindings.
    Analyticity is taken on trust and checked only where p gets sampled.
    """

    def __init__(self, const: complex | None = None,
                 fn: expr_mod.FnExpr | None = None,
                 env: expr_mod.ParamEnv | None = None):
        if (const is None) == (fn is None):
            raise ValueError("supply exactly one of a constant or an expression")
        self._const = None if const is None else complex(const)
        self._fn = fn
        self._env = dict(env or {})

    @classmethod
    def constant(cls, c: complex) -> "PotentialP":
        return cls(const=c)

    @classmethod
    def from_expression(cls, fn: expr_mod.FnExpr, env: expr_mod.ParamEnv | None = None) -> "PotentialP":
        return cls(fn=fn, env=env)

    @classmethod
    def parse(cls, text: str, env: expr_mod.ParamEnv | None = None) -> "PotentialP":
        return cls(fn=expr_mod.parse(text), env=env)

    @property
    def is_constant(self) -> bool:
        return self._const is not None

    def value(self, z: complex) -> complex:
        if self._const is not None:
            return self._const
        return expr_mod.eval_jet(self._fn, z, self._env).d0

    def describe(self) -> str:
        if self._const is not None:
            return f"const {self._const}"
        return expr_mod.pretty(self._fn)


@dataclass(frozen=True)
class RaySolution:
    """Fundamental pair sampled along one ray.

    rho[k] = k * step; w1, w2 carry the solution values at rho[k] *
    e^(i theta) and w1p, w2p their z-derivatives there.
    """

    theta: float
    step: float
    rho: tuple[float, ...]
    w1: tuple[complex, ...]
    w1p: tuple[complex, ...]
    w2: tuple[complex, ...]
    w2p: tuple[complex, ...]
    wronskian_drift: float

    @property
    def n_steps(self) -> int:
        return len(self.rho) - 1


def _sample_potential(p: PotentialP, zs: list[complex]) -> list[complex]:
    try:
        return [p.value(z) for z in zs]
    except (DivisionByZeroJet, DomainErrorJet) as err:
        raise PotentialSingularOnRay(f"p ({p.describe()}) singular on the ray: {err}") from err


def _rk4_step(e: complex, h: float, y: tuple, p0: complex, pm: complex, p1: complex) -> tuple:
    """One classical step of the first-order system for (w1, w1p, w2, w2p)."""

    def rhs(p: complex, s: tuple) -> tuple:
        w1, w1p, w2, w2p = s
        return (e * w1p, -e * p * w1, e * w2p, -e * p * w2)

    k1 = rhs(p0, y)
    k2 = rhs(pm, tuple(a + 0.5 * h * b for a, b in zip(y, k1)))
    k3 = rhs(pm, tuple(a + 0.5 * h * b for a, b in zip(y, k2)))
    k4 = rhs(p1, tuple(a + h * b for a, b in zip(y, k3)))
    return tuple(
        a + (h / 6.0) * (b1 + 2 * b2 + 2 * b3 + b4)
        for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
    )


def solve_ray(p: PotentialP, theta: float, r_max: float, n_steps: int) -> RaySolution:
    """Advance both fundamental solutions along the ray arg z = theta.

    Fixed-step fourth-order integration up to |z| = r_max; deterministic
    for identical inputs.  Raises PotentialSingularOnRay if p cannot be
    evaluated somewhere on the ray.
    """
    if not 0.0 < r_max < 1.0:
        raise DomainError(f"r_max = {r_max} outside (0, 1)")
    if n_steps < 64:
        raise DomainError(f"n_steps = {n_steps} below 64")
    e = cmath.exp(1j * theta)
    h = r_max / n_steps
    rho = [k * h for k in range(n_steps + 1)]
    p_nodes = _sample_potential(p, [r * e for r in rho])
    p_mids = _sample_potential(p, [(r + 0.5 * h) * e for r in rho[:-1]])

    y = (1.0 + 0j, 0j, 0j, 1.0 + 0j)
    w1s, w1ps, w2s, w2ps = [y[0]], [y[1]], [y[2]], [y[3]]
    drift = 0.0
    for k in range(n_steps):
        y = _rk4_step(e, h, y, p_nodes[k], p_mids[k], p_nodes[k + 1])
        w1s.append(y[0])
        w1ps.append(y[1])
        w2s.append(y[2])
        w2ps.append(y[3])
        drift = max(drift, abs(y[0] * y[3] - y[1] * y[2] - 1.0))
    return RaySolution(theta, h, tuple(rho), tuple(w1s), tuple(w1ps),
                       tuple(w2s), tuple(w2ps), drift)


# 7-point central first-derivative stencil, O(h^6).
_D1_W = (-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60)


def ratio_schwarzian_check(p: PotentialP, sol: RaySolution, tol: float = 1e-6) -> float:
    """Residual of S = 2p for the solution ratio, via finite differences.

    The ratio w2/w1 shares its Schwarzian with w1/w2 but stays regular at
    the origin, so its stored log-derivative q = -2 w1'/w1 can be
    differentiated along the ray: S = q' - q^2/2.  Returns the max residual
    |S - 2p| over eligible interior nodes; a healthy solve stays below
    tol.  Stencil windows touching near-zeros of w1 are skipped.
    """
    n = sol.n_steps
    stride = max(1, n // 256)
    h_eff = stride * sol.step
    e_inv = cmath.exp(-1j * sol.theta)
    scale = max(abs(w) for w in sol.w1)
    ok = [abs(w) > 1e-8 * scale for w in sol.w1]
    q = [(-2.0 * sol.w1p[k] / sol.w1[k]) if ok[k] else 0j for k in range(n + 1)]

    worst = 0.0
    for k in range(3 * stride, n - 3 * stride + 1):
        idx = [k + m * stride for m in (-3, -2, -1, 0, 1, 2, 3)]
        if not all(ok[i] for i in idx):
            continue
        dq = sum(w * q[i] for w, i in zip(_D1_W, idx)) / h_eff
        s_val = e_inv * dq - 0.5 * q[k] * q[k]
        z = sol.rho[k] * cmath.exp(1j * sol.theta)
        worst = max(worst, abs(s_val - 2.0 * p.value(z)))
    return worst


def _trapezoid(values: list[float], h: float) -> float:
    return h * (sum(values) - 0.5 * (values[0] + values[-1]))


def gabriel_identity_residual(p: PotentialP, theta: float, r: float, n: int) -> float:
    """Defect of the radial energy identity for the w2 branch:

    |w(r e^it)|^2 Re(r e^it w'/w) = r * int_0^r |w'|^2 d rho
                                  - r * int_0^r Re(rho^2 e^(2it) p) |w|^2/rho^2 d rho

    Both sides use the integration nodes (trapezoid quadrature); the
    rho -> 0 limit of the second integrand is handled by the exact
    cancellation Re(rho^2 e^(2it) p) |w|^2 / rho^2 = Re(e^(2it) p) |w|^2.
    """
    sol = solve_ray(p, theta, r, n)
    w_end, wp_end = sol.w2[-1], sol.w2p[-1]
    if abs(w_end) < 1e-12:
        raise WZeroAtEvaluationPoint(f"w2({r} * e^(i {theta})) = {w_end}")
    z_end = r * cmath.exp(1j * theta)
    lhs = (z_end * wp_end * w_end.conjugate()).real

    e2 = cmath.exp(2j * theta)
    kinetic = [abs(wp) ** 2 for wp in sol.w2p]
    weighted = [
        (e2 * p.value(rho * cmath.exp(1j * theta))).real * abs(w) ** 2
        for rho, w in zip(sol.rho, sol.w2)
    ]
    rhs = r * _trapezoid(kinetic, sol.step) - r * _trapezoid(weighted, sol.step)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class RealProfile:
    """Real function y(rho) with derivative, sampled on [0, r]."""

    rho: tuple[float, ...]
    y: tuple[float, ...]
    yp: tuple[float, ...]

    def __post_init__(self):
        if not len(self.rho) == len(self.y) == len(self.yp):
            raise ValueError("rho, y, yp must have equal lengths")
        if len(self.rho) < 2:
            raise ValueError("profile needs at least two nodes")
        if self.rho[0] != 0.0:
            raise ValueError("profile must start at rho = 0")
        if any(b <= a for a, b in zip(self.rho, self.rho[1:])):
            raise ValueError("rho nodes must be strictly increasing")
        # y = O(rho) near the origin
        if self.y[0] != 0.0 or abs(self.y[1]) > 1e8 * self.rho[1]:
            raise ValueError("profile must vanish linearly at rho = 0")

    @classmethod
    def from_functions(cls, fy: Callable[[float], float], fyp: Callable[[float], float],
                       r: float, n: int) -> "RealProfile":
        rho = [r * k / n for k in range(n + 1)]
        return cls(tuple(rho), tuple(fy(x) for x in rho), tuple(fyp(x) for x in rho))


def gabriel_functional(profile: RealProfile, c: float, r: float) -> float:
    """Quadratic energy functional

        r int_0^r y'^2 - c r int_0^r y^2 - r sqrt(c) cot(r sqrt(c)) y(r)^2,

    nonnegative for admissible profiles; zero exactly for the sine profile
    y = sin(rho sqrt(c))/sqrt(c).  Trapezoid quadrature on the profile
    nodes, which must end at rho = r.
    """
    if c <= 0.0:
        raise DomainError(f"c = {c} must be positive")
    if not 0.0 < r < 1.0:
        raise DomainError(f"r = {r} outside (0, 1)")
    t = r * math.sqrt(c)
    nearest = round(t / math.pi) * math.pi
    if abs(t - nearest) < 1e-9 and nearest != 0.0:
        raise CotSingular(f"r*sqrt(c) = {t} within 1e-9 of a multiple of pi")
    if t >= math.pi:
        raise DomainError(f"r*sqrt(c) = {t} not below pi")
    if abs(profile.rho[-1] - r) > 1e-9:
        raise ValueError(f"profile ends at {profile.rho[-1]}, not at r = {r}")

    # Non-uniform trapezoid over the profile's own nodes.
    def trapz(vals: tuple[float, ...]) -> float:
        acc = 0.0
        for k in range(len(vals) - 1):
            acc += 0.5 * (vals[k] + vals[k + 1]) * (profile.rho[k + 1] - profile.rho[k])
        return acc

    kinetic = trapz(tuple(v * v for v in profile.yp))
    mass = trapz(tuple(v * v for v in profile.y))
    boundary = t * (math.cos(t) / math.sin(t)) * profile.y[-1] ** 2
    return r * kinetic - c * r * mass - boundary


def _zcot_quantity(z: complex, c: float) -> float:
    """Re(z sqrt(c) cot(sqrt(c) z)), the starlikeness quantity of the sine
    branch w2 = sin(sqrt(c) z)/sqrt(c)."""
    w = cmath.sqrt(complex(c)) * z
    s = cmath.sin(w)
    if abs(s) <= 1e-300:
        raise DomainErrorJet(f"cot pole at z = {z}")
    return (w * cmath.cos(w) / s).real


def cot_starlike_margin(c: float, alpha: float, grid: GridSpec) -> ClassVerdict:
    """Sampled slack of Re(z sqrt(c) cot(sqrt(c) z)) > (alpha+1)/2 on the disk.

    Holds whenever 0 < c <= c_alpha(alpha); the origin enters as a virtual
    sample with the limit value 1.
    """
    if c <= 0.0:
        raise DomainError(f"c = {c} must be positive")
    threshold = 0.5 * (alpha + 1.0)
    margins: list[tuple[float, complex]] = [(1.0 - threshold, 0j)]
    for r in grid.radii():
        for t in grid.angles():
            z = r * cmath.exp(1j * t)
            margins.append((_zcot_quantity(z, c) - threshold, z))
    return verdict_from_margins(margins)


def sharpness_witness(alpha: float, c: float, slack: float = 1e-10) -> float:
    """Real point where the cot map with bound c > c_alpha stops being
    convex of order alpha.

    Searches (sqrt(c_alpha/c), min(1, pi/(2 sqrt(c)))) on the positive real
    axis, where the sign analysis of the critical root guarantees failure;
    the returned x0 satisfies Re(x0 sqrt(c) cot(sqrt(c) x0)) <= (alpha+1)/2
    with at least the requested slack.
    """
    ca = c_alpha(alpha)
    if c <= ca:
        raise CNotAboveCAlpha(f"c = {c} does not exceed c_alpha({alpha}) = {ca}")
    threshold = 0.5 * (alpha + 1.0)
    lo = math.sqrt(ca / c)
    hi = min(1.0 - 1e-12, math.pi / (2.0 * math.sqrt(c)))
    x0 = 0.5 * (lo + hi)
    for _ in range(200):
        if _zcot_quantity(complex(x0), c) - threshold <= -slack:
            return x0
        x0 = 0.5 * (x0 + hi)
    raise CNotAboveCAlpha(
        f"no witness with slack {slack} found for c = {c}, alpha = {alpha}"
    )


class SolutionQuotientMap:
    """Map g = u/(c u + v) built from the fundamental pair, c = -a2.

    g is analytic near 0 with g(0) = 0, g'(0) = 1, g''(0)/2 = a2, and has
    Schwarzian 2p.  Jets at arbitrary points come from a cached ray per
    angle: the state is advanced to the requested radius with one partial
    step, and derivatives follow from the quotient structure,

        D = c u + v,  g' = 1/D^2,  g'' = -2 D'/D^3,
        g''' = 6 D'^2/D^4 + 2 p/D^2,

    using u'D - uD' = 1 (the Wronskian) and D'' = -p D.
    """

    def __init__(self, p: PotentialP, a2: complex, r_max: float = 0.95, n_steps: int = 1024):
        if abs(a2) >= 1.0:
            raise DomainError(f"|a2| = {abs(a2)} not below 1")
        self.p = p
        self.a2 = complex(a2)
        self.r_max = r_max
        self.n_steps = n_steps
        self._c = -complex(a2)
        self._rays: dict[float, RaySolution] = {}

    def _ray(self, theta: float) -> RaySolution:
        sol = self._rays.get(theta)
        if sol is None:
            sol = solve_ray(self.p, theta, self.r_max, self.n_steps)
            self._rays[theta] = sol
        return sol

    def _state_at(self, z: complex) -> tuple[complex, complex, complex, complex]:
        rho = abs(z)
        if rho > self.r_max + 1e-12:
            raise DomainError(f"|z| = {rho} beyond the built radius {self.r_max}")
        if rho == 0.0:
            return (1.0 + 0j, 0j, 0j, 1.0 + 0j)
        theta = cmath.phase(z)
        sol = self._ray(theta)
        k = min(int(rho / sol.step), sol.n_steps)
        y = (sol.w1[k], sol.w1p[k], sol.w2[k], sol.w2p[k])
        dr = rho - sol.rho[k]
        if dr > 1e-15:
            e = cmath.exp(1j * theta)
            rk = sol.rho[k]
            p0 = self.p.value(rk * e)
            pm = self.p.value((rk + 0.5 * dr) * e)
            p1 = self.p.value(rho * e)
            y = _rk4_step(e, dr, y, p0, pm, p1)
        return y

    def eval_jet(self, z: complex) -> Jet3:
        v, vp, u, up = self._state_at(z)
        c = self._c
        d = c * u + v
        if abs(d) < 1e-12:
            raise DenominatorVanishes(z)
        dp = c * up + vp
        pz = self.p.value(z)
        inv_d = 1.0 / d
        inv_d2 = inv_d * inv_d
        return Jet3(
            u * inv_d,
            inv_d2,
            -2.0 * dp * inv_d2 * inv_d,
            6.0 * dp * dp * inv_d2 * inv_d2 + 2.0 * pz * inv_d2,
        )

    def convexity_quantity(self, z: complex) -> float:
        """Re(1 + z g''/g') without forming the jet."""
        v, vp, u, up = self._state_at(z)
        d = self._c * u + v
        if abs(d) < 1e-12:
            raise DenominatorVanishes(z)
        return (1.0 - 2.0 * z * (self._c * up + vp) / d).real


def map_from_potential(p: PotentialP, a2: complex, r_max: float = 0.95,
                       n_steps: int = 1024) -> SolutionQuotientMap:
    """Pointwise evaluator for the analytic map with Schwarzian 2p and
    second Taylor coefficient a2."""
    return SolutionQuotientMap(p, a2, r_max, n_steps)


def write_ray_csv(sol: RaySolution, path: str) -> None:
    """Dump a RaySolution node table as RFC-4180 CSV with a header row."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rho", "w1_re", "w1_im", "w1p_re", "w1p_im",
                         "w2_re", "w2_im", "w2p_re", "w2p_im"])
        for k in range(len(sol.rho)):
            writer.writerow([
                repr(sol.rho[k]),
                repr(sol.w1[k].real), repr(sol.w1[k].imag),
                repr(sol.w1p[k].real), repr(sol.w1p[k].imag),
                repr(sol.w2[k].real), repr(sol.w2[k].imag),
                repr(sol.w2p[k].real), repr(sol.w2p[k].imag),
            ])
