"""Self-verification battery behind the verify-suite subcommand.

Each check reproduces one acceptance property against an oracle that is
independent of the code path it validates, and reports pass/fail plus the
measured numbers.  The fast tier keeps every check at desk scale; the full
tier widens grids and adds the integrator convergence study.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

from . import classify, constants, expr, jets, ode
from .errors import CNotAboveCAlpha, EtaTooLarge
from .grids import GridSpec

COT_TEXT = "sqrt(c)*cot(sqrt(c)*z)"


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"check": self.name, "passed": self.passed, "detail": self.detail}


def _bisect(fn, lo, hi, tol=1e-14):
    f_lo = fn(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f_lo * fn(mid) <= 0:
            hi = mid
        else:
            lo = mid
            f_lo = fn(lo)
    return 0.5 * (lo + hi)


def _grid(full: bool) -> GridSpec:
    return GridSpec(1e-3, 0.99, 64 if full else 24, 256 if full else 96)


def check_critical_bound(full: bool = False) -> CheckResult:
    t_star = _bisect(lambda t: math.tan(t) - 2.0 * t, 1.0, 1.5)
    got = constants.c_alpha(0.0)
    err = abs(got - t_star * t_star)
    return CheckResult("critical-bound-value", err < 1e-9,
                       {"c_alpha_0": got, "oracle": t_star * t_star, "error": err})


def check_band_threshold_constants(full: bool = False) -> CheckResult:
    phi_n, psi_n = constants.phi_psi(1.5)
    phi_i, psi_i = constants.phi_psi(math.inf)
    ok = phi_n == 0.2 and psi_n == 1.8
    ok = ok and abs(phi_i - 3 / 7) < 1e-12 and abs(psi_i - 11 / 7) < 1e-12
    worst = 0.0
    for eta in (0.0, 0.05, 0.15):
        d = constants.delta_max(eta, 1.5)
        worst = max(worst, abs(10 * eta + 9 * d * (1 + eta) * math.exp(d / 2) - 2.0))
        d = constants.delta_max(eta, math.inf)
        worst = max(worst, abs(14 * eta + 11 * d * (1 + eta) * math.exp(d / 2) - 6.0))
    ok = ok and worst < 1e-9
    return CheckResult("band-threshold-constants", ok,
                       {"phi_3_2": phi_n, "psi_3_2": psi_n,
                        "phi_inf": phi_i, "psi_inf": psi_i,
                        "specialized_equality_defect": worst})


def check_convex_positive(full: bool = False) -> CheckResult:
    cot = expr.parse(COT_TEXT)
    alphas = (0.0, 0.3, 0.6) if full else (0.0, 0.6)
    detail = {}
    ok = True
    for alpha in alphas:
        c = constants.c_alpha(alpha)
        v = classify.check_merom_convex(cot, {"c": c}, alpha, _grid(full))
        detail[f"margin_alpha_{alpha}"] = v.worst_margin
        ok = ok and v.holds
        tight = classify.check_merom_convex(
            cot, {"c": c}, alpha, GridSpec(1e-3, 0.999, 24, 96))
        detail[f"tight_margin_alpha_{alpha}"] = tight.worst_margin
        ok = ok and 0 < tight.worst_margin < 0.01
        ok = ok and abs(cmath.phase(tight.witness)) < 0.1
    return CheckResult("convexity-positive-direction", ok, detail)


def check_sharpness(full: bool = False) -> CheckResult:
    cot = expr.parse(COT_TEXT)
    alphas = (0.0, 0.3, 0.6) if full else (0.0,)
    ok = True
    detail = {}
    for alpha in alphas:
        c = 1.05 * constants.c_alpha(alpha)
        x0 = ode.sharpness_witness(alpha, c)
        v = classify.check_merom_convex(cot, {"c": c}, alpha, _grid(full))
        ok = ok and math.sqrt(constants.c_alpha(alpha) / c) < x0 < 1.0
        ok = ok and (not v.holds) and abs(v.witness - x0) < 1e-2
        detail[f"x0_alpha_{alpha}"] = x0
        detail[f"witness_gap_alpha_{alpha}"] = abs(v.witness - x0)
    return CheckResult("sharpness-witness", ok, detail)


def check_monotonic_sign_pattern(full: bool = False, c_shift: float = 0.0) -> CheckResult:
    n = 50 if full else 20
    values = []
    ok = True
    for k in range(n):
        alpha = k * 0.99 / (n - 1)
        c = constants.c_alpha(alpha) + c_shift
        values.append(c)
        t = math.sqrt(c)
        if t + 1e-9 >= math.pi / 2:
            ok = False
            continue
        ok = ok and constants.tan_deficit(t - 1e-9, alpha) > 0
        ok = ok and constants.tan_deficit(t + 1e-9, alpha) < 0
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    return CheckResult("monotonic-sign-pattern", ok and decreasing,
                       {"grid_points": n, "strictly_decreasing": decreasing,
                        "c_shift": c_shift})


_POOL = [
    ("z/(1-a*z)", {"a": 0.35}),
    ("z + a*z^2 + b*z^3", {"a": 0.4, "b": 0.1}),
    ("exp(a*z)", {"a": 0.8}),
    (COT_TEXT, {"c": 0.9}),
    ("1/z + a + b*z", {"a": 0.3, "b": 0.2}),
    ("sin(z)/(1 - a*z)", {"a": 0.2}),
    ("z/(1-z)^2", {}),
    ("log(1 + a*z) + z", {"a": 0.5}),
    ("tanh(a*z) + z^2/10", {"a": 0.7}),
    ("z - z^3/9", {}),
]


def check_schwarzian_invariances(full: bool = False) -> CheckResult:
    rng = random.Random(2718)
    funcs = [(expr.parse(t), env) for t, env in _POOL]
    if full:
        funcs = funcs * 2
    n_points = 200 if full else 50
    worst = 0.0
    for fn, env in funcs:
        while True:
            a, b, c, d = (complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(4))
            if abs(a * d - b * c) > 0.1:
                break
        checked = 0
        while checked < n_points:
            z = rng.uniform(0.05, 0.9) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            try:
                base = expr.eval_jet(fn, z, env)
            except Exception:
                continue
            if abs(base.d1) < 1e-6 or abs(c * base.d0 + d) < 0.1 or abs(base.d0) < 0.1:
                continue
            s_f = classify.schwarzian_at(fn, env, z)
            s_m = classify.schwarzian_at(
                lambda w: jets.mobius_transform(expr.eval_jet(fn, w, env), a, b, c, d),
                None, z)
            s_r = classify.schwarzian_at(lambda w: 1 / expr.eval_jet(fn, w, env), None, z)
            worst = max(worst, abs(s_m - s_f), abs(s_r - s_f))
            checked += 1
    coeff_ok = True
    for _ in range(40 if full else 10):
        a2 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        a3 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        j = jets.Jet3(0j, 1.0 + 0j, 2 * a2, 6 * a3)
        coeff_ok = coeff_ok and classify.coefficient_relation_check(
            lambda w, jj=j: jj, None, 1e-10)
    ok = worst < 1e-8 and coeff_ok
    return CheckResult("schwarzian-invariances", ok,
                       {"worst_residual": worst, "coefficient_relation": coeff_ok})


def check_ode_fidelity(full: bool = False) -> CheckResult:
    detail = {}
    c = 1.3
    sq = cmath.sqrt(complex(c))
    sol = ode.solve_ray(ode.PotentialP.constant(c), 0.9, 0.95, 1024)
    z_end = 0.95 * cmath.exp(0.9j)
    err = max(abs(sol.w1[-1] - cmath.cos(sq * z_end)),
              abs(sol.w2[-1] - cmath.sin(sq * z_end) / sq))
    sol0 = ode.solve_ray(ode.PotentialP.constant(0.0), 0.4, 0.95, 1024)
    err0 = max(abs(sol0.w1[-1] - 1.0), abs(sol0.w2[-1] - 0.95 * cmath.exp(0.4j)))
    detail["closed_form_error"] = max(err, err0)
    detail["wronskian_drift"] = max(sol.wronskian_drift, sol0.wronskian_drift)
    ok = detail["closed_form_error"] < 1e-8 and detail["wronskian_drift"] < 1e-9
    if full:
        errors = []
        for n in (64, 128, 256):
            s = ode.solve_ray(ode.PotentialP.constant(1.0), 0.0, 0.9, n)
            errors.append(abs(s.w2[-1] - math.sin(0.9)))
        orders = [math.log2(a / b) for a, b in zip(errors, errors[1:])]
        detail["observed_orders"] = orders
        ok = ok and all(abs(o - 4.0) < 0.3 for o in orders)
    return CheckResult("ode-fidelity", ok, detail)


def check_gabriel(full: bool = False) -> CheckResult:
    detail = {}
    worst_const = 0.0
    worst_quad = 0.0
    thetas = (0.0, math.pi / 3)
    radii = (0.5, 0.9)
    n = 2048 if full else 1024
    for theta in thetas:
        for r in radii:
            worst_const = max(worst_const, ode.gabriel_identity_residual(
                ode.PotentialP.constant(0.8), theta, r, n))
            worst_quad = max(worst_quad, ode.gabriel_identity_residual(
                ode.PotentialP.parse("0.8*z^2"), theta, r, n))
    detail["identity_residual_const"] = worst_const
    detail["identity_residual_quadratic"] = worst_quad
    c, r = 1.0, 0.9
    prof = ode.RealProfile.from_functions(
        lambda x: math.sin(x * math.sqrt(c)) / math.sqrt(c),
        lambda x: math.cos(x * math.sqrt(c)), r, 20000)
    eq_val = ode.gabriel_functional(prof, c, r)
    detail["equality_profile_value"] = eq_val
    rng = random.Random(4242)
    min_val = math.inf
    for _ in range(20 if full else 8):
        coeffs = [rng.uniform(-1, 1) for _ in range(4)]
        prof = ode.RealProfile.from_functions(
            lambda x: sum(a * x ** (k + 1) for k, a in enumerate(coeffs)),
            lambda x: sum((k + 1) * a * x**k for k, a in enumerate(coeffs)),
            0.6, 8000)
        min_val = min(min_val, ode.gabriel_functional(prof, 1.0, 0.6))
    detail["min_random_profile_value"] = min_val
    ok = (worst_const < 1e-6 and worst_quad < 1e-5
          and abs(eq_val) < 1e-8 and min_val >= -1e-8)
    return CheckResult("gabriel-machinery", ok, detail)


def check_band_examples(full: bool = False) -> CheckResult:
    grid = _grid(full)
    ok = True
    detail = {}
    g = expr.parse("z/(1-c*z)")
    for c in (0.1, 0.3, 0.42):
        v = classify.check_cbeta(g, {"c": c}, 2.5, grid)
        detail[f"margin_c_{c}"] = v.worst_margin
        ok = ok and v.holds
    remark = expr.parse("(2*z-z^2)/(2*(1-z)^2)")
    v = classify.check_cbeta(remark, {}, math.inf, grid)
    a2 = expr.eval_jet(remark, 0.0, {}).d2 / 2
    detail["remark_margin"] = v.worst_margin
    detail["remark_a2"] = a2.real
    ok = ok and v.holds and abs(a2 - 1.5) < 1e-10
    return CheckResult("band-membership-examples", ok, detail)


def check_kaplan_battery(full: bool = False) -> CheckResult:
    n_theta = 1024 if full else 512
    corpus = [
        ("z", {}),
        ("z/(1-z)^2", {}),
        ("z/(1-c*z)", {"c": 0.3}),
        ("(2*z-z^2)/(2*(1-z)^2)", {}),
        ("z + z^2/5", {}),
    ]
    ok = True
    worst_turn = 0.0
    for text, env in corpus:
        accepted, prof = classify.check_kaplan(expr.parse(text), env, 0.9, n_theta)
        worst_turn = max(worst_turn, abs(prof.full_turn - 2 * math.pi))
        ok = ok and accepted
    koebe_ok, _ = classify.check_kaplan(expr.parse("z/(1-z)^2"), {}, 0.95, n_theta)
    ok = ok and koebe_ok and worst_turn < 1e-8
    grid = _grid(full)
    probe_ok = True
    for text, env in (("z/(1-c*z)", {"c": 0.1}), ("z + z^2/8", {})):
        g = expr.parse(text)
        if classify.check_cbeta(g, env, 1.5, grid).holds:
            probe_ok = probe_ok and classify.check_starlike_order(g, env, 0.0, grid).holds
            v = classify.starlike_implication_probe(g, env, grid)
            probe_ok = probe_ok and v.holds and v.skipped == 0
    return CheckResult("kaplan-battery", ok and probe_ok,
                       {"worst_full_turn_defect": worst_turn,
                        "koebe_accepted": koebe_ok,
                        "narrow_band_probe": probe_ok})


def check_ray_equivalence(full: bool = False) -> CheckResult:
    cot = expr.parse(COT_TEXT)
    ok = True
    for alpha in (0.0, 0.5):
        c = constants.c_alpha(alpha)
        p = ode.PotentialP.constant(c)
        for theta in (0.0, math.pi / 3, math.pi, 1.6 * math.pi):
            sol = ode.solve_ray(p, theta, 0.95, 512 if not full else 1024)
            step = 32 if not full else 16
            for k in range(step, sol.n_steps + 1, step):
                z = sol.rho[k] * cmath.exp(1j * theta)
                j = expr.eval_jet(cot, z, {"c": c})
                lhs = -(1.0 + (z * j.d2 / j.d1).real) - alpha
                rhs = (z * sol.w2p[k] / sol.w2[k]).real - (alpha + 1.0) / 2.0
                ok = ok and (lhs * rhs >= 0 or (abs(lhs) < 1e-9 and abs(rhs) < 1e-9))
    return CheckResult("ray-equivalence", ok, {})


def check_negative_controls(full: bool = False) -> CheckResult:
    ok = True
    try:
        ode.sharpness_witness(0.0, constants.c_alpha(0.0))
        ok = False
    except CNotAboveCAlpha:
        pass
    try:
        constants.delta_max(0.3, 1.5)
        ok = False
    except EtaTooLarge:
        pass
    v = classify.check_starlike_order(expr.parse("z/(1-z)^2"), {}, 0.5, _grid(full))
    ok = ok and (not v.holds) and abs(v.witness.imag) < 1e-9
    return CheckResult("negative-controls", ok, {"koebe_margin": v.worst_margin})


CHECKS = (
    check_critical_bound,
    check_band_threshold_constants,
    check_convex_positive,
    check_sharpness,
    check_monotonic_sign_pattern,
    check_schwarzian_invariances,
    check_ode_fidelity,
    check_gabriel,
    check_band_examples,
    check_kaplan_battery,
    check_ray_equivalence,
    check_negative_controls,
)


def run_checks(full: bool = False) -> list[CheckResult]:
    return [fn(full) for fn in CHECKS]
