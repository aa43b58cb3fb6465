import cmath
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schwarzian_lab import jets
from schwarzian_lab.errors import DivisionByZeroJet, DomainErrorJet


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def jet_close(j, vals, tol=1e-12):
    return all(close(got, want, tol) for got, want in zip((j.d0, j.d1, j.d2, j.d3), vals))


def rel_err(got, want):
    return abs(got - want) / (1.0 + abs(want))


# --- variable / constant lifts -------------------------------------------

@pytest.mark.parametrize("z0", [0.0, 1j, 0.5])
def test_variable_lift(z0):
    assert jets.variable(z0) == jets.Jet3(complex(z0), 1.0 + 0j, 0j, 0j)


def test_constant_lift():
    assert jets.constant(3 - 2j) == jets.Jet3(3 - 2j, 0j, 0j, 0j)


# --- arithmetic -----------------------------------------------------------

def test_square_at_two():
    z = jets.variable(2.0)
    assert jet_close(z * z, (4, 4, 2, 0))


def test_reciprocal_of_z_at_one():
    assert jet_close(1 / jets.variable(1.0), (1, -1, 2, -6))


def test_add_constant():
    j = jets.variable(1j) + 3
    assert jet_close(j, (3 + 1j, 1, 0, 0))


def test_division_by_zero_jet():
    with pytest.raises(DivisionByZeroJet):
        1 / jets.variable(0.0)


def test_quotient_rule_against_product():
    a = jets.Jet3(1.2 - 0.3j, 0.5j, -1.0, 2.2 + 1j)
    b = jets.Jet3(0.7 + 0.2j, 1.0, 0.1j, -0.4)
    q = a / b
    back = q * b
    assert jet_close(back, (a.d0, a.d1, a.d2, a.d3), 1e-12)


# --- elementary functions -------------------------------------------------

def test_sin_at_zero():
    assert jet_close(jets.sin(jets.variable(0.0)), (0, 1, 0, -1))


def test_exp_at_zero():
    assert jet_close(jets.exp(jets.variable(0.0)), (1, 1, 1, 1))


def test_cot_at_quarter_pi():
    # cot(pi/4) = 1 and the derivative ladder gives (-2, 4, -16).
    j = jets.cot(jets.variable(math.pi / 4))
    assert jet_close(j, (1, -2, 4, -16), 1e-10)


def test_cot_matches_fd_oracle():
    j = jets.cot(jets.variable(math.pi / 4))
    o = jets.fd_jet_oracle(lambda z: cmath.cos(z) / cmath.sin(z), math.pi / 4, 1e-4)
    for got, want in zip((j.d0, j.d1), (o.d0, o.d1)):
        assert rel_err(got, want) < 1e-6


def test_fd_oracle_self_consistency_two_steps():
    z0 = 0.3 + 0.2j
    j = jets.cot(jets.variable(z0))
    for h in (1e-4, 5e-5):
        o = jets.fd_jet_oracle(lambda z: cmath.cos(z) / cmath.sin(z), z0, h)
        for got, want in zip((j.d0, j.d1, j.d2, j.d3), (o.d0, o.d1, o.d2, o.d3)):
            assert rel_err(got, want) < 1e-5


def test_fd_oracle_polynomial():
    o = jets.fd_jet_oracle(lambda z: z * z, 1.0)
    assert jet_close(o, (1, 2, 2, 0), 1e-3)


def test_fd_oracle_exp():
    o = jets.fd_jet_oracle(cmath.exp, 0.0)
    assert jet_close(o, (1, 1, 1, 1), 1e-3)


_POINTWISE = {
    "exp": cmath.exp,
    "log": cmath.log,
    "sin": cmath.sin,
    "cos": cmath.cos,
    "tan": cmath.tan,
    "cot": lambda z: cmath.cos(z) / cmath.sin(z),
    "sinh": cmath.sinh,
    "cosh": cmath.cosh,
    "tanh": cmath.tanh,
    "sqrt": cmath.sqrt,
    "inv": lambda z: 1.0 / z,
}


def _safe_for(kind: str, z: complex) -> bool:
    # keep clear of poles and (for the cut functions) of the negative axis
    if kind in ("log", "sqrt"):
        return z.real > 0.12
    if kind == "tan":
        return abs(cmath.cos(z)) > 0.3
    if kind in ("cot", "inv"):
        return abs(cmath.sin(z)) > 0.3 and abs(z) > 0.15
    if kind == "tanh":
        return abs(cmath.cosh(z)) > 0.3
    return True


@pytest.mark.parametrize("kind", sorted(_POINTWISE))
def test_elementary_agrees_with_fd_oracle(kind):
    rng = random.Random(20240815)
    fn = _POINTWISE[kind]
    checked = 0
    while checked < 100:
        r = rng.uniform(0.1, 0.9)
        t = rng.uniform(0, 2 * math.pi)
        z = r * cmath.exp(1j * t)
        if not _safe_for(kind, z):
            continue
        j = jets.elementary(kind, jets.variable(z))
        o = jets.fd_jet_oracle(fn, z, 1e-4)
        assert rel_err(j.d1, o.d1) < 1e-5
        assert rel_err(j.d2, o.d2) < 1e-5
        assert rel_err(j.d3, o.d3) < 1e-3
        checked += 1


def test_pythagorean_identity_as_jets():
    rng = random.Random(7)
    for _ in range(25):
        z = jets.variable(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
        s, c = jets.sin(z), jets.cos(z)
        total = s * s + c * c
        assert jet_close(total, (1, 0, 0, 0), 1e-10)


def test_domain_errors():
    with pytest.raises(DomainErrorJet):
        jets.log(jets.variable(0.0))
    with pytest.raises(DomainErrorJet):
        jets.cot(jets.variable(0.0))
    with pytest.raises(DomainErrorJet):
        jets.sqrt(jets.constant(0.0))


# --- integer and general powers -------------------------------------------

def test_powi():
    z = jets.variable(2.0)
    assert jet_close(jets.powi(z, 3), (8, 12, 12, 6))
    assert jet_close(jets.powi(z, 0), (1, 0, 0, 0))
    assert jet_close(jets.powi(z, -2), (0.25, -0.25, 0.375, -0.75))


def test_powc_matches_sqrt():
    z = jets.variable(0.7 + 0.4j)
    a = jets.powc(z, 0.5)
    b = jets.sqrt(z)
    assert jet_close(a, (b.d0, b.d1, b.d2, b.d3), 1e-12)


# --- algebraic properties --------------------------------------------------

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
jet_values = st.builds(
    jets.Jet3,
    st.builds(complex, finite, finite),
    st.builds(complex, finite, finite),
    st.builds(complex, finite, finite),
    st.builds(complex, finite, finite),
)


def _componentwise_close(a, b, tol):
    for x, y in zip((a.d0, a.d1, a.d2, a.d3), (b.d0, b.d1, b.d2, b.d3)):
        scale = max(1.0, abs(x), abs(y))
        assert abs(x - y) <= tol * scale


@given(jet_values, jet_values)
def test_mul_commutative(a, b):
    _componentwise_close(a * b, b * a, 1e-12)


@given(jet_values, jet_values, jet_values)
def test_mul_associative(a, b, c):
    _componentwise_close((a * b) * c, a * (b * c), 1e-12)


def test_mobius_transform_of_jet():
    j = jets.variable(0.3 + 0.1j)
    m = jets.mobius_transform(j, 1, 2, 0, 1)  # w + 2
    assert jet_close(m, (2.3 + 0.1j, 1, 0, 0))
