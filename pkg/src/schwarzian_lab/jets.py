"""Third-order jets over the complex numbers.

A ``Jet3`` packs a function value together with its first three derivatives
at a point, so composite expressions propagate (f, f', f'', f''') exactly
(up to floating point) through arithmetic and elementary functions.  Order
three is the smallest structure the Schwarzian derivative needs.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

from .errors import DivisionByZeroJet, DomainErrorJet

# Denominators with modulus at or below this are treated as exact zeros.
DIV_GUARD = 1e-300

Scalar = (int, float, complex)


@dataclass(frozen=True)
class Jet3:
    """Value and first three derivatives of a function at one point."""

    d0: complex
    d1: complex = 0j
    d2: complex = 0j
    d3: complex = 0j

    def __add__(self, other):
        o = _lift(other)
        return Jet3(self.d0 + o.d0, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.d0, -self.d1, -self.d2, -self.d3)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) + (-self)

    def __mul__(self, other):
        o = _lift(other)
        a, b = self, o
        return Jet3(
            a.d0 * b.d0,
            a.d1 * b.d0 + a.d0 * b.d1,
            a.d2 * b.d0 + 2 * a.d1 * b.d1 + a.d0 * b.d2,
            a.d3 * b.d0 + 3 * a.d2 * b.d1 + 3 * a.d1 * b.d2 + a.d0 * b.d3,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * reciprocal(_lift(other))

    def __rtruediv__(self, other):
        return _lift(other) * reciprocal(self)


def _lift(x) -> Jet3:
    if isinstance(x, Jet3):
        return x
    if isinstance(x, Scalar):
        return Jet3(complex(x))
    raise TypeError(f"cannot lift {type(x).__name__} to a jet")


def variable(z0: complex) -> Jet3:
    """Jet of the identity map z at the point z0: (z0, 1, 0, 0)."""
    return Jet3(complex(z0), 1.0 + 0j)


def constant(c: complex) -> Jet3:
    """Jet of a constant: all derivative slots zero."""
    return Jet3(complex(c))


def _compose(a: Jet3, f0: complex, f1: complex, f2: complex, f3: complex) -> Jet3:
    """Chain rule through order three for an outer function with the given
    derivative ladder evaluated at a.d0."""
    u1, u2, u3 = a.d1, a.d2, a.d3
    return Jet3(
        f0,
        f1 * u1,
        f2 * u1 * u1 + f1 * u2,
        f3 * u1 * u1 * u1 + 3 * f2 * u1 * u2 + f1 * u3,
    )


def _finite(*vals: complex) -> bool:
    return all(cmath.isfinite(v) for v in vals)


def _ladder(a: Jet3, kind: str, f0, f1, f2, f3) -> Jet3:
    if not _finite(f0, f1, f2, f3):
        raise DomainErrorJet(f"{kind} evaluated at a pole or branch point ({a.d0})")
    return _compose(a, f0, f1, f2, f3)


def reciprocal(a: Jet3) -> Jet3:
    if abs(a.d0) <= DIV_GUARD:
        raise DivisionByZeroJet(f"division by zero jet (value {a.d0})")
    w = a.d0
    iw = 1.0 / w
    return _ladder(a, "1/", iw, -iw * iw, 2 * iw**3, -6 * iw**4)


def exp(a: Jet3) -> Jet3:
    try:
        e = cmath.exp(a.d0)
    except OverflowError:
        raise DomainErrorJet(f"exp overflow at {a.d0}") from None
    return _ladder(a, "exp", e, e, e, e)


def log(a: Jet3) -> Jet3:
    """Principal branch; the argument must stay off 0."""
    w = a.d0
    if abs(w) <= DIV_GUARD:
        raise DomainErrorJet(f"log at branch point ({w})")
    iw = 1.0 / w
    return _ladder(a, "log", cmath.log(w), iw, -iw * iw, 2 * iw**3)


def sqrt(a: Jet3) -> Jet3:
    """Principal branch; the argument must stay off 0."""
    w = a.d0
    if abs(w) <= DIV_GUARD:
        raise DomainErrorJet(f"sqrt at branch point ({w})")
    s = cmath.sqrt(w)
    return _ladder(a, "sqrt", s, 0.5 / s, -0.25 / s**3, 0.375 / s**5)


def sin(a: Jet3) -> Jet3:
    s, c = cmath.sin(a.d0), cmath.cos(a.d0)
    return _ladder(a, "sin", s, c, -s, -c)


def cos(a: Jet3) -> Jet3:
    s, c = cmath.sin(a.d0), cmath.cos(a.d0)
    return _ladder(a, "cos", c, -s, -c, s)


def tan(a: Jet3) -> Jet3:
    c = cmath.cos(a.d0)
    if abs(c) <= DIV_GUARD:
        raise DomainErrorJet(f"tan at a pole ({a.d0})")
    t = cmath.sin(a.d0) / c
    sec2 = 1 + t * t
    return _ladder(a, "tan", t, sec2, 2 * t * sec2, sec2 * (2 + 6 * t * t))


def cot(a: Jet3) -> Jet3:
    s = cmath.sin(a.d0)
    if abs(s) <= DIV_GUARD:
        raise DomainErrorJet(f"cot at a pole ({a.d0})")
    t = cmath.cos(a.d0) / s
    csc2 = 1 + t * t
    return _ladder(a, "cot", t, -csc2, 2 * t * csc2, -csc2 * (2 + 6 * t * t))


def sinh(a: Jet3) -> Jet3:
    s, c = cmath.sinh(a.d0), cmath.cosh(a.d0)
    return _ladder(a, "sinh", s, c, s, c)


def cosh(a: Jet3) -> Jet3:
    s, c = cmath.sinh(a.d0), cmath.cosh(a.d0)
    return _ladder(a, "cosh", c, s, c, s)


def tanh(a: Jet3) -> Jet3:
    c = cmath.cosh(a.d0)
    if abs(c) <= DIV_GUARD:
        raise DomainErrorJet(f"tanh at a pole ({a.d0})")
    t = cmath.sinh(a.d0) / c
    sech2 = 1 - t * t
    return _ladder(a, "tanh", t, sech2, -2 * t * sech2, sech2 * (6 * t * t - 2))


def powi(a: Jet3, n: int) -> Jet3:
    """Integer power by repeated multiplication; negative n via reciprocal."""
    if n < 0:
        return reciprocal(powi(a, -n))
    out = constant(1.0)
    for _ in range(n):
        out = out * a
    return out


def powc(a: Jet3, exponent: complex) -> Jet3:
    """General power via exp(exponent * log a), principal branch."""
    return exp(constant(exponent) * log(a))


ELEMENTARY: dict[str, Callable[[Jet3], Jet3]] = {
    "exp": exp,
    "log": log,
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "cot": cot,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
    "sqrt": sqrt,
    "inv": reciprocal,
}


def elementary(kind: str, a: Jet3) -> Jet3:
    """Apply a named elementary function to a jet."""
    try:
        fn = ELEMENTARY[kind]
    except KeyError:
        raise KeyError(f"no elementary jet function {kind!r}") from None
    return fn(a)


def mobius_transform(a: Jet3, pa: complex, pb: complex, pc: complex, pd: complex) -> Jet3:
    """Jet of (pa*w + pb)/(pc*w + pd) post-composed with the jet a."""
    return (constant(pa) * a + constant(pb)) / (constant(pc) * a + constant(pd))


def fd_jet_oracle(f: Callable[[complex], complex], z0: complex, h: float = 1e-4) -> Jet3:
    """Central finite-difference estimate of a jet, for testing only.

    Uses real steps along the real axis of the argument; second-order
    accurate stencils, so d3 carries the largest noise.
    """
    z0 = complex(z0)
    fp2, fp1 = f(z0 + 2 * h), f(z0 + h)
    fm1, fm2 = f(z0 - h), f(z0 - 2 * h)
    f0 = f(z0)
    return Jet3(
        f0,
        (fp1 - fm1) / (2 * h),
        (fp1 - 2 * f0 + fm1) / (h * h),
        (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h**3),
    )
