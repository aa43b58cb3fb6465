"""Truncated Laurent/Taylor series arithmetic around the origin.

A series is stored as a window of known coefficients: ``coeffs[k]`` is the
coefficient of ``z**(lead + k)``.  Coefficients below the window are exact
zeros; coefficients above it are unknown (lost to truncation), and every
operation tracks how far the result is still trustworthy.

Two normalized shapes matter here: a simple-pole form ``1/z + b0 + b1 z +
...`` (lead -1, unit leading coefficient) and an analytic form ``z + a2 z^2
+ ...`` (lead +1, unit leading coefficient).  ``reciprocal`` maps one onto
the other and is an involution up to truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ZeroLeadingCoefficient

DEFAULT_ORDER = 32


@dataclass(frozen=True)
class TruncatedSeries:
    lead: int
    coeffs: tuple[complex, ...]

    @property
    def order(self) -> int:
        """Number of known coefficients minus one."""
        return len(self.coeffs) - 1

    @property
    def top(self) -> int:
        """Highest exponent with a known coefficient."""
        return self.lead + len(self.coeffs) - 1

    def coefficient(self, exponent: int) -> complex:
        """Known coefficient of z**exponent (exact zero below the window)."""
        if exponent < self.lead:
            return 0j
        if exponent > self.top:
            raise IndexError(f"coefficient of z^{exponent} lost to truncation (top {self.top})")
        return self.coeffs[exponent - self.lead]

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1.0))

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return divide(self, other)


def from_coefficients(lead: int, coeffs, n: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Build a series from a coefficient list, padded/truncated to n+1 terms."""
    cs = [complex(c) for c in coeffs][: n + 1]
    cs.extend([0j] * (n + 1 - len(cs)))
    return TruncatedSeries(lead, tuple(cs))


def pole_series(b, n: int = DEFAULT_ORDER) -> TruncatedSeries:
    """1/z + b[0] + b[1] z + ... (simple-pole normalized form)."""
    return from_coefficients(-1, [1.0] + list(b), n)


def analytic_series(a, n: int = DEFAULT_ORDER) -> TruncatedSeries:
    """z + a[0] z^2 + a[1] z^3 + ... (analytic normalized form)."""
    return from_coefficients(1, [1.0] + list(a), n)


def is_pole_form(s: TruncatedSeries, tol: float = 0.0) -> bool:
    return s.lead == -1 and abs(s.coeffs[0] - 1.0) <= tol


def is_analytic_form(s: TruncatedSeries, tol: float = 0.0) -> bool:
    return s.lead == 1 and abs(s.coeffs[0] - 1.0) <= tol


def scale(s: TruncatedSeries, factor: complex) -> TruncatedSeries:
    return TruncatedSeries(s.lead, tuple(factor * c for c in s.coeffs))


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    lead = min(a.lead, b.lead)
    top = min(a.top, b.top)
    if top < lead:
        raise ValueError("truncation exhausted: sum has no known coefficients")
    cs = [a.coefficient(e) + b.coefficient(e) for e in range(lead, top + 1)]
    return TruncatedSeries(lead, tuple(cs))


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product; the known window ends where truncated terms would mix in."""
    lead = a.lead + b.lead
    top = min(a.top + b.lead, b.top + a.lead)
    if top < lead:
        raise ValueError("truncation exhausted: product has no known coefficients")
    out = []
    for e in range(lead, top + 1):
        acc = 0j
        k = e - lead  # sum over i + j = k of a_i * b_j in window indices
        lo = max(0, k - (len(b.coeffs) - 1))
        hi = min(k, len(a.coeffs) - 1)
        for i in range(lo, hi + 1):
            acc += a.coeffs[i] * b.coeffs[k - i]
        out.append(acc)
    return TruncatedSeries(lead, tuple(out))


def normalized(s: TruncatedSeries) -> TruncatedSeries:
    """Strip exactly-zero leading coefficients (window shrinks, no padding)."""
    k = 0
    while k < len(s.coeffs) and s.coeffs[k] == 0:
        k += 1
    if k == 0 or k == len(s.coeffs):
        return s
    return TruncatedSeries(s.lead + k, s.coeffs[k:])


def reciprocal(b: TruncatedSeries) -> TruncatedSeries:
    """1/b by leading-term normalization and recursive coefficient solve."""
    b = normalized(b)
    c0 = b.coeffs[0]
    if abs(c0) == 0.0:
        raise ZeroLeadingCoefficient("series reciprocal needs a nonzero leading coefficient")
    m = len(b.coeffs) - 1
    inv = [1.0 / c0] + [0j] * m
    for k in range(1, m + 1):
        acc = 0j
        for j in range(1, k + 1):
            acc += b.coeffs[j] * inv[k - j]
        inv[k] = -acc / c0
    return TruncatedSeries(-b.lead, tuple(inv))


def divide(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return mul(a, reciprocal(b))


def derivative(s: TruncatedSeries) -> TruncatedSeries:
    """Termwise derivative; any z^0 term drops out as a known zero."""
    cs = [(s.lead + k) * s.coeffs[k] for k in range(len(s.coeffs))]
    return TruncatedSeries(s.lead - 1, tuple(cs))


def series_close(a: TruncatedSeries, b: TruncatedSeries, tol: float) -> bool:
    """Max coefficient deviation over the common known window is <= tol."""
    lead = min(a.lead, b.lead)
    top = min(a.top, b.top)
    if top < lead:
        raise ValueError("series windows do not overlap")
    return all(abs(a.coefficient(e) - b.coefficient(e)) <= tol for e in range(lead, top + 1))


def schwarzian(s: TruncatedSeries) -> TruncatedSeries:
    """Series of (f''/f')' - (1/2)(f''/f')^2.

    A simple-pole input is replaced by its reciprocal first (the two share
    the same Schwarzian), so one analytic code path serves both shapes; the
    apparent double pole cancels and the result is analytic at 0.
    """
    if s.lead == -1:
        s = reciprocal(s)
    d1 = derivative(s)
    d2 = derivative(d1)
    q = divide(d2, d1)
    return add(derivative(q), scale(mul(q, q), -0.5))


def evaluate(s: TruncatedSeries, z: complex) -> complex:
    """Value of the truncated series at z (Horner on the window)."""
    acc = 0j
    for c in reversed(s.coeffs):
        acc = acc * z + c
    return acc * z**s.lead if s.lead >= 0 else acc / z ** (-s.lead)


def to_json_dict(s: TruncatedSeries) -> dict:
    return {"lead": s.lead, "coeffs": [[c.real, c.imag] for c in s.coeffs]}


def from_json_dict(d: dict) -> TruncatedSeries:
    return TruncatedSeries(int(d["lead"]), tuple(complex(re, im) for re, im in d["coeffs"]))
