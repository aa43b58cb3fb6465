"""Exception hierarchy for the toolkit.

Every error that a public operation can signal is a subclass of
SchwarzianLabError, so callers (and the CLI) can distinguish domain
failures from programming mistakes with a single except clause.
"""

from __future__ import annotations


class SchwarzianLabError(Exception):
    """Base class for all signalled failures."""


# --- jet evaluation -----------------------------------------------------


class DivisionByZeroJet(SchwarzianLabError):
    """Division where the denominator value is (numerically) zero.

    Signals evaluation at a pole or zero; carries the source span of the
    offending subexpression when raised through the expression evaluator.
    """

    def __init__(self, message: str, span: tuple[int, int] | None = None):
        super().__init__(message)
        self.span = span


class DomainErrorJet(SchwarzianLabError):
    """Elementary function evaluated at a pole or branch point."""

    def __init__(self, message: str, span: tuple[int, int] | None = None):
        super().__init__(message)
        self.span = span


# --- expression language ------------------------------------------------


class ExprSyntaxError(SchwarzianLabError):
    """Parse failure, with a 0-based byte offset and the expected tokens."""

    def __init__(self, offset: int, expected: set[str], found: str = ""):
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        want = ", ".join(sorted(expected))
        what = repr(found) if found else "end of input"
        super().__init__(f"syntax error at offset {offset}: expected {want}, found {what}")


class UnknownFunction(SchwarzianLabError):
    """Call to a name outside the supported function set."""

    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown function {name!r} at offset {offset}")


class MissingParameter(SchwarzianLabError):
    """Evaluation environment lacks a binding for a named parameter."""

    def __init__(self, name: str, span: tuple[int, int] | None = None):
        self.name = name
        self.span = span
        super().__init__(f"no value bound for parameter {name!r}")


# --- series -------------------------------------------------------------


class ZeroLeadingCoefficient(SchwarzianLabError):
    """Series division/reciprocal needs an invertible leading coefficient."""


# --- constants ----------------------------------------------------------


class DomainError(SchwarzianLabError):
    """Argument outside the documented domain of a function."""


class EtaTooLarge(SchwarzianLabError):
    """Second-coefficient bound eta is not below the admissible threshold."""


class HypothesisViolated(SchwarzianLabError):
    """Parameter pair fails the hypothesis of the order formula."""


# --- disk-grid classification ------------------------------------------


class _WitnessError(SchwarzianLabError):
    def __init__(self, message: str, witness: complex):
        super().__init__(f"{message} at z = {witness}")
        self.witness = witness


class NotLocallyUnivalent(_WitnessError):
    """|f'(z)| fell below the local-univalence guard."""

    def __init__(self, witness: complex):
        super().__init__("derivative vanishes (not locally univalent)", witness)


class PoleInGrid(_WitnessError):
    """A non-origin pole was hit while sampling the disk."""

    def __init__(self, witness: complex):
        super().__init__("pole hit inside the sampling grid", witness)


class ZeroOfF(_WitnessError):
    """The meromorphic function vanishes in the punctured disk."""

    def __init__(self, witness: complex):
        super().__init__("function vanishes in the punctured disk", witness)


class ZeroOfG(_WitnessError):
    """The analytic function vanishes away from the origin."""

    def __init__(self, witness: complex):
        super().__init__("function vanishes away from the origin", witness)


# --- radial ODE machinery ----------------------------------------------


class PotentialSingularOnRay(SchwarzianLabError):
    """Coefficient function could not be evaluated on the integration ray."""


class WZeroAtEvaluationPoint(SchwarzianLabError):
    """Identity endpoint degenerate: the solution vanishes there."""


class CotSingular(SchwarzianLabError):
    """r*sqrt(c) too close to a multiple of pi for cot to be evaluated."""


class CNotAboveCAlpha(SchwarzianLabError):
    """Sharpness witness requested for a bound not exceeding the critical one."""


class DenominatorVanishes(SchwarzianLabError):
    """Combined solution in the quotient map vanished at a requested point."""

    def __init__(self, witness: complex):
        super().__init__(f"quotient denominator vanishes at z = {witness}")
        self.witness = witness
