"""Disk sampling grids and check verdicts.

Radii are geometrically spaced in distance to the unit circle, so samples
cluster toward the outer rim where the margins of the open conditions
degenerate.  Verdicts report the raw sampled infimum of the inequality
slack plus the point attaining it, so callers can apply their own
tolerance on top of the strictness threshold used here.
"""

from __future__ import annotations

import cmath
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

# Strict inequalities hold on samples when the margin clears this slack.
EPS_STRICT = 1e-12


@dataclass(frozen=True)
class GridSpec:
    r_min: float = 1e-3
    r_max: float = 0.99
    n_radial: int = 64
    n_angular: int = 256

    def __post_init__(self):
        if not 0.0 <= self.r_min < self.r_max < 1.0:
            raise ValueError(f"need 0 <= r_min < r_max < 1, got [{self.r_min}, {self.r_max}]")
        if self.n_radial < 8 or self.n_angular < 8:
            raise ValueError("need at least 8 radial and 8 angular samples")

    def radii(self) -> list[float]:
        """n_radial radii from r_min to r_max, clustering toward r_max."""
        gap0 = 1.0 - self.r_min
        ratio = (1.0 - self.r_max) / gap0
        n = self.n_radial
        return [1.0 - gap0 * ratio ** (k / (n - 1)) for k in range(n)]

    def angles(self) -> list[float]:
        tau = 2.0 * cmath.pi
        return [tau * j / self.n_angular for j in range(self.n_angular)]

    def points(self) -> Iterable[complex]:
        for r in self.radii():
            for t in self.angles():
                yield r * cmath.exp(1j * t)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse the CLI flag format 'rmin:rmax:nr:ntheta'."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"grid spec {text!r} is not rmin:rmax:nr:ntheta")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]), int(parts[3]))


@dataclass(frozen=True)
class ClassVerdict:
    """Outcome of a disk-grid membership check.

    holds is True when the sampled infimum of the inequality slack clears
    EPS_STRICT; witness is the sample attaining the worst margin.  skipped
    counts samples excluded by an antecedent (used by implication probes).
    """

    holds: bool
    worst_margin: float
    witness: complex
    samples: int
    skipped: int = 0

    def to_json_dict(self) -> dict:
        d = {
            "holds": self.holds,
            "worst_margin": self.worst_margin,
            "witness": [self.witness.real, self.witness.imag],
            "samples": self.samples,
        }
        if self.skipped:
            d["skipped"] = self.skipped
        return d


def thread_count() -> int:
    """Worker cap from SCHWARZIAN_LAB_THREADS (default 1: serial)."""
    try:
        return max(1, int(os.environ.get("SCHWARZIAN_LAB_THREADS", "1")))
    except ValueError:
        return 1


_T = TypeVar("_T")
_R = TypeVar("_R")


def ordered_map(fn: Callable[[_T], _R], items: Sequence[_T]) -> list[_R]:
    """Map preserving input order; threads when the env cap allows them.

    Per-item work must be independent; the reduction the callers perform is
    order-independent, so results are identical in serial and threaded runs.
    """
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def verdict_from_margins(
    margins: Iterable[tuple[float, complex]],
    skipped: int = 0,
) -> ClassVerdict:
    """Fold (margin, point) pairs into a ClassVerdict (first minimum wins)."""
    worst = None
    witness = 0j
    count = 0
    for m, z in margins:
        count += 1
        if worst is None or m < worst:
            worst, witness = m, z
    if worst is None:
        raise ValueError("no samples to fold into a verdict")
    return ClassVerdict(worst > EPS_STRICT, worst, witness, count, skipped)
