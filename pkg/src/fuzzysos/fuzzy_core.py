"""Linguistic variables, membership functions and crisp gap classification."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

PARTITION_TOL = 1e-9
ZERO_GAP_TOL = 0.05


class GapTerm(enum.IntEnum):
    NONE = 0
    LOW = 1
    HIGH = 2
    EXTREME = 3

    @property
    def label(self) -> str:
        return self.name.lower()


class WeightTerm(enum.IntEnum):
    NONE = 0
    LOW = 1
    HIGH = 2
    HEAVY = 3

    @property
    def label(self) -> str:
        return self.name.lower()


class GapKind(str, enum.Enum):
    PERFORMANCE = "performance"
    FUNDING = "funding"
    DEADLINE = "deadline"


# (t1, t2, domain max) for each gap kind; bins follow the published table.
GAP_THRESHOLDS = {
    GapKind.PERFORMANCE: (2.0, 7.0, 9.0),
    GapKind.FUNDING: (3.5, 6.5, 9.0),
    GapKind.DEADLINE: (20.0, 80.0, 99.0),
}


@dataclass(frozen=True)
class PiecewiseLinearMF:
    """Membership function given by ``(x, mu)`` breakpoints.

    Linear between breakpoints and constant beyond the first/last one.
    """

    breakpoints: tuple[tuple[float, float], ...]
    _xs: np.ndarray = field(init=False, repr=False, compare=False)
    _mus: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bps = tuple((float(x), float(mu)) for x, mu in self.breakpoints)
        if len(bps) < 2:
            raise ValueError("a membership function needs at least two breakpoints")
        for (x0, _), (x1, _) in zip(bps, bps[1:]):
            if not x1 > x0:
                raise ValueError(f"breakpoints must be strictly increasing in x: {x0} !< {x1}")
        for _, mu in bps:
            if not 0.0 <= mu <= 1.0:
                raise ValueError(f"membership {mu} outside [0, 1]")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "_xs", np.array([b[0] for b in bps], dtype=np.float64))
        object.__setattr__(self, "_mus", np.array([b[1] for b in bps], dtype=np.float64))

    @classmethod
    def triangle(cls, a, b, c):
        return cls(((a, 0.0), (b, 1.0), (c, 0.0)))

    @classmethod
    def left_shoulder(cls, top, zero):
        """1 up to ``top``, falling linearly to 0 at ``zero``."""
        return cls(((top, 1.0), (zero, 0.0)))

    @classmethod
    def right_shoulder(cls, zero, top):
        """0 up to ``zero``, rising linearly to 1 at ``top`` and staying there."""
        return cls(((zero, 0.0), (top, 1.0)))

    @property
    def xs(self) -> np.ndarray:
        return self._xs

    @property
    def mus(self) -> np.ndarray:
        return self._mus

    def __call__(self, x: float) -> float:
        return kernels.pwl_eval(self._xs, self._mus, float(x))


def eval_mf(mf: PiecewiseLinearMF, x: float) -> float:
    return mf(x)


@dataclass(frozen=True)
class MembershipVector:
    terms: tuple[str, ...]
    degrees: tuple[float, ...]

    def __getitem__(self, term: str) -> float:
        return self.degrees[self.terms.index(term)]

    def items(self):
        return zip(self.terms, self.degrees)

    def argmax(self) -> int:
        return max(range(len(self.degrees)), key=self.degrees.__getitem__)

    def nonzero(self):
        """``(ordinal, degree)`` pairs with strictly positive degree."""
        return [(i, d) for i, d in enumerate(self.degrees) if d > 0.0]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.terms, self.degrees))


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    lo: float
    hi: float
    terms: tuple[tuple[str, PiecewiseLinearMF], ...]

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"{self.name}: empty domain [{self.lo}, {self.hi}]")
        names = [t for t, _ in self.terms]
        if len(set(names)) != len(names):
            raise ValueError(f"{self.name}: duplicate term names {names}")
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def term_names(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.terms)

    def mf(self, term: str) -> PiecewiseLinearMF:
        for name, mf in self.terms:
            if name == term:
                return mf
        raise KeyError(term)

    def clamp(self, x: float) -> float:
        return min(max(float(x), self.lo), self.hi)

    def check_partition(self, samples=10_001, tol=PARTITION_TOL):
        """Largest deviation of sum(mu) from 1 over a uniform sweep; raises if > tol."""
        worst = 0.0
        for x in np.linspace(self.lo, self.hi, samples):
            worst = max(worst, abs(sum(mf(x) for _, mf in self.terms) - 1.0))
        if worst > tol:
            raise ValueError(f"{self.name}: not a partition of unity (max deviation {worst:g})")
        return worst


def ruspini_partition(name, peaks, term_names, hi=None):
    """Triangular partition of unity over ``peaks``.

    The first term is a left shoulder, the last a right shoulder that holds
    at 1 up to ``hi`` (defaults to the last peak).
    """
    peaks = [float(p) for p in peaks]
    hi = peaks[-1] if hi is None else float(hi)
    terms = []
    last = len(peaks) - 1
    for i, (term, p) in enumerate(zip(term_names, peaks)):
        if i == 0:
            mf = PiecewiseLinearMF.left_shoulder(p, peaks[1])
        elif i == last:
            mf = PiecewiseLinearMF.right_shoulder(peaks[i - 1], p)
        else:
            mf = PiecewiseLinearMF.triangle(peaks[i - 1], p, peaks[i + 1])
        terms.append((term, mf))
    return LinguisticVariable(name, peaks[0], hi, tuple(terms))


def gap_peaks(kind: GapKind) -> tuple[float, float, float, float]:
    t1, t2, gmax = GAP_THRESHOLDS[GapKind(kind)]
    return (0.0, t1 / 2, (t1 + t2) / 2, (t2 + gmax) / 2)


def gap_variable(kind: GapKind) -> LinguisticVariable:
    kind = GapKind(kind)
    gmax = GAP_THRESHOLDS[kind][2]
    return ruspini_partition(
        f"{kind.value}_gap", gap_peaks(kind), [t.label for t in GapTerm], hi=gmax
    )


WEIGHT_PEAKS = (0.0, 1 / 3, 2 / 3, 1.0)


def weight_variable() -> LinguisticVariable:
    return ruspini_partition("weight", WEIGHT_PEAKS, [t.label for t in WeightTerm])


PERFORMANCE_GAP = gap_variable(GapKind.PERFORMANCE)
FUNDING_GAP = gap_variable(GapKind.FUNDING)
DEADLINE_GAP = gap_variable(GapKind.DEADLINE)
WEIGHT = weight_variable()

GAP_VARIABLES = {
    GapKind.PERFORMANCE: PERFORMANCE_GAP,
    GapKind.FUNDING: FUNDING_GAP,
    GapKind.DEADLINE: DEADLINE_GAP,
}


def fuzzify(var: LinguisticVariable, x: float) -> MembershipVector:
    x = var.clamp(x)
    return MembershipVector(var.term_names, tuple(mf(x) for _, mf in var.terms))


def classify_gap(kind: GapKind, gap: float) -> GapTerm:
    """Hard binning of a crisp gap; the thresholds themselves belong to HIGH."""
    t1, t2, _ = GAP_THRESHOLDS[GapKind(kind)]
    gap = max(0.0, float(gap))
    if gap < ZERO_GAP_TOL:
        return GapTerm.NONE
    if gap < t1:
        return GapTerm.LOW
    if gap <= t2:
        return GapTerm.HIGH
    return GapTerm.EXTREME


def classify_weight(w: float) -> WeightTerm:
    """Nearest weight peak; exact midpoints go to the heavier term."""
    w = min(max(float(w), 0.0), 1.0)
    return WeightTerm(min(3, math.floor(3.0 * w + 0.5)))
