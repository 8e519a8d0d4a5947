"""Fuzzy Associative Memory: rule table, rule files and Mamdani inference.

The table is a dense 4x4x4x4 array indexed by the ordinals of
(performance gap, weight, funding gap, deadline gap). Each cell holds a
(funding action, deadline action) pair.
"""
from __future__ import annotations

import csv
import enum
import io
import itertools
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import kernels
from .errors import DuplicateRule, EmptyAggregate, IncompleteTable, ParseError
from .fuzzy_core import (
    DEADLINE_GAP,
    FUNDING_GAP,
    PERFORMANCE_GAP,
    WEIGHT,
    GapTerm,
    LinguisticVariable,
    MembershipVector,
    PiecewiseLinearMF,
    WeightTerm,
    fuzzify,
    ruspini_partition,
)

GRID_POINTS = 1001
HEADER = ("perf_gap", "weight", "funding_gap", "deadline_gap", "funding_action", "deadline_action")


class FundingAction(enum.IntEnum):
    DECREASE_MUCH = 0
    DECREASE_LITTLE = 1
    DO_NOTHING = 2
    INCREASE_LITTLE = 3
    INCREASE_MUCH = 4

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", " ")


class DeadlineAction(enum.IntEnum):
    SHORTEN = 0
    DO_NOTHING = 1
    EXTEND = 2
    BIG_DELAY = 3

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", " ")


FUNDING_OUTPUT = ruspini_partition(
    "funding_adjustment", (-2.0, -1.0, 0.0, 1.0, 2.0), [a.label for a in FundingAction]
)

DEADLINE_OUTPUT = LinguisticVariable(
    "deadline_adjustment",
    -20.0,
    40.0,
    (
        (DeadlineAction.SHORTEN.label, PiecewiseLinearMF.left_shoulder(-10.0, 0.0)),
        (DeadlineAction.DO_NOTHING.label, PiecewiseLinearMF.triangle(-10.0, 0.0, 10.0)),
        (DeadlineAction.EXTEND.label, PiecewiseLinearMF.triangle(0.0, 10.0, 30.0)),
        (DeadlineAction.BIG_DELAY.label, PiecewiseLinearMF.right_shoulder(10.0, 30.0)),
    ),
)

INPUT_VARIABLES = (PERFORMANCE_GAP, WEIGHT, FUNDING_GAP, DEADLINE_GAP)
ANTECEDENT_TYPES = (GapTerm, WeightTerm, GapTerm, GapTerm)

# Published rule slice (funding gap and deadline gap both None), keyed by
# (performance gap, weight).
_F, _D = FundingAction, DeadlineAction
PUBLISHED_RULES = {
    (GapTerm.NONE, WeightTerm.NONE): (_F.DECREASE_LITTLE, _D.DO_NOTHING),
    (GapTerm.LOW, WeightTerm.NONE): (_F.DO_NOTHING, _D.SHORTEN),
    (GapTerm.HIGH, WeightTerm.NONE): (_F.INCREASE_LITTLE, _D.EXTEND),
    (GapTerm.EXTREME, WeightTerm.NONE): (_F.INCREASE_LITTLE, _D.BIG_DELAY),
    (GapTerm.NONE, WeightTerm.LOW): (_F.DECREASE_LITTLE, _D.DO_NOTHING),
    (GapTerm.LOW, WeightTerm.LOW): (_F.DO_NOTHING, _D.SHORTEN),
    (GapTerm.HIGH, WeightTerm.LOW): (_F.INCREASE_LITTLE, _D.EXTEND),
    (GapTerm.EXTREME, WeightTerm.LOW): (_F.INCREASE_LITTLE, _D.BIG_DELAY),
    (GapTerm.NONE, WeightTerm.HIGH): (_F.DO_NOTHING, _D.DO_NOTHING),
    (GapTerm.LOW, WeightTerm.HIGH): (_F.DO_NOTHING, _D.DO_NOTHING),
    (GapTerm.HIGH, WeightTerm.HIGH): (_F.INCREASE_MUCH, _D.DO_NOTHING),
    (GapTerm.EXTREME, WeightTerm.HIGH): (_F.INCREASE_MUCH, _D.DO_NOTHING),
    (GapTerm.NONE, WeightTerm.HEAVY): (_F.DO_NOTHING, _D.DO_NOTHING),
    (GapTerm.LOW, WeightTerm.HEAVY): (_F.INCREASE_LITTLE, _D.DO_NOTHING),
    (GapTerm.HIGH, WeightTerm.HEAVY): (_F.INCREASE_MUCH, _D.DO_NOTHING),
    (GapTerm.EXTREME, WeightTerm.HEAVY): (_F.INCREASE_MUCH, _D.DO_NOTHING),
}
del _F, _D


@dataclass(frozen=True)
class FamRule:
    perf: GapTerm
    weight: WeightTerm
    funding: GapTerm
    deadline: GapTerm
    funding_action: FundingAction
    deadline_action: DeadlineAction

    @property
    def antecedent(self):
        return (self.perf, self.weight, self.funding, self.deadline)

    @property
    def consequent(self):
        return (self.funding_action, self.deadline_action)

    def __str__(self):
        ante = ", ".join(t.label for t in self.antecedent)
        return f"({ante}) -> ({self.funding_action.label}, {self.deadline_action.label})"


class FamTable:
    """Complete 256-cell rule table. Immutable once built."""

    shape = (4, 4, 4, 4)

    def __init__(self, funding, deadline):
        funding = np.array(funding, dtype=np.int8)
        deadline = np.array(deadline, dtype=np.int8)
        if funding.shape != self.shape or deadline.shape != self.shape:
            raise ValueError(f"FAM arrays must have shape {self.shape}")
        funding.setflags(write=False)
        deadline.setflags(write=False)
        self._funding = funding
        self._deadline = deadline

    @classmethod
    def from_rules(cls, rules):
        funding = np.full(cls.shape, -1, dtype=np.int8)
        deadline = np.full(cls.shape, -1, dtype=np.int8)
        for rule in rules:
            idx = tuple(int(t) for t in rule.antecedent)
            funding[idx] = rule.funding_action
            deadline[idx] = rule.deadline_action
        missing = [
            tuple(typ(i) for typ, i in zip(ANTECEDENT_TYPES, idx))
            for idx in itertools.product(range(4), repeat=4)
            if funding[idx] < 0
        ]
        if missing:
            raise IncompleteTable(missing)
        return cls(funding, deadline)

    def lookup(self, perf, weight, funding, deadline):
        idx = (int(perf), int(weight), int(funding), int(deadline))
        return FundingAction(int(self._funding[idx])), DeadlineAction(int(self._deadline[idx]))

    def rules(self):
        """All 256 rules in lexicographic antecedent-ordinal order."""
        for idx in itertools.product(range(4), repeat=4):
            p, w, f, d = idx
            yield FamRule(
                GapTerm(p),
                WeightTerm(w),
                GapTerm(f),
                GapTerm(d),
                FundingAction(int(self._funding[idx])),
                DeadlineAction(int(self._deadline[idx])),
            )

    def __len__(self):
        return self._funding.size

    def __eq__(self, other):
        if not isinstance(other, FamTable):
            return NotImplemented
        return np.array_equal(self._funding, other._funding) and np.array_equal(
            self._deadline, other._deadline
        )

    __hash__ = None


def fam_lookup(table, perf, weight, funding, deadline):
    return table.lookup(perf, weight, funding, deadline)


# -- defuzzification --------------------------------------------------------


class _PackedTerms:
    """Breakpoints of every term of an output variable, flattened for the kernels."""

    def __init__(self, var: LinguisticVariable):
        self.var = var
        self.xs = np.ascontiguousarray(np.concatenate([mf.xs for _, mf in var.terms]))
        self.mus = np.ascontiguousarray(np.concatenate([mf.mus for _, mf in var.terms]))
        self.offsets = np.cumsum([0] + [len(mf.xs) for _, mf in var.terms]).astype(np.int64)


_PACKED = {}


def _packed(var):
    p = _PACKED.get(id(var))
    if p is None or p.var is not var:
        p = _PACKED[id(var)] = _PackedTerms(var)
    return p


def defuzz_centroid(var: LinguisticVariable, clips, n=GRID_POINTS) -> float:
    """Centroid of the pointwise max of ``var``'s terms clipped at ``clips``.

    Trapezoid rule on a uniform ``n``-point grid over the variable's domain.
    """
    p = _packed(var)
    clips = np.ascontiguousarray(clips, dtype=np.float64)
    if clips.shape != (len(var.terms),):
        raise ValueError(f"expected {len(var.terms)} clip levels, got {clips.shape}")
    num, den = kernels.clipped_centroid(var.lo, var.hi, n, p.xs, p.mus, p.offsets, clips)
    if den <= 0.0:
        raise EmptyAggregate(f"{var.name}: aggregated output has zero area")
    return num / den


# -- inference ----------------------------------------------------------------


@dataclass(frozen=True)
class InferenceResult:
    funding_adjustment: float
    deadline_adjustment: float
    fired_rules: tuple[tuple[FamRule, float], ...]
    memberships: tuple[MembershipVector, MembershipVector, MembershipVector, MembershipVector]
    funding_clips: tuple[float, ...]
    deadline_clips: tuple[float, ...]

    def funding_argmax(self) -> FundingAction:
        return FundingAction(max(range(len(self.funding_clips)), key=self.funding_clips.__getitem__))

    def deadline_argmax(self) -> DeadlineAction:
        return DeadlineAction(
            max(range(len(self.deadline_clips)), key=self.deadline_clips.__getitem__)
        )

    def to_dict(self):
        names = ("perf_gap", "weight", "funding_gap", "deadline_gap")
        return {
            "funding_adjustment": self.funding_adjustment,
            "deadline_adjustment": self.deadline_adjustment,
            "memberships": {n: mv.as_dict() for n, mv in zip(names, self.memberships)},
            "fired_rules": [
                {
                    "antecedent": [t.label for t in rule.antecedent],
                    "funding_action": rule.funding_action.label,
                    "deadline_action": rule.deadline_action.label,
                    "activation": act,
                }
                for rule, act in self.fired_rules
            ],
        }


def infer(table: FamTable, perf_gap, weight, funding_gap, deadline_gap) -> InferenceResult:
    """Mamdani min-max inference followed by centroid defuzzification."""
    mvs = tuple(
        fuzzify(var, x)
        for var, x in zip(INPUT_VARIABLES, (perf_gap, weight, funding_gap, deadline_gap))
    )
    fclips = [0.0] * len(FundingAction)
    dclips = [0.0] * len(DeadlineAction)
    fired = []
    # only terms with nonzero membership can fire, so at most 2**4 rules
    for combo in itertools.product(*(mv.nonzero() for mv in mvs)):
        act = min(d for _, d in combo)
        p, w, f, d = (i for i, _ in combo)
        fa, da = table.lookup(p, w, f, d)
        fired.append((FamRule(GapTerm(p), WeightTerm(w), GapTerm(f), GapTerm(d), fa, da), act))
        fclips[fa] = max(fclips[fa], act)
        dclips[da] = max(dclips[da], act)
    if not fired:
        raise EmptyAggregate("no rule fired")
    return InferenceResult(
        defuzz_centroid(FUNDING_OUTPUT, fclips),
        defuzz_centroid(DEADLINE_OUTPUT, dclips),
        tuple(fired),
        mvs,
        tuple(fclips),
        tuple(dclips),
    )


# -- rule files -----------------------------------------------------------------


def _vocab(enum_cls):
    return {m.label: m for m in enum_cls}


_GAP_VOCAB = _vocab(GapTerm)
_WEIGHT_VOCAB = _vocab(WeightTerm)
_FUNDING_VOCAB = _vocab(FundingAction)
_DEADLINE_VOCAB = _vocab(DeadlineAction)
_COLUMNS = (
    ("performance gap", _GAP_VOCAB),
    ("weight", _WEIGHT_VOCAB),
    ("funding gap", _GAP_VOCAB),
    ("deadline gap", _GAP_VOCAB),
    ("funding action", _FUNDING_VOCAB),
    ("deadline action", _DEADLINE_VOCAB),
)


def _norm(cell):
    return " ".join(cell.strip().lower().split())


def parse_rules(text: str) -> FamTable:
    """Parse rule-file CSV text into a complete table.

    Errors cite 1-based line numbers of the file.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing header", 1)
    header = tuple(_norm(c) for c in next(csv.reader([lines[0]])))
    if header != HEADER:
        raise ParseError(f"bad header, expected {','.join(HEADER)}", 1)
    seen = {}
    rules = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = next(csv.reader([line]))
        if len(cells) != len(HEADER):
            raise ParseError(f"expected {len(HEADER)} columns, got {len(cells)}", lineno)
        values = []
        for cell, (what, vocab) in zip(cells, _COLUMNS):
            term = vocab.get(_norm(cell))
            if term is None:
                raise ParseError(f"unknown {what} {cell.strip()!r}", lineno)
            values.append(term)
        rule = FamRule(*values)
        if rule.antecedent in seen:
            raise DuplicateRule(
                f"antecedent ({','.join(t.label for t in rule.antecedent)}) "
                f"already defined on line {seen[rule.antecedent]}",
                lineno,
            )
        seen[rule.antecedent] = lineno
        rules.append(rule)
    return FamTable.from_rules(rules)


def serialize_rules(table: FamTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for rule in table.rules():
        writer.writerow([t.label for t in rule.antecedent + rule.consequent])
    return buf.getvalue()


def load_rules(path) -> FamTable:
    """Load a rule file; ``"default"`` selects the shipped rules."""
    if str(path) == "default":
        return default_table()
    return parse_rules(Path(path).read_text(encoding="utf-8"))


def default_rules_text() -> str:
    return resources.files("fuzzysos").joinpath("data/default_rules.csv").read_text("utf-8")


_DEFAULT = None


def default_table() -> FamTable:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = parse_rules(default_rules_text())
    return _DEFAULT


# -- default rule completion --------------------------------------------------


def _funding_shift(funding_gap: GapTerm, weight: WeightTerm) -> int:
    if funding_gap == GapTerm.HIGH:
        return 1 if weight >= WeightTerm.HIGH else -1
    if funding_gap == GapTerm.EXTREME:
        return {WeightTerm.NONE: -2, WeightTerm.LOW: -1, WeightTerm.HIGH: 1, WeightTerm.HEAVY: 2}[
            weight
        ]
    return 0


def _deadline_shift(deadline_gap: GapTerm) -> int:
    return {GapTerm.NONE: 0, GapTerm.LOW: 0, GapTerm.HIGH: 1, GapTerm.EXTREME: 2}[deadline_gap]


def _shift(action, by):
    cls = type(action)
    return cls(min(max(int(action) + by, 0), len(cls) - 1))


def generate_default_rules() -> FamTable:
    """Published rules plus a monotone completion of the other 240 cells.

    Cells with a nonzero funding or deadline gap start from the published
    (performance, weight) rule and move along the action ladders: a bigger
    funding gap pushes funding up for weighty capabilities and down for
    light ones, a bigger deadline gap pushes toward longer extensions.
    """
    rules = []
    for p, w, f, d in itertools.product(GapTerm, WeightTerm, GapTerm, GapTerm):
        fa, da = PUBLISHED_RULES[(p, w)]
        rules.append(
            FamRule(p, w, f, d, _shift(fa, _funding_shift(f, w)), _shift(da, _deadline_shift(d)))
        )
    return FamTable.from_rules(rules)
