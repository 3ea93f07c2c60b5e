"""Photon counting, heralding and partial Bell-state analysis."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from . import linear_optics as lo
from .fock import Occupation, PureState


@dataclass(frozen=True)
class Count:
    """Acceptance rule for the photon number seen by one detector."""

    kind: str
    k: int = 0

    def __call__(self, n: int) -> bool:
        if self.kind == "exactly":
            return n == self.k
        if self.kind == "at_least":
            return n >= self.k
        return True


def exactly(k: int) -> Count:
    return Count("exactly", k)


def at_least(k: int) -> Count:
    return Count("at_least", k)


ANY = Count("any")


@dataclass(frozen=True)
class Branch:
    outcome: Occupation
    probability: float
    state: PureState | None


@dataclass(frozen=True)
class ConditionalState:
    """Result of heralding on a detector pattern.

    ``probability`` is the total weight of every matching outcome.  When a
    single outcome matches, ``state`` is the normalized state of the unmeasured
    modes; a pattern admitting several outcomes leaves a mixture described by
    ``branches``.  Unpacks as ``state, probability``.
    """

    probability: float
    branches: tuple[Branch, ...]

    @property
    def state(self) -> PureState | None:
        if not self.branches:
            return None
        if len(self.branches) > 1:
            raise ValueError("pattern matched several outcomes; inspect .branches")
        return self.branches[0].state

    @property
    def empty(self) -> bool:
        return not self.branches

    def __iter__(self) -> Iterator:
        yield self.state
        yield self.probability


def _split(psi: PureState, modes: Sequence[int]):
    modes = list(modes)
    if len(set(modes)) != len(modes) or any(not 0 <= m < psi.mode_count for m in modes):
        raise ValueError(f"invalid measured modes {modes}")
    rest = [i for i in range(psi.mode_count) if i not in modes]
    return modes, rest


def _thin(dist: dict, efficiency: float) -> dict:
    # a detector of efficiency e behaves like a beamsplitter of transmission e
    # feeding an ideal counter, with the reflected light discarded
    out: dict = {}
    for outcome, p in dist.items():
        options = [
            [(k, math.comb(n, k) * efficiency**k * (1 - efficiency) ** (n - k)) for k in range(n + 1)]
            for n in outcome
        ]
        stack = [((), p)]
        for opts in options:
            stack = [(o + (k,), q * w) for o, q in stack for k, w in opts]
        for o, q in stack:
            out[o] = out.get(o, 0.0) + q
    return out


def outcome_distribution(
    psi: PureState, modes: Sequence[int], efficiency: float = 1.0
) -> dict[Occupation, float]:
    """Probabilities of every photon-count pattern on ``modes``."""
    modes, _ = _split(psi, modes)
    if not 0 <= efficiency <= 1:
        raise ValueError("detector efficiency must lie in [0, 1]")
    norm = psi.norm() ** 2
    if norm == 0:
        raise ValueError("zero state has no outcome distribution")
    dist: dict[Occupation, float] = {}
    for occ, amp in psi.terms.items():
        key = tuple(occ[m] for m in modes)
        dist[key] = dist.get(key, 0.0) + abs(amp) ** 2 / norm
    if efficiency < 1:
        dist = _thin(dist, efficiency)
    return dict(sorted(dist.items()))


def condition(
    psi: PureState,
    modes: Sequence[int],
    pattern: Sequence[Count] | Sequence[int],
) -> ConditionalState:
    """Herald on ``pattern`` (one rule or integer per measured mode)."""
    modes, rest = _split(psi, modes)
    if len(pattern) != len(modes):
        raise ValueError("pattern length must match the measured modes")
    rules = [exactly(p) if isinstance(p, (int, np.integer)) else p for p in pattern]
    norm = psi.norm() ** 2
    groups: dict[Occupation, dict] = {}
    for occ, amp in psi.terms.items():
        seen = tuple(occ[m] for m in modes)
        if all(rule(n) for rule, n in zip(rules, seen)):
            groups.setdefault(seen, {})[tuple(occ[i] for i in rest)] = amp
    branches = []
    total = 0.0
    for seen in sorted(groups):
        terms = groups[seen]
        weight = sum(abs(a) ** 2 for a in terms.values()) / norm
        scale = 1 / math.sqrt(weight * norm)
        state = PureState.from_terms(len(rest), {o: a * scale for o, a in terms.items()}, psi.cutoff)
        branches.append(Branch(seen, weight, state))
        total += weight
    return ConditionalState(total, tuple(branches))


def project(psi: PureState, modes: Sequence[int], counts: Sequence[int]) -> PureState:
    """Unnormalized projection onto a definite count pattern, measured modes removed."""
    modes, rest = _split(psi, modes)
    counts = tuple(counts)
    terms = {
        tuple(occ[i] for i in rest): amp
        for occ, amp in psi.terms.items()
        if tuple(occ[m] for m in modes) == counts
    }
    return PureState.from_terms(len(rest), terms, psi.cutoff)


def postselect(
    psi: PureState, groups: Sequence[tuple[Sequence[int], Count]]
) -> tuple[PureState | None, float]:
    """Coherently keep the terms whose photon number in each mode group passes its rule.

    Unlike ``condition`` nothing is removed, so this models coincidence
    post-selection on the output qubits themselves.
    """
    norm = psi.norm() ** 2
    kept = {
        occ: amp
        for occ, amp in psi.terms.items()
        if all(rule(sum(occ[m] for m in grp)) for grp, rule in groups)
    }
    weight = sum(abs(a) ** 2 for a in kept.values()) / norm
    if weight == 0:
        return None, 0.0
    scale = 1 / math.sqrt(weight * norm)
    return PureState.from_terms(psi.mode_count, {o: a * scale for o, a in kept.items()}, psi.cutoff), weight


def sample(
    psi: PureState,
    modes: Sequence[int],
    rng: np.random.Generator,
    shots: int = 1,
    efficiency: float = 1.0,
) -> list[Occupation]:
    dist = outcome_distribution(psi, modes, efficiency)
    outcomes = list(dist)
    p = np.array([dist[o] for o in outcomes])
    picks = rng.choice(len(outcomes), size=shots, p=p / p.sum())
    return [outcomes[i] for i in picks]


def outcomes_to_csv(dist: dict[Occupation, float], modes: Sequence[int] | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    width = len(next(iter(dist))) if dist else 0
    names = [f"mode_{m}" for m in (modes if modes is not None else range(width))]
    writer.writerow(names + ["probability"])
    for outcome, p in dist.items():
        writer.writerow(list(outcome) + [repr(float(p))])
    return buf.getvalue()


class Bell(Enum):
    PHI_PLUS = "PhiPlus"
    PHI_MINUS = "PhiMinus"
    PSI_PLUS = "PsiPlus"
    PSI_MINUS = "PsiMinus"
    SEPARABLE = "Separable"
    FAILURE = "Failure"


@dataclass(frozen=True)
class BellOutcome:
    kind: Bell
    record: object = None

    @property
    def success(self) -> bool:
        return self.kind in (Bell.PHI_PLUS, Bell.PHI_MINUS, Bell.PSI_PLUS, Bell.PSI_MINUS)

    def __str__(self) -> str:
        return self.kind.value if self.record is None else f"{self.kind.value}({self.record})"


@dataclass(frozen=True)
class AnalyzerRecord:
    outcome: BellOutcome | tuple[BellOutcome, ...]
    counts: Occupation
    probability: float
    state: PureState


def _classify_polarizing(c: Occupation) -> BellOutcome:
    a_h, a_v, b_h, b_v = c
    a, b = a_h + a_v, b_h + b_v
    if a == 1 and b == 1:
        return BellOutcome(Bell.PHI_PLUS if a_h == b_h else Bell.PHI_MINUS)
    if a == 2 and b == 0:
        return BellOutcome(Bell.SEPARABLE, "HV")
    if a == 0 and b == 2:
        return BellOutcome(Bell.SEPARABLE, "VH")
    return BellOutcome(Bell.FAILURE, c)


def _classify_balanced(c: Occupation) -> BellOutcome:
    a_h, a_v, b_h, b_v = c
    if a_h + a_v == 1 and b_h + b_v == 1:
        return BellOutcome(Bell.PSI_MINUS)
    return BellOutcome(Bell.FAILURE, c)


def _classify_single_rail(c: Occupation) -> BellOutcome:
    if c == (1, 0):
        return BellOutcome(Bell.PSI_PLUS)
    if c == (0, 1):
        return BellOutcome(Bell.PSI_MINUS)
    total = sum(c)
    return BellOutcome(Bell.FAILURE, 0 if total == 0 else 1 if total == 2 else c)


def _polarizing_network(modes):
    a_h, a_v, b_h, b_v = modes
    hwp = lo.waveplate_unitary("half", math.pi / 8)
    return [
        (lo.mode_swap(), [a_v, b_v]),
        (hwp, [a_h, a_v]),
        (hwp, [b_h, b_v]),
    ]


def _balanced_network(modes):
    a_h, a_v, b_h, b_v = modes
    bs = lo.balanced_beamsplitter()
    return [(bs, [a_h, b_h]), (bs, [a_v, b_v])]


def _single_rail_network(modes):
    return [(lo.balanced_beamsplitter(), list(modes))]


_ANALYZERS = {
    "polarizing": (_polarizing_network, _classify_polarizing, 4),
    "balanced": (_balanced_network, _classify_balanced, 4),
    "single_rail": (_single_rail_network, _classify_single_rail, 2),
}


def analyze(psi: PureState, modes: Sequence[int], analyzer: str) -> list[AnalyzerRecord]:
    """Run a partial Bell analyzer on ``modes`` and keep every detector pattern.

    Each record carries the conditional state of the remaining modes.  The
    mode order is (a_H, a_V, b_H, b_V) for the two-photon analyzers and
    (a, b) for the single-rail one.
    """
    return [
        AnalyzerRecord(r.outcome[0], r.counts, r.probability, r.state)
        for r in analyze_many(psi, [(modes, analyzer)])
    ]


def analyze_many(psi: PureState, setups: Sequence[tuple[Sequence[int], str]]) -> list[AnalyzerRecord]:
    """Several analyzers at once; ``outcome`` is then a tuple with one entry per analyzer.

    Remaining modes keep their relative order in the conditional states.
    """
    measured: list[int] = []
    classifiers = []
    for modes, analyzer in setups:
        network, classify, width = _ANALYZERS[analyzer]
        modes = list(modes)
        if len(modes) != width:
            raise ValueError(f"{analyzer} analyzer needs {width} modes")
        for u, targets in network(modes):
            psi = lo.apply(u, psi, targets)
        classifiers.append((len(measured), width, classify))
        measured.extend(modes)
    result = condition(psi, measured, [ANY] * len(measured))
    records = []
    for b in result.branches:
        outcome = tuple(classify(b.outcome[start : start + width]) for start, width, classify in classifiers)
        records.append(AnalyzerRecord(outcome, b.outcome, b.probability, b.state))
    return records


def _summarize(records: list[AnalyzerRecord]) -> dict[BellOutcome, float]:
    out: dict[BellOutcome, float] = {}
    for r in records:
        out[r.outcome] = out.get(r.outcome, 0.0) + r.probability
    return out


def bell_analyzer_polarizing(psi: PureState, modes: Sequence[int] = (0, 1, 2, 3)) -> dict[BellOutcome, float]:
    """PBS followed by diagonal-basis detection: resolves PhiPlus and PhiMinus."""
    return _summarize(analyze(psi, modes, "polarizing"))


def bell_analyzer_50_50(psi: PureState, modes: Sequence[int] = (0, 1, 2, 3)) -> dict[BellOutcome, float]:
    """Balanced beamsplitter with coincidence detection: resolves PsiMinus only."""
    return _summarize(analyze(psi, modes, "balanced"))


def bell_analyzer_single_rail(psi: PureState, modes: Sequence[int] = (0, 1)) -> dict[BellOutcome, float]:
    """Balanced beamsplitter on two single-rail qubits; which detector fires gives the sign."""
    return _summarize(analyze(psi, modes, "single_rail"))


def success_probability(table: dict[BellOutcome, float]) -> float:
    return sum(p for o, p in table.items() if o.success)
