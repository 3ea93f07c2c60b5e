"""Sparse pure states of a few optical modes in the photon-number basis."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

PRUNE = 1e-15
DEFAULT_CUTOFF = 6

Occupation = tuple[int, ...]


class TruncationWarning(UserWarning):
    pass


class CutoffError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PureState:
    """Immutable superposition of occupation patterns.

    ``terms`` maps occupation tuples to complex amplitudes.  ``cutoff`` bounds the
    total photon number of every term.  ``truncated_weight`` records the norm lost
    when the state was generated from an infinite Fock expansion.
    """

    mode_count: int
    terms: Mapping[Occupation, complex]
    cutoff: int = DEFAULT_CUTOFF
    truncated_weight: float = 0.0
    _sorted: tuple = field(default=(), repr=False)

    @classmethod
    def from_terms(
        cls,
        mode_count: int,
        terms: Mapping[Occupation, complex] | Iterable[tuple[Occupation, complex]],
        cutoff: int = DEFAULT_CUTOFF,
        truncated_weight: float = 0.0,
    ) -> PureState:
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Occupation, complex] = {}
        for occ, amp in items:
            occ = tuple(int(n) for n in occ)
            if len(occ) != mode_count:
                raise ValueError(f"occupation {occ} does not have {mode_count} modes")
            if any(n < 0 for n in occ):
                raise ValueError(f"negative occupation {occ}")
            clean[occ] = clean.get(occ, 0j) + complex(amp)
        clean = {occ: amp for occ, amp in clean.items() if abs(amp) > PRUNE}
        for occ in clean:
            if sum(occ) > cutoff:
                raise CutoffError(f"term {occ} exceeds the photon cutoff {cutoff}")
        ordered = tuple(sorted(clean.items()))
        return cls(mode_count, MappingProxyType(dict(ordered)), cutoff, truncated_weight, ordered)

    def items(self):
        return self._sorted

    def amplitude(self, occ: Occupation) -> complex:
        return self.terms.get(tuple(occ), 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.terms.values()))

    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self.terms}

    def scaled(self, factor: complex) -> PureState:
        return PureState.from_terms(
            self.mode_count, {o: a * factor for o, a in self.terms.items()}, self.cutoff
        )

    def __add__(self, other: PureState) -> PureState:
        _check_modes(self, other)
        merged = dict(self.terms)
        for occ, amp in other.terms.items():
            merged[occ] = merged.get(occ, 0j) + amp
        return PureState.from_terms(self.mode_count, merged, max(self.cutoff, other.cutoff))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        shown = " + ".join(f"({a:.4g})|{''.join(map(str, o))}>" for o, a in self._sorted[:8])
        more = " + ..." if len(self._sorted) > 8 else ""
        return f"PureState[{self.mode_count} modes]({shown}{more})"

    def to_dict(self) -> dict:
        return {
            "mode_count": self.mode_count,
            "cutoff": self.cutoff,
            "terms": [
                {"occ": list(occ), "re": amp.real, "im": amp.imag} for occ, amp in self._sorted
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> PureState:
        try:
            mode_count = int(data["mode_count"])
            cutoff = int(data.get("cutoff", DEFAULT_CUTOFF))
            terms = [(tuple(t["occ"]), complex(t["re"], t.get("im", 0.0))) for t in data["terms"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed state description: {exc}") from exc
        return cls.from_terms(mode_count, terms, cutoff)

    @classmethod
    def from_json(cls, text: str) -> PureState:
        return cls.from_dict(json.loads(text))


def _check_modes(a: PureState, b: PureState) -> None:
    if a.mode_count != b.mode_count:
        raise ValueError(f"mode counts differ: {a.mode_count} vs {b.mode_count}")


def basis_state(occ: Occupation, cutoff: int = DEFAULT_CUTOFF) -> PureState:
    return PureState.from_terms(len(occ), {tuple(occ): 1.0}, max(cutoff, sum(occ)))


def vacuum(mode_count: int, cutoff: int = DEFAULT_CUTOFF) -> PureState:
    return basis_state((0,) * mode_count, cutoff)


def single_photon(mode_count: int, mode: int, cutoff: int = DEFAULT_CUTOFF) -> PureState:
    occ = [0] * mode_count
    occ[mode] = 1
    return basis_state(tuple(occ), cutoff)


def normalize(psi: PureState) -> PureState:
    n = psi.norm()
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi.scaled(1 / n)


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>."""
    _check_modes(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for occ in small.terms:
        if occ in large.terms:
            total += np.conj(a.terms[occ]) * b.terms[occ]
    return total


def fidelity(a: PureState, b: PureState) -> float:
    return abs(inner_product(a, b)) ** 2 / (a.norm() ** 2 * b.norm() ** 2)


def tensor(a: PureState, b: PureState) -> PureState:
    terms = {
        oa + ob: amp_a * amp_b for oa, amp_a in a.terms.items() for ob, amp_b in b.terms.items()
    }
    return PureState.from_terms(
        a.mode_count + b.mode_count,
        terms,
        a.cutoff + b.cutoff,
        1 - (1 - a.truncated_weight) * (1 - b.truncated_weight),
    )


def tensor_all(states: Iterable[PureState]) -> PureState:
    result = None
    for s in states:
        result = s if result is None else tensor(result, s)
    if result is None:
        raise ValueError("no states given")
    return result


def permute_modes(psi: PureState, order: list[int]) -> PureState:
    """New state whose mode ``k`` is old mode ``order[k]``."""
    if sorted(order) != list(range(psi.mode_count)):
        raise ValueError("order must be a permutation of the modes")
    return PureState.from_terms(
        psi.mode_count, {tuple(o[i] for i in order): a for o, a in psi.terms.items()}, psi.cutoff
    )


def select_modes(psi: PureState, keep: list[int]) -> PureState:
    """Drop every mode not in ``keep``; the dropped modes must be in a common product state."""
    dropped = [i for i in range(psi.mode_count) if i not in keep]
    tails = {tuple(o[i] for i in dropped) for o in psi.terms}
    if len(tails) > 1:
        raise ValueError("dropped modes are entangled with the kept ones")
    return PureState.from_terms(
        len(keep), {tuple(o[i] for i in keep): a for o, a in psi.terms.items()}, psi.cutoff
    )


def coherent_state(alpha: complex, cutoff: int = DEFAULT_CUTOFF) -> PureState:
    """Single-mode coherent state truncated at ``cutoff`` photons and renormalized."""
    weights = [
        math.exp(-abs(alpha) ** 2 / 2) * alpha**n / math.sqrt(math.factorial(n))
        for n in range(cutoff + 1)
    ]
    kept = sum(abs(w) ** 2 for w in weights)
    lost = max(0.0, 1 - kept)
    if lost > 0.01:
        warnings.warn(
            f"coherent state |{alpha}> loses {lost:.3g} of its norm at cutoff {cutoff}",
            TruncationWarning,
            stacklevel=2,
        )
    scale = 1 / math.sqrt(kept)
    return PureState.from_terms(1, {(n,): w * scale for n, w in enumerate(weights)}, cutoff, lost)


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """Exact <alpha|beta> for untruncated coherent states."""
    return complex(
        np.exp(-abs(alpha) ** 2 / 2 - abs(beta) ** 2 / 2 + np.conj(alpha) * beta)
    )


def two_mode_down_conversion(chi: float, cutoff: int = DEFAULT_CUTOFF) -> PureState:
    """Pair source: sum_n chi^n |n, n>, kept up to ``cutoff`` total photons."""
    if not 0 <= abs(chi) < 1:
        raise ValueError("pair amplitude must satisfy |chi| < 1")
    top = cutoff // 2
    kept = sum(abs(chi) ** (2 * n) for n in range(top + 1))
    lost = max(0.0, 1 - kept * (1 - abs(chi) ** 2))
    terms = {(n, n): chi**n / math.sqrt(kept) for n in range(top + 1)}
    return PureState.from_terms(2, terms, cutoff, lost)


def chi_from_gain(gain: float) -> float:
    """Pair amplitude of a non-degenerate amplifier with intensity gain ``gain``."""
    if gain < 1:
        raise ValueError("gain must be at least 1")
    return math.sqrt((gain - 1) / gain)


def two_attenuated_lasers(alpha: complex, cutoff: int = DEFAULT_CUTOFF) -> PureState:
    """Two independent weak coherent beams, alpha in each mode."""
    return tensor(coherent_state(alpha, cutoff), coherent_state(alpha, cutoff))


@dataclass(frozen=True)
class DiagonalFockMixture:
    """Mixed single-mode state diagonal in photon number."""

    weights: Mapping[int, float]

    def __post_init__(self):
        total = sum(self.weights.values())
        if any(w < 0 for w in self.weights.values()) or abs(total - 1) > 1e-9:
            raise ValueError("weights must be non-negative and sum to one")


def wigner_at_origin(rho: DiagonalFockMixture) -> float:
    """Wigner function at the phase-space origin, (1/pi) sum_n w_n (-1)^n."""
    return sum(w * (-1) ** n for n, w in rho.weights.items()) / math.pi


def photon_statistics(psi: PureState, modes: list[int]) -> dict[Occupation, float]:
    probs: dict[Occupation, float] = {}
    for occ, amp in psi.terms.items():
        key = tuple(occ[m] for m in modes)
        probs[key] = probs.get(key, 0.0) + abs(amp) ** 2
    return probs
