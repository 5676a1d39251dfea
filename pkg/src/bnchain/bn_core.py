"""Brill-Noether arithmetic and the Eisenbud-Harris criterion on general pointed curves.

Everything here is exact integer arithmetic. Inputs are bounded by
``MAX_PARAM`` so that the numeric kernels (which use fixed-width integers)
can never overflow on values produced by this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_PARAM = 10_000


def _check_bound(**values: int) -> None:
    for name, value in values.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError(f"{name} must be an int, got {type(value).__name__}")
        if value < 0:
            raise ValueError(f"{name}={value} must be nonnegative")
        if value > MAX_PARAM:
            raise ValueError(f"{name}={value} exceeds the supported bound {MAX_PARAM}")


@dataclass(frozen=True)
class GrdParams:
    """Type of a linear series: genus ``g``, projective dimension ``r``, degree ``d``."""

    g: int
    r: int
    d: int

    def __post_init__(self) -> None:
        _check_bound(g=self.g, r=self.r, d=self.d)
        if self.r > self.d:
            raise ValueError(f"r={self.r} > d={self.d}: no room for r+1 vanishing orders")

    @property
    def rho(self) -> int:
        return rho(self.g, self.r, self.d)


@dataclass(frozen=True)
class VanishingSeq:
    """Strictly increasing vanishing orders ``a_0 < ... < a_r`` inside ``[0, d]``."""

    values: tuple[int, ...]
    r: int
    d: int

    def __post_init__(self) -> None:
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.r + 1:
            raise ValueError(f"expected {self.r + 1} vanishing orders, got {len(values)}")
        if values and (values[0] < 0 or values[-1] > self.d):
            raise ValueError(f"vanishing orders {values} leave [0, {self.d}]")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"vanishing orders {values} are not strictly increasing")

    @classmethod
    def of(cls, values: Iterable[int], params: GrdParams) -> "VanishingSeq":
        return cls(tuple(values), params.r, params.d)

    @property
    def ramification(self) -> tuple[int, ...]:
        return tuple(a - j for j, a in enumerate(self.values))

    def complement(self) -> "VanishingSeq":
        """The sequence a' with a_j + a'_{r-j} = d (the refined partner across a node)."""
        return VanishingSeq(tuple(self.d - a for a in reversed(self.values)), self.r, self.d)

    def __getitem__(self, j: int) -> int:
        return self.values[j]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def rho(g: int, r: int, d: int) -> int:
    """Brill-Noether number g - (r+1)(g-d+r); negative values are allowed."""
    _check_bound(g=g, r=r, d=d)
    return g - (r + 1) * (g - d + r)


def check_ramification(alpha: Sequence[int], r: int, d: int) -> tuple[int, ...]:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != r + 1:
        raise ValueError(f"ramification sequence needs {r + 1} entries, got {len(alpha)}")
    if alpha and alpha[0] < 0:
        raise ValueError(f"ramification {alpha} has a negative entry")
    if any(b < a for a, b in zip(alpha, alpha[1:])):
        raise ValueError(f"ramification {alpha} is not nondecreasing")
    if alpha and alpha[-1] > d - r:
        raise ValueError(f"ramification {alpha} exceeds d - r = {d - r}")
    return alpha


def vanishing_from_ramification(alpha: Sequence[int], params: GrdParams) -> VanishingSeq:
    alpha = check_ramification(alpha, params.r, params.d)
    return VanishingSeq(tuple(a + j for j, a in enumerate(alpha)), params.r, params.d)


def ramification_from_vanishing(seq: VanishingSeq | Sequence[int], params: GrdParams) -> tuple[int, ...]:
    if not isinstance(seq, VanishingSeq):
        seq = VanishingSeq.of(seq, params)
    elif (seq.r, seq.d) != (params.r, params.d):
        raise ValueError(f"sequence built for (r, d)=({seq.r}, {seq.d}), not ({params.r}, {params.d})")
    return seq.ramification


def adjusted_rho(params: GrdParams, seqs: Sequence[VanishingSeq | Sequence[int]]) -> int:
    """rho(g, r, d) minus the total ramification at the marked points."""
    total = 0
    for seq in seqs:
        total += sum(ramification_from_vanishing(seq, params))
    return params.rho - total


def eh_exists(g_tail: int, r: int, d: int, alpha: Sequence[int]) -> bool:
    """Does a general one-pointed curve of genus ``g_tail`` carry a g^r_d with ramification ``alpha``?"""
    _check_bound(g=g_tail, r=r, d=d)
    alpha = check_ramification(alpha, r, d)
    shift = g_tail - d + r
    return sum(max(0, a + shift) for a in alpha) <= g_tail


def eh_dimension(g_tail: int, r: int, d: int, alpha: Sequence[int]) -> int:
    _check_bound(g=g_tail, r=r, d=d)
    alpha = check_ramification(alpha, r, d)
    return rho(g_tail, r, d) - sum(alpha)


def all_sequences(r: int, d: int) -> list[tuple[int, ...]]:
    """Every vanishing sequence for (r, d), in lexicographic order."""
    from itertools import combinations

    return list(combinations(range(d + 1), r + 1))
