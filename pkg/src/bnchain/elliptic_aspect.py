"""Combinatorial model of a g^r_d on a two-pointed elliptic curve.

The curve E carries marked points x, y with x - y of exact order ``t`` in
Pic^0(E). A line bundle whose class matters is coordinatized by an integer
``k`` mod t through L ~ d*y + k*(x - y). Then a*x + b*y ~ L with a + b = d
exactly when a = k (mod t), which is all the combinatorics ever needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bn_core import GrdParams, VanishingSeq, adjusted_rho


def _seq_values(seq: VanishingSeq | Sequence[int]) -> tuple[int, ...]:
    return seq.values if isinstance(seq, VanishingSeq) else tuple(int(v) for v in seq)


def _check_torsion(t: int) -> None:
    if t < 2:
        raise ValueError(f"torsion order t={t} must be at least 2")


@dataclass(frozen=True)
class EllipticAspect:
    t: int
    k: int
    d: int
    r: int
    seq_left: VanishingSeq
    seq_right: VanishingSeq

    def __post_init__(self) -> None:
        _check_torsion(self.t)
        if not 0 <= self.k < self.t:
            raise ValueError(f"class k={self.k} not reduced mod t={self.t}")
        for seq in (self.seq_left, self.seq_right):
            if (seq.r, seq.d) != (self.r, self.d):
                raise ValueError("sequence does not match the aspect's (r, d)")

    @property
    def nu(self) -> tuple[int, ...]:
        return nu_profile(self.seq_left, self.seq_right, self.d)


def nu_profile(a: VanishingSeq | Sequence[int], b: VanishingSeq | Sequence[int], d: int) -> tuple[int, ...]:
    """nu_j = d - a_j - b_{r-j}."""
    a, b = _seq_values(a), _seq_values(b)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    r = len(a) - 1
    return tuple(d - a[j] - b[r - j] for j in range(r + 1))


def zero_count_check(a, b, d: int) -> tuple[int, int]:
    """Both sides of the zero-count identity for an elliptic aspect.

    Returns ``(#{j: nu_j = 0}, -rho(L, x, y) + 1 + sum (nu_j - 1)_+)``.
    """
    a, b = _seq_values(a), _seq_values(b)
    nu = nu_profile(a, b, d)
    if min(nu) < 0:
        raise ValueError(f"negative nu in {nu}")
    r = len(a) - 1
    params = GrdParams(1, r, d)
    lhs = sum(1 for v in nu if v == 0)
    rhs = -adjusted_rho(params, [a, b]) + 1 + sum(max(v - 1, 0) for v in nu)
    return lhs, rhs


def dim_f(alpha: int, beta: int, k: int, t: int, d: int) -> int:
    """h^0(L(-alpha*x - beta*y)) for L ~ d*y + k*(x - y)."""
    if alpha < 0 or beta < 0:
        raise ValueError("vanishing orders must be nonnegative")
    deg = d - alpha - beta
    if deg >= 1:
        return deg
    if deg == 0 and (alpha - k) % t == 0:
        return 1
    return 0


def pair_exact_exists(alpha: int, beta: int, k: int, t: int, d: int) -> bool:
    """Is there a section vanishing to order exactly alpha at x and exactly beta at y?"""
    if alpha < 0 or beta < 0:
        raise ValueError("vanishing orders must be nonnegative")
    nu = d - alpha - beta
    if nu >= 2:
        return True
    if nu == 1:
        return (alpha - k) % t != 0 and (alpha + 1 - k) % t != 0
    if nu == 0:
        return (alpha - k) % t == 0
    return False


def feasible_sufficient(a, b, k: int, t: int, d: int) -> bool:
    """Every index pair (a_j, b_{r-j}) admits an exact section.

    The span of one such section per j then has vanishing sequences exactly
    ``a`` at x and ``b`` at y, so this certifies a genuine g^r_d.
    """
    a, b = _seq_values(a), _seq_values(b)
    r = len(a) - 1
    return all(pair_exact_exists(a[j], b[r - j], k, t, d) for j in range(r + 1))


def feasible_necessary(a, b, k: int, t: int, d: int) -> bool:
    """nu >= 0 everywhere, and every tight pair (nu_j = 0) has a_j = k (mod t)."""
    a, b = _seq_values(a), _seq_values(b)
    nu = nu_profile(a, b, d)
    for j, v in enumerate(nu):
        if v < 0:
            return False
        if v == 0 and (a[j] - k) % t:
            return False
    return True


def feasible(a, b, k: int, t: int, d: int, criterion: str) -> bool:
    if criterion == "sufficient":
        return feasible_sufficient(a, b, k, t, d)
    if criterion == "necessary":
        return feasible_necessary(a, b, k, t, d)
    raise ValueError(f"unknown criterion {criterion!r}")


def feasible_classes(a, b, t: int, d: int, criterion: str) -> list[int]:
    """All classes k in Z/t for which the aspect passes ``criterion``."""
    _check_torsion(t)
    return [k for k in range(t) if feasible(a, b, k, t, d, criterion)]
