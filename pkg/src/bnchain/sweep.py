"""Sweeps of the chain search against the closed-form nonexistence threshold."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .bn_core import rho
from .bounds import nonexistence_threshold
from .chain_search import ChainSpec, Verdict, search


@dataclass(frozen=True)
class SweepCase:
    g1: int
    g2: int
    r: int
    d: int
    t: int
    threshold: int

    @property
    def g(self) -> int:
        return self.g1 + self.g2 + 2

    @property
    def rho(self) -> int:
        return rho(self.g, self.r, self.d)

    @property
    def above_threshold(self) -> bool:
        return self.t >= 4 and self.t >= self.threshold


@dataclass(frozen=True)
class SweepResult:
    case: SweepCase
    verdict: Verdict

    @property
    def violation(self) -> bool:
        """Above the threshold the necessary search must rule the series out."""
        return self.case.above_threshold and not self.verdict.not_exists


def sweep_cases(
    g_max: int, r_max: int = 2, rho_values: Iterable[int] = (-1, -2), *, above_only: bool = True
) -> Iterator[SweepCase]:
    """Instances with g1 >= g2 >= 2, g = g1 + g2 + 2 <= g_max, 1 <= r <= r_max, d <= g - 1.

    ``above_only`` keeps t in [max(4, threshold), 2g]; otherwise t runs over [2, 2g].
    """
    targets = set(rho_values)
    for g in range(6, g_max + 1):
        for g2 in range(2, g // 2):
            g1 = g - 2 - g2
            if g1 < g2:
                continue
            for r in range(1, r_max + 1):
                for d in range(r, g):
                    if rho(g, r, d) not in targets:
                        continue
                    thr = nonexistence_threshold(g, r, d, g1, g2)
                    lo = max(4, thr) if above_only else 2
                    for t in range(lo, 2 * g + 1):
                        yield SweepCase(g1, g2, r, d, t, thr)


def run_case(case: SweepCase, criterion: str = "necessary", jobs: int = 1) -> SweepResult:
    chain = ChainSpec.tcbe(case.g1, case.g2, case.t)
    return SweepResult(case, search(chain, case.r, case.d, "crude", criterion, jobs=jobs))
