"""Batch comparison of the combinatorial elliptic model with the curve oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..bn_core import all_sequences
from ..elliptic_aspect import feasible_sufficient, pair_exact_exists
from .curve import CurveInstance, make_curve
from .riemann_roch import DimMismatch, exact_pair_oracle, realize, verify_dim_table


@dataclass
class AgreementReport:
    t: int
    curve: str
    dim_cells: int = 0
    dim_mismatches: list[tuple[int, int, DimMismatch]] = field(default_factory=list)
    pair_cells: int = 0
    pair_mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)
    realized: int = 0
    realize_failures: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.dim_mismatches or self.pair_mismatches or self.realize_failures)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "curve": self.curve,
            "dim_cells": self.dim_cells,
            "dim_mismatches": len(self.dim_mismatches),
            "pair_cells": self.pair_cells,
            "pair_mismatches": len(self.pair_mismatches),
            "realized": self.realized,
            "realize_failures": len(self.realize_failures),
            "ok": self.ok,
        }


def sample_aspects(t: int, d_max: int, count: int, rng: random.Random, r_max: int = 3) -> list[tuple]:
    """Random (d, k, a, b) passing the sufficient criterion, with r >= 1."""
    out = []
    while len(out) < count:
        d = rng.randint(1, d_max)
        r = rng.randint(1, min(r_max, d))
        seqs = all_sequences(r, d)
        a, b = rng.choice(seqs), rng.choice(seqs)
        k = rng.randrange(t)
        if feasible_sufficient(a, b, k, t, d):
            out.append((d, k, a, b))
    return out


def check_agreement(
    t: int, d_max: int = 8, samples: int = 20, seed: int = 0, inst: CurveInstance | None = None
) -> AgreementReport:
    inst = inst or make_curve(t)
    rep = AgreementReport(t, inst.describe())
    for d in range(d_max + 1):
        for k in range(t):
            for bad in verify_dim_table(inst, d, k):
                rep.dim_mismatches.append((d, k, bad))
            rep.dim_cells += (d + 1) ** 2
            for alpha in range(d + 1):
                for beta in range(d + 1):
                    rep.pair_cells += 1
                    if exact_pair_oracle(inst, d, k, alpha, beta) != pair_exact_exists(alpha, beta, k, t, d):
                        rep.pair_mismatches.append((d, k, alpha, beta))
    for d, k, a, b in sample_aspects(t, d_max, samples, random.Random(seed * 1000 + t)):
        if realize(inst, d, k, a, b) is None:
            rep.realize_failures.append((d, k, a, b))
        else:
            rep.realized += 1
    return rep
