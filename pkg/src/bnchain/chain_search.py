"""Limit linear series on a chain  tail -- bridge^n -- tail.

A chain has components ``C_0, ..., C_{n+1}``: general one-pointed tails at
both ends and elliptic bridges in between, with node ``i`` joining ``C_i``
and ``C_{i+1}``. A witness stores, for every component, its vanishing
sequence at each of its nodes (``R_i`` at the right node of ``C_i`` and
``L_i`` at its left node) together with a bundle class for every bridge.

The search is a dynamic program over nodes. A backward pass computes, for
every node, the set of sequences that can still be completed to the right;
a greedy forward pass then picks the lexicographically smallest witness.
"""

from __future__ import annotations

import itertools
import re
import time
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Sequence

import numpy as np

from . import kernels
from .bn_core import GrdParams, VanishingSeq, adjusted_rho, eh_exists, rho
from .elliptic_aspect import EllipticAspect, feasible, nu_profile

MODES = ("refined", "crude")
CRITERIA = ("sufficient", "necessary", "auto")


class ChainError(ValueError):
    """Malformed chain description."""


@dataclass(frozen=True)
class Tail:
    genus: int

    def render(self) -> str:
        return f"tail:{self.genus}"


@dataclass(frozen=True)
class Bridge:
    torsion: int

    def render(self) -> str:
        return f"ell:{self.torsion}"


@dataclass(frozen=True)
class ChainSpec:
    components: tuple[Tail | Bridge, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 3:
            raise ChainError("a chain needs two tails and at least one bridge")
        if not isinstance(comps[0], Tail) or not isinstance(comps[-1], Tail):
            raise ChainError("the first and last components must be tails")
        inner = comps[1:-1]
        if not all(isinstance(c, Bridge) for c in inner):
            raise ChainError("interior components must all be elliptic bridges")
        for tail in (comps[0], comps[-1]):
            if tail.genus < 2:
                raise ChainError(f"tail genus {tail.genus} < 2")
        torsions = {b.torsion for b in inner}
        if len(torsions) != 1:
            raise ChainError(f"mixed torsion orders {sorted(torsions)}")
        if min(torsions) < 2:
            raise ChainError(f"torsion order {min(torsions)} < 2")

    @classmethod
    def tcbe(cls, g1: int, g2: int, t: int, n: int = 2) -> "ChainSpec":
        return cls((Tail(g1),) + tuple(Bridge(t) for _ in range(n)) + (Tail(g2),))

    @classmethod
    def parse(cls, text: str) -> "ChainSpec":
        comps: list[Tail | Bridge] = []
        for token in text.replace(" ", "").split(","):
            m = re.fullmatch(r"(tail|ell):(\d+)", token)
            if m is None:
                raise ChainError(f"bad chain token {token!r}; expected tail:<g> or ell:<t>")
            value = int(m.group(2))
            comps.append(Tail(value) if m.group(1) == "tail" else Bridge(value))
        return cls(tuple(comps))

    def render(self) -> str:
        return ",".join(c.render() for c in self.components)

    @property
    def g1(self) -> int:
        return self.components[0].genus

    @property
    def g2(self) -> int:
        return self.components[-1].genus

    @property
    def t(self) -> int:
        return self.components[1].torsion

    @property
    def n(self) -> int:
        return len(self.components) - 2

    @property
    def genus(self) -> int:
        return self.g1 + self.g2 + self.n

    def __str__(self) -> str:
        return f"TCBE({self.g1},{self.g2};{self.n},{self.t})"


@dataclass(frozen=True)
class LimitWitness:
    """One candidate limit g^r_d.

    ``tail_left`` is the sequence of the first tail at node 0, ``tail_right``
    the sequence of the last tail at node n, and ``bridges[i]`` the aspect on
    component i+1 with ``seq_left`` at node i and ``seq_right`` at node i+1.
    """

    params: GrdParams
    chain: ChainSpec
    tail_left: VanishingSeq
    bridges: tuple[EllipticAspect, ...]
    tail_right: VanishingSeq
    mode: str
    criterion: str

    def node_pairs(self) -> list[tuple[VanishingSeq, VanishingSeq]]:
        """(left-side sequence, right-side sequence) at every node."""
        lefts = [self.tail_left] + [b.seq_right for b in self.bridges]
        rights = [b.seq_left for b in self.bridges] + [self.tail_right]
        return list(zip(lefts, rights))

    def sort_key(self) -> tuple:
        flat: list[int] = []
        for left, right in self.node_pairs():
            flat.extend(left.values)
            flat.extend(right.values)
        return tuple(flat), tuple(b.k for b in self.bridges)

    def to_dict(self) -> dict[str, Any]:
        comps: list[dict[str, Any]] = [
            {"kind": "tail", "genus": self.chain.g1, "seq": list(self.tail_left.values)}
        ]
        for b in self.bridges:
            comps.append(
                {
                    "kind": "bridge",
                    "torsion": b.t,
                    "seq_left": list(b.seq_left.values),
                    "seq_right": list(b.seq_right.values),
                    "class_k": b.k,
                }
            )
        comps.append({"kind": "tail", "genus": self.chain.g2, "seq": list(self.tail_right.values)})
        return {
            "params": {"g": self.params.g, "r": self.params.r, "d": self.params.d},
            "chain": self.chain.render(),
            "mode": self.mode,
            "criterion": self.criterion,
            "components": comps,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LimitWitness":
        chain = ChainSpec.parse(data["chain"])
        p = data["params"]
        params = GrdParams(p["g"], p["r"], p["d"])
        comps = data["components"]
        seq = lambda v: VanishingSeq(tuple(v), params.r, params.d)  # noqa: E731
        bridges = tuple(
            EllipticAspect(c["torsion"], c["class_k"], params.d, params.r, seq(c["seq_left"]), seq(c["seq_right"]))
            for c in comps[1:-1]
        )
        return cls(params, chain, seq(comps[0]["seq"]), bridges, seq(comps[-1]["seq"]), data["mode"], data["criterion"])


@dataclass
class Verdict:
    status: str  # "exists" | "not_exists" | "undetermined"
    mode: str
    criterion: str
    witness: LimitWitness | None = None
    candidate: LimitWitness | None = None
    reason: str = ""
    reduced: bool = False

    @property
    def exists(self) -> bool:
        return self.status == "exists"

    @property
    def not_exists(self) -> bool:
        return self.status == "not_exists"

    @property
    def undetermined(self) -> bool:
        return self.status == "undetermined"

    def to_dict(self, with_stats: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "verdict": self.status,
            "mode": self.mode,
            "criterion": self.criterion,
            "reduced": self.reduced,
            "reason": self.reason,
        }
        for key in ("witness", "candidate"):
            w = getattr(self, key)
            if w is None:
                out[key] = None
                continue
            payload = w.to_dict()
            if with_stats:
                payload["stats"] = stats(w).to_dict()
            out[key] = payload
        return out


# ---------------------------------------------------------------------------
# node compatibility


def compatible(left, right, d: int, mode: str) -> bool:
    """left_j + right_{r-j} >= d for every j (crude); equality everywhere (refined)."""
    a = left.values if isinstance(left, VanishingSeq) else tuple(left)
    b = right.values if isinstance(right, VanishingSeq) else tuple(right)
    if len(a) != len(b):
        raise ValueError("sequence length mismatch")
    r = len(a) - 1
    sums = [a[j] + b[r - j] for j in range(r + 1)]
    if mode == "refined":
        return all(s == d for s in sums)
    if mode == "crude":
        return all(s >= d for s in sums)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# search


class _Budget:
    def __init__(self, seconds: float | None):
        self.deadline = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline


def _tail_mask(seqs: np.ndarray, g_tail: int, r: int, d: int) -> np.ndarray:
    alpha = seqs - np.arange(r + 1)
    return np.maximum(alpha + (g_tail - d + r), 0).sum(axis=1) <= g_tail


@dataclass
class _Tables:
    seqs: np.ndarray
    comp: np.ndarray


def _dp(chain: ChainSpec, params: GrdParams, tables: _Tables, refined: bool, crit: int, jobs: int, budget: _Budget):
    """Lexicographically smallest witness as index tuples, None if infeasible, or "timeout"."""
    seqs, comp = tables.seqs, tables.comp
    r, d, t, n = params.r, params.d, chain.t, chain.n

    def pre_node(next_mask: np.ndarray) -> np.ndarray:
        if refined:
            return next_mask[comp]
        return kernels.dominance_mask(seqs, comp, next_mask, jobs)

    # good_left[i]: sequences L_i of component i that can be completed to the right
    good_left: list[np.ndarray | None] = [None] * (n + 2)
    good_right: list[np.ndarray | None] = [None] * (n + 1)
    good_left[n + 1] = _tail_mask(seqs, chain.g2, r, d)
    for i in range(n, -1, -1):
        good_right[i] = pre_node(good_left[i + 1])
        if i >= 1:
            good_left[i] = kernels.bridge_left_mask(seqs, good_right[i], d, t, crit, jobs)
        if budget.expired():
            return "timeout"
    start = _tail_mask(seqs, chain.g1, r, d) & good_right[0]
    if not start.any():
        return None

    def next_left(prev_right: int, mask: np.ndarray) -> int:
        if refined:
            idx = int(comp[prev_right])
            assert mask[idx]
            return idx
        ok = mask & (seqs >= seqs[comp[prev_right]]).all(axis=1)
        return int(np.flatnonzero(ok)[0])

    rights = [int(np.flatnonzero(start)[0])]
    lefts: list[int] = []
    classes: list[int] = []
    for i in range(1, n + 1):
        left = next_left(rights[-1], good_left[i])
        row = kernels.bridge_row(seqs, left, d, t, crit)
        ok = (row >= 0) & good_right[i]
        right = int(np.flatnonzero(ok)[0])
        lefts.append(left)
        rights.append(right)
        classes.append(int(row[right]))
    lefts.append(next_left(rights[-1], good_left[n + 1]))
    return rights, lefts, classes


def _build_witness(chain, params, tables, found, mode, criterion) -> LimitWitness:
    rights, lefts, classes = found
    seq = lambda i: VanishingSeq(tuple(int(v) for v in tables.seqs[i]), params.r, params.d)  # noqa: E731
    bridges = tuple(
        EllipticAspect(chain.t, classes[i], params.d, params.r, seq(lefts[i]), seq(rights[i + 1]))
        for i in range(chain.n)
    )
    return LimitWitness(params, chain, seq(rights[0]), bridges, seq(lefts[-1]), mode, criterion)


def search(
    chain: ChainSpec,
    r: int,
    d: int,
    mode: str = "crude",
    criterion: str = "auto",
    *,
    reduce: bool = True,
    jobs: int = 1,
    max_candidates: int = 500_000,
    time_budget: float | None = None,
) -> Verdict:
    """Decide whether ``chain`` carries a limit g^r_d.

    ``criterion="sufficient"`` can only certify existence, ``"necessary"``
    can only certify nonexistence, ``"auto"`` runs the necessary search first
    and falls back to the sufficient one. With the necessary criterion the
    crude search is reduced to the refined one unless ``reduce=False``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}")
    params = GrdParams(chain.genus, r, d)
    budget = _Budget(time_budget)

    from math import comb

    if comb(d + 1, r + 1) > max_candidates:
        return Verdict(
            "undetermined", mode, criterion, reason=f"candidate cap exceeded: C({d + 1},{r + 1}) > {max_candidates}"
        )
    seqs, comp = kernels.sequence_table(r, d)
    tables = _Tables(seqs, comp)

    def run(crit_name: str, refined: bool):
        code = kernels.NECESSARY if crit_name == "necessary" else kernels.SUFFICIENT
        return _dp(chain, params, tables, refined, code, jobs, budget)

    timeout = Verdict("undetermined", mode, criterion, reason="time budget exhausted")
    necessary_refined = mode == "refined" or reduce
    reduced = mode == "crude" and reduce

    if criterion in ("necessary", "auto"):
        found = run("necessary", necessary_refined)
        if found == "timeout":
            return timeout
        if found is None:
            return Verdict("not_exists", mode, criterion, reason="necessary criterion exhausted", reduced=reduced)
        candidate = _build_witness(chain, params, tables, found, "refined" if necessary_refined else mode, "necessary")
        if criterion == "necessary":
            return Verdict(
                "undetermined",
                mode,
                criterion,
                candidate=candidate,
                reason="necessary criterion satisfiable; existence not certified",
                reduced=reduced,
            )

    found = run("sufficient", mode == "refined")
    if found == "timeout":
        return timeout
    if found is None:
        verdict = Verdict("undetermined", mode, criterion, reason="no witness under the sufficient criterion")
        if criterion == "auto":
            verdict.candidate = candidate
            verdict.reduced = reduced
            verdict.reason = "criteria disagree: necessary satisfiable, sufficient not"
        return verdict
    witness = _build_witness(chain, params, tables, found, mode, "sufficient")
    return Verdict("exists", mode, criterion, witness=witness, reason="sufficient witness found")


# ---------------------------------------------------------------------------
# brute force (cross-check for the DP; evaluates every assignment)


def brute_force(
    chain: ChainSpec, r: int, d: int, criterion: str, mode: str = "crude", limit: int = 200_000_000
) -> LimitWitness | None:
    """Lexicographically smallest witness found by evaluating every assignment.

    Every per-component constraint is evaluated with the scalar reference
    predicates; classes are folded into the bridge factor (they touch no
    other constraint).
    """
    params = GrdParams(chain.genus, r, d)
    seqs = list(itertools.combinations(range(d + 1), r + 1))
    n_seq, n = len(seqs), chain.n
    if n_seq ** (2 * n + 2) > limit:
        raise ValueError(f"brute force over {n_seq}^{2 * n + 2} assignments exceeds limit {limit}")
    t = chain.t
    ram = lambda s: [a - j for j, a in enumerate(s)]  # noqa: E731
    tail1 = np.array([eh_exists(chain.g1, r, d, ram(s)) for s in seqs])
    tail2 = np.array([eh_exists(chain.g2, r, d, ram(s)) for s in seqs])
    compat = np.array([[compatible(a, b, d, mode) for b in seqs] for a in seqs])
    klass = np.full((n_seq, n_seq), -1)
    for i, a in enumerate(seqs):
        for j, b in enumerate(seqs):
            for k in range(t):
                if feasible(a, b, k, t, d, criterion):
                    klass[i, j] = k
                    break
    bridge = klass >= 0

    # axes: R_0, L_1, R_1, ..., L_n, R_n, L_{n+1}
    axes = 2 * n + 2

    def place(arr: np.ndarray, first_axis: int) -> np.ndarray:
        shape = [1] * (axes - 1)
        for off, size in enumerate(arr.shape):
            shape[first_axis + off] = size
        return arr.reshape(shape)

    # R_0 is looped explicitly, so tensor axes start at L_1
    rest = []
    for b in range(n):
        rest.append(place(bridge, 2 * b))  # (L_{b+1}, R_{b+1})
        rest.append(place(compat, 2 * b + 1))  # (R_{b+1}, L_{b+2})
    rest.append(place(tail2, axes - 2))
    for i0 in range(n_seq):
        if not tail1[i0]:
            continue
        factors = [place(compat[i0], 0)] + rest
        tensor = reduce(np.logical_and, factors)
        hits = np.argwhere(tensor)
        if hits.size:
            idx = (i0,) + tuple(int(v) for v in hits[0])
            rights = [idx[0]] + [idx[2 * b + 2] for b in range(n)]
            lefts = [idx[2 * b + 1] for b in range(n + 1)]
            classes = [int(klass[lefts[b], rights[b + 1]]) for b in range(n)]
            vs = lambda i: VanishingSeq(seqs[i], r, d)  # noqa: E731
            bridges = tuple(
                EllipticAspect(t, classes[b], d, r, vs(lefts[b]), vs(rights[b + 1])) for b in range(n)
            )
            return LimitWitness(params, chain, vs(rights[0]), bridges, vs(lefts[-1]), mode, criterion)
    return None


# ---------------------------------------------------------------------------
# validation and witness statistics


def validate(witness: LimitWitness) -> bool:
    """Re-check every constraint of a witness from scratch."""
    p, chain = witness.params, witness.chain
    if p.g != chain.genus or len(witness.bridges) != chain.n:
        return False
    for g_tail, seq in ((chain.g1, witness.tail_left), (chain.g2, witness.tail_right)):
        if not eh_exists(g_tail, p.r, p.d, seq.ramification):
            return False
    for aspect in witness.bridges:
        if aspect.t != chain.t:
            return False
        if not feasible(aspect.seq_left, aspect.seq_right, aspect.k, aspect.t, p.d, witness.criterion):
            return False
    return all(compatible(a, b, p.d, witness.mode) for a, b in witness.node_pairs())


@dataclass
class WitnessStats:
    """Slack and ramification statistics of a witness.

    ``eta[i][j]`` is the node-i slack in chain orientation. For chains with
    two bridges the named fields follow the orientation of the two-bridge
    inequalities: ``eta1``/``eta2`` at the tail nodes (each indexed from its
    tail), ``beta`` at the middle node, ``nu1``/``nu2`` indexed from the
    tail-side point of each bridge.
    """

    eta: list[list[int]]
    nu: list[list[int]]
    m: list[int]
    gamma: list[int]
    eta1: list[int] | None = None
    eta2: list[int] | None = None
    beta: list[int] | None = None
    nu1: list[int] | None = None
    nu2: list[int] | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = {"eta": self.eta, "nu": self.nu, "m": self.m, "gamma": self.gamma}
        if self.beta is not None:
            out.update(eta1=self.eta1, eta2=self.eta2, beta=self.beta, nu1=self.nu1, nu2=self.nu2)
        return out


def stats(witness: LimitWitness) -> WitnessStats:
    p, chain = witness.params, witness.chain
    r, d = p.r, p.d
    eta = [[a[j] + b[r - j] - d for j in range(r + 1)] for a, b in witness.node_pairs()]
    nu = [list(nu_profile(b.seq_left, b.seq_right, d)) for b in witness.bridges]
    ell = GrdParams(1, r, d)
    m = [
        -adjusted_rho(ell, [b.seq_left, b.seq_right]) + sum(max(v - 1, 0) for v in nus)
        for b, nus in zip(witness.bridges, nu)
    ]
    gamma = [
        adjusted_rho(GrdParams(chain.g1, r, d), [witness.tail_left]),
        adjusted_rho(GrdParams(chain.g2, r, d), [witness.tail_right]),
    ]
    out = WitnessStats(eta=eta, nu=nu, m=m, gamma=gamma)
    if chain.n == 2:
        out.eta1 = list(eta[0])
        out.eta2 = list(reversed(eta[2]))
        out.beta = list(eta[1])
        out.nu1 = list(nu[0])
        out.nu2 = list(reversed(nu[1]))
    return out


def check_additivity(witness: LimitWitness) -> tuple[int, int]:
    """Sum of adjusted rho over all aspects vs rho(g,r,d) minus the total node slack."""
    p, chain = witness.params, witness.chain
    r, d = p.r, p.d
    lhs = adjusted_rho(GrdParams(chain.g1, r, d), [witness.tail_left])
    lhs += adjusted_rho(GrdParams(chain.g2, r, d), [witness.tail_right])
    ell = GrdParams(1, r, d)
    for b in witness.bridges:
        lhs += adjusted_rho(ell, [b.seq_left, b.seq_right])
    s = stats(witness)
    rhs = p.rho - sum(sum(row) for row in s.eta)
    return lhs, rhs


def check_balance(witness: LimitWitness) -> tuple[int, int]:
    """sum m_i  vs  -rho + sum eta + gamma_1 + gamma_2 + sum (nu - 1)_+  (all nodes, all bridges)."""
    s = stats(witness)
    lhs = sum(s.m)
    rhs = -witness.params.rho + sum(sum(row) for row in s.eta) + sum(s.gamma)
    rhs += sum(max(v - 1, 0) for row in s.nu for v in row)
    return lhs, rhs


def check_tail_bounds(witness: LimitWitness) -> list[bool]:
    """Top-order bounds at the two tail nodes.

    At the first node the neighbour's top order is bounded by
    g_1 + r + gamma_1 + eta_{0,0}; at the last node, symmetrically, by
    g_2 + r + gamma_2 + eta_{n,r}.
    """
    s = stats(witness)
    r = witness.params.r
    pairs = witness.node_pairs()
    first = pairs[0][1][r] <= witness.chain.g1 + r + s.gamma[0] + s.eta[0][0]
    last = pairs[-1][0][r] <= witness.chain.g2 + r + s.gamma[1] + s.eta[-1][r]
    return [first, last]


@dataclass
class TorsionInequalityReport:
    m1: int
    m2: int
    part1: tuple[bool, bool] | None
    part2: tuple[bool, bool] | None

    @property
    def ok(self) -> bool:
        return all(part is None or any(part) for part in (self.part1, self.part2))


def check_torsion_inequalities(witness: LimitWitness) -> TorsionInequalityReport:
    """Evaluate both disjunctions of the two-bridge torsion inequalities (doubled to stay integral)."""
    chain = witness.chain
    if chain.n != 2:
        raise ValueError("the two-bridge inequalities need a chain with exactly two bridges")
    s = stats(witness)
    r, d, t = witness.params.r, witness.params.d, chain.t
    g1, g2 = chain.g1, chain.g2
    m1, m2 = s.m
    g_1, g_2 = s.gamma
    eta10, eta2r = s.eta1[0], s.eta2[r]
    beta0, betar = s.beta[0], s.beta[r]
    nu1r, nu2r = s.nu1[r], s.nu2[r]
    step = lambda v: 1 if v > 0 else 0  # noqa: E731  ceil(v / (v + 1)) for v >= 0
    bound1 = 2 * (g1 + r + g_1 + eta10)
    bound2 = 2 * (g2 + r + g_2 + eta2r)
    part1 = part2 = None
    if m1 >= 1:
        part1 = (
            d + m1 * t + 2 * step(nu1r) <= bound1,
            d + m1 * t - 2 * betar - 2 * nu2r < bound2,
        )
    if m2 >= 1:
        part2 = (
            d + m2 * t <= bound2,
            d + m2 * t - 2 * beta0 - 2 * nu1r + 2 * step(nu2r) < bound1,
        )
    return TorsionInequalityReport(m1, m2, part1, part2)


def is_monotone(witness: LimitWitness) -> bool:
    """Refined witnesses: the left-side node sequences weakly decrease along the chain."""
    lefts = [a for a, _ in witness.node_pairs()]
    return all(all(x >= y for x, y in zip(u, w)) for u, w in zip(lefts, lefts[1:]))


def all_identities_hold(witness: LimitWitness) -> bool:
    """Additivity, the m-balance identity, and the tail bounds; two-bridge inequalities when n = 2."""
    a, b = check_additivity(witness)
    c, e = check_balance(witness)
    ok = a == b and c == e and all(check_tail_bounds(witness))
    if witness.chain.n == 2:
        ok = ok and check_torsion_inequalities(witness).ok
    return ok


def rho_of(chain: ChainSpec, r: int, d: int) -> int:
    return rho(chain.genus, r, d)


def witness_from_sequences(
    chain: ChainSpec,
    r: int,
    d: int,
    tail_left: Sequence[int],
    bridges: Sequence[tuple[Sequence[int], Sequence[int], int]],
    tail_right: Sequence[int],
    mode: str = "crude",
    criterion: str = "sufficient",
) -> LimitWitness:
    """Assemble a witness from plain tuples (no feasibility checking)."""
    params = GrdParams(chain.genus, r, d)
    vs = lambda v: VanishingSeq(tuple(v), r, d)  # noqa: E731
    aspects = tuple(EllipticAspect(chain.t, k, d, r, vs(a), vs(b)) for a, b, k in bridges)
    return LimitWitness(params, chain, vs(tail_left), aspects, vs(tail_right), mode, criterion)
