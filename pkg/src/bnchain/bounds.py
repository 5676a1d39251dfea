"""Closed-form torsion thresholds, existence ranges and Brill-Noether locus relations.

All comparisons are exact: fractional bounds go through ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterable

from .bn_core import rho


@dataclass(frozen=True, order=True)
class LocusId:
    g: int
    r: int
    d: int

    @property
    def rho(self) -> int:
        return rho(self.g, self.r, self.d)

    def label(self) -> str:
        return f"M^{self.r}_{{{self.g},{self.d}}}"


@dataclass(frozen=True)
class TcbeFamily:
    g1: int
    g2: int
    t: int
    n: int = 2

    def __post_init__(self) -> None:
        if self.g1 < self.g2:
            raise ValueError(f"family needs g1 >= g2, got ({self.g1}, {self.g2})")
        if self.g2 < 2:
            raise ValueError("tail genera must be at least 2")
        if self.t < 2:
            raise ValueError("torsion order must be at least 2")

    @property
    def g(self) -> int:
        return self.g1 + self.g2 + self.n

    def label(self) -> str:
        return f"Δ({self.g1},{self.g2};{self.n},{self.t})"


def kronecker(a: int, b: int) -> int:
    return 1 if a == b else 0


def _check_split(g: int, g1: int, g2: int) -> None:
    if g1 + g2 + 2 != g:
        raise ValueError(f"g1 + g2 + 2 = {g1 + g2 + 2} != g = {g}")
    if g1 < g2:
        raise ValueError(f"need g1 >= g2, got ({g1}, {g2})")


def threshold_bound(g: int, r: int, d: int, g1: int, g2: int) -> Fraction:
    """The (possibly fractional) bound t must stay strictly below for a limit g^r_d to exist."""
    p = rho(g, r, d)
    if p >= 0:
        raise ValueError(f"rho({g},{r},{d}) = {p} is not negative")
    _check_split(g, g1, g2)
    delta = kronecker(g1, g2)
    if p == -1:
        return Fraction(g - d + 2 * r + (g1 - g2) + delta)
    return Fraction(2, -p) * (g - d + 2 * r - 2 + (g1 - g2) + delta)


def nonexistence_threshold(g: int, r: int, d: int, g1: int, g2: int) -> int:
    """Smallest T such that no limit g^r_d exists for any t >= max(T, 4)."""
    return ceil(threshold_bound(g, r, d, g1, g2))


def table_threshold(g: int, r: int, d: int, g1: int, g2: int) -> int:
    """Nonexistence column in the rho in {-1, -2} form: g - d + 2r + 2(1 + rho) + (g1 - g2) + delta."""
    p = rho(g, r, d)
    if p not in (-1, -2):
        raise ValueError(f"rho({g},{r},{d}) = {p} not in {{-1, -2}}")
    _check_split(g, g1, g2)
    return g - d + 2 * r + 2 * (1 + p) + (g1 - g2) + kronecker(g1, g2)


def pencil_threshold(g: int, d: int, g1: int, g2: int) -> int:
    """Nonexistence column for pencils with rho = -2: g - d + (g1 - g2) + delta."""
    if rho(g, 1, d) != -2:
        raise ValueError(f"rho({g},1,{d}) = {rho(g, 1, d)}; the pencil column assumes rho = -2")
    _check_split(g, g1, g2)
    return g - d + (g1 - g2) + kronecker(g1, g2)


@dataclass(frozen=True)
class TorsionRange:
    """Integers t in [lo, hi] (hi may be below lo), optionally restricted to one residue mod 2."""

    lo: int
    hi: int
    parity: int | None = None

    def __contains__(self, t: int) -> bool:
        if not self.lo <= t <= self.hi:
            return False
        return self.parity is None or t % 2 == self.parity

    def values(self) -> list[int]:
        return [t for t in range(self.lo, self.hi + 1) if t in self]

    def __bool__(self) -> bool:
        return bool(self.values())

    @property
    def max(self) -> int | None:
        vals = self.values()
        return vals[-1] if vals else None

    def describe(self) -> str:
        if self.parity is None:
            return f"[{self.lo}, {self.hi}]" if self.lo <= self.hi else "empty"
        kind = "odd" if self.parity == 1 else "even"
        return f"{kind} t ≤ {self.max}" if self else "empty"


def existence_range(g: int, r: int, d: int, g1: int, g2: int) -> TorsionRange:
    """Torsion orders for which a smoothable limit g^r_d is known to exist (rho in {-1, -2})."""
    p = rho(g, r, d)
    if p not in (-1, -2):
        raise ValueError(f"rho({g},{r},{d}) = {p} not in {{-1, -2}}")
    _check_split(g, g1, g2)
    if r == 1:
        return TorsionRange(2, g2 + 3 + p, (g1 + 1) % 2)
    return TorsionRange(r + 3 + (g1 - g2), g - d + 2 * r + p)


def pencil_upper_bound(g: int, d: int, g1: int, g2: int) -> Fraction:
    """Upper end of the pencil range written as g - d + 3 + 3 rho/2 - (g1 - g2)/2."""
    p = rho(g, 1, d)
    return g - d + 3 + Fraction(3 * p, 2) - Fraction(g1 - g2, 2)


def tmin(r: int, g1: int, g2: int, d: int, h: int) -> int:
    """Lower end of the companion existence range for r >= 2."""
    if h not in (0, 1):
        raise ValueError("h must be 0 or 1")
    if r % 2 == 0:
        return r + 2 + (g1 - g2)
    if (g1 - g2 + h) % 2:
        raise ValueError("g1 - g2 + h must be even when r is odd")
    half = (g1 - g2 + h) // 2
    if (d + 2 + half) % 2 == 1:
        return r + 2 + half
    return r + 3 + half


def existence_range_sk(g: int, r: int, d: int, g1: int, g2: int) -> TorsionRange:
    """Companion existence range for rho = -2 + h, h in {0, 1}, under g1 - h >= g2 >= 2."""
    p = rho(g, r, d)
    h = p + 2
    if h not in (0, 1):
        raise ValueError(f"rho({g},{r},{d}) = {p} not in {{-1, -2}}")
    _check_split(g, g1, g2)
    if not g1 - h >= g2 >= 2:
        raise ValueError(f"need g1 - h >= g2 >= 2, got g1={g1}, g2={g2}, h={h}")
    if r == 1:
        return TorsionRange(2, g2 + h + 1, (g1 + 1) % 2)
    return TorsionRange(tmin(r, g1, g2, d, h), g - d + 2 * r - 2 + h)


def enumerate_loci(g: int, rho_targets: Iterable[int]) -> list[LocusId]:
    """Loci M^r_{g,d} with r >= 1, d <= g - 1 and rho in ``rho_targets``, sorted by (r, d)."""
    if g < 3:
        raise ValueError("g must be at least 3")
    targets = set(rho_targets)
    out = []
    for r in range(1, g):
        for d in range(r, g):
            if rho(g, r, d) in targets:
                out.append(LocusId(g, r, d))
    return out


def balanced_split(g: int) -> tuple[int, int]:
    """(ceil((g-2)/2), floor((g-2)/2))."""
    return (g - 1) // 2, (g - 2) // 2


# ---------------------------------------------------------------------------
# relations among loci


IN, OUT, GAP = "IN", "OUT", "GAP"


def classify(locus: LocusId, g1: int, g2: int, t: int) -> str:
    """IN: inside the known existence range; OUT: excluded by the threshold (t >= 4); otherwise GAP."""
    if t in existence_range(locus.g, locus.r, locus.d, g1, g2):
        return IN
    if t >= 4 and t >= nonexistence_threshold(locus.g, locus.r, locus.d, g1, g2):
        return OUT
    return GAP


@dataclass(frozen=True)
class Relation:
    """Δ(g1,g2;2,t) ⊂ ∩ inside − ∪ outside."""

    g: int
    g1: int
    g2: int
    t: int
    inside: tuple[LocusId, ...]
    outside: tuple[LocusId, ...]
    gap: tuple[LocusId, ...] = field(default=())

    @property
    def family(self) -> str:
        return f"Δ({self.g1},{self.g2};2,{self.t})"

    def statement(self) -> str:
        return f"{self.family} ⊂ {containment_text(self.g, self.inside, self.outside)}"

    @property
    def informative(self) -> bool:
        return bool(self.inside or self.outside)


def relation_report(g: int, g1: int, g2: int, loci: list[LocusId] | None = None, t_max: int | None = None):
    """Per-t classification of every rho in {-1, -2} locus on Δ(g1,g2;2,t)."""
    _check_split(g, g1, g2)
    if loci is None:
        loci = enumerate_loci(g, (-1, -2))
    loci = sorted(loci, key=lambda x: (x.r, x.d))
    if t_max is None:
        t_max = max([4] + [nonexistence_threshold(x.g, x.r, x.d, g1, g2) for x in loci])
    out = []
    for t in range(2, t_max + 1):
        marks = {x: classify(x, g1, g2, t) for x in loci}
        out.append(
            Relation(
                g,
                g1,
                g2,
                t,
                tuple(x for x in loci if marks[x] == IN),
                tuple(x for x in loci if marks[x] == OUT),
                tuple(x for x in loci if marks[x] == GAP),
            )
        )
    return out


def union_relation(relations: Iterable[Relation]) -> tuple[frozenset[LocusId], frozenset[LocusId]]:
    """Strongest statement valid for a union of families: intersect the IN sets and the OUT sets."""
    rels = list(relations)
    if not rels:
        raise ValueError("empty union")
    inside = frozenset(rels[0].inside)
    outside = frozenset(rels[0].outside)
    for rel in rels[1:]:
        inside &= frozenset(rel.inside)
        outside &= frozenset(rel.outside)
    return inside, outside


def containment_text(g: int, inside: Iterable[LocusId], outside: Iterable[LocusId]) -> str:
    """Canonical "∩ inside − ∪ outside" text with loci ordered by (r, d)."""
    inside = sorted(inside, key=lambda x: (x.r, x.d))
    outside = sorted(outside, key=lambda x: (x.r, x.d))
    pos = " ∩ ".join(x.label() for x in inside) if inside else f"M_{g}"
    if not outside:
        return pos
    neg = " ∪ ".join(x.label() for x in outside)
    if len(outside) > 1:
        neg = f"({neg})"
    if len(inside) > 1:
        pos = f"({pos})"
    return f"{pos} − {neg}"


def union_statement(relations: Iterable[Relation]) -> str:
    rels = sorted(relations, key=lambda x: (x.t, x.g1, x.g2))
    inside, outside = union_relation(rels)
    lhs = " ∪ ".join(r.family for r in rels)
    return f"{lhs} ⊂ {containment_text(rels[0].g, inside, outside)}"


def group_relations(relations: Iterable[Relation]) -> list[tuple[list[int], Relation]]:
    """Merge values of t sharing the same (IN, OUT) signature, ordered by first t."""
    groups: dict[tuple, list[Relation]] = {}
    for rel in relations:
        if rel.informative:
            groups.setdefault((rel.g1, rel.g2, rel.inside, rel.outside), []).append(rel)
    return sorted(([r.t for r in rels], rels[0]) for rels in groups.values())


# ---------------------------------------------------------------------------
# separation certificates


@dataclass(frozen=True)
class Certificate:
    """Torsion order t* with the checks that make Δ(g1,g2;2,t*) separate two loci."""

    t: int
    g1: int
    g2: int
    lower_ok: bool
    in_range: bool
    threshold: int
    excluded: bool

    @property
    def certified(self) -> bool:
        return self.lower_ok and self.in_range and self.excluded


def distinct_support_pair(g: int, r: int, d: int, s: int, e: int) -> Certificate | None:
    """Certificate that M^r_{g,d} and M^s_{g,e} (both rho = -2) have different supports.

    Returns None when the hypotheses (d, e <= g - 1, e not in {d, 2g-2-d}, s > r >= 2) fail.
    """
    if rho(g, r, d) != -2 or rho(g, s, e) != -2:
        raise ValueError("both loci must have rho = -2")
    if not (d <= g - 1 and e <= g - 1 and e != d and e != 2 * g - 2 - d and s > r >= 2):
        return None
    g1, g2 = balanced_split(g)
    t_star = g - d + 2 * r - 2
    thr = nonexistence_threshold(g, s, e, g1, g2)
    return Certificate(
        t=t_star,
        g1=g1,
        g2=g2,
        lower_ok=t_star >= r + 4,
        in_range=t_star in existence_range(g, r, d, g1, g2),
        threshold=thr,
        excluded=t_star >= thr and t_star >= 4,
    )


def not_in_divisor(g: int, r: int, d: int, s: int, e: int) -> Certificate | None:
    """Certificate that M^r_{g,d} (rho = -2) is not contained in the divisor M^s_{g,e} (rho = -1).

    Applies when e - 2s >= d - 2r + 3, or for r = 2, g >= 34, s >= 2 (t* = g - d + 2).
    """
    if rho(g, r, d) != -2 or rho(g, s, e) != -1:
        raise ValueError("need rho(g,r,d) = -2 and rho(g,s,e) = -1")
    if r < 2 or d > g - 1 or e > g - 1:
        return None
    general = e - 2 * s >= d - 2 * r + 3
    nets = r == 2 and g >= 34 and s >= 2
    if not (general or nets):
        return None
    g1, g2 = balanced_split(g)
    t_star = g - d + 2 * r - 2
    thr = nonexistence_threshold(g, s, e, g1, g2)
    return Certificate(
        t=t_star,
        g1=g1,
        g2=g2,
        lower_ok=t_star >= r + 4,
        in_range=t_star in existence_range(g, r, d, g1, g2),
        threshold=thr,
        excluded=t_star >= thr and t_star >= 4,
    )


def family_dimension(g: int) -> int:
    if g < 4:
        raise ValueError("family dimension needs g >= 4")
    return 3 * g - 8


def moduli_dimension(g: int, n: int) -> int:
    return 3 * g - 3 + n


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class TableRow:
    locus: LocusId
    g1: int
    g2: int
    existence: TorsionRange
    threshold: int


def table_rows(g: int, pairs: Iterable[tuple[int, int]], loci: list[LocusId] | None = None) -> list[TableRow]:
    if loci is None:
        loci = enumerate_loci(g, (-1, -2))
    rows = []
    for locus in sorted(loci, key=lambda x: (x.r, x.d)):
        for g1, g2 in pairs:
            thr = table_threshold(g, locus.r, locus.d, g1, g2)
            if thr != nonexistence_threshold(g, locus.r, locus.d, g1, g2):
                raise AssertionError(f"threshold forms disagree for {locus} at ({g1},{g2})")
            if locus.r == 1 and locus.rho == -2 and thr != pencil_threshold(g, locus.d, g1, g2):
                raise AssertionError(f"pencil threshold forms disagree for {locus} at ({g1},{g2})")
            rows.append(TableRow(locus, g1, g2, existence_range(g, locus.r, locus.d, g1, g2), thr))
    return rows


def _symbolic(locus: LocusId) -> tuple[str, str]:
    g, r, d, p = locus.g, locus.r, locus.d, locus.rho
    if r == 1:
        top = pencil_upper_bound(g, d, 0, 0)
        return f"t ≤ {top}-(g1-g2)/2, t ≡ g1+1 (mod 2)", f"{g - d}+(g1-g2)+δ"
    return (
        f"{r + 3}+(g1-g2) ≤ t ≤ {g - d + 2 * r + p}",
        f"{g - d + 2 * r + 2 * (1 + p)}+(g1-g2)+δ",
    )


def render_tables(g: int, pairs: list[tuple[int, int]], fmt: str = "md") -> str:
    """Existence ranges and nonexistence thresholds: r >= 2 loci first, then pencils."""
    rows = table_rows(g, pairs)
    if fmt == "csv":
        lines = ["locus,r,d,rho,g1,g2,existence_lo,existence_hi,parity,existence,threshold"]
        for row in rows:
            x, ex = row.locus, row.existence
            parity = "" if ex.parity is None else ("odd" if ex.parity else "even")
            lines.append(
                f"{x.label()},{x.r},{x.d},{x.rho},{row.g1},{row.g2},{ex.lo},{ex.hi},{parity},"
                f"\"{ex.describe()}\",{row.threshold}"
            )
        return "\n".join(lines) + "\n"
    if fmt != "md":
        raise ValueError(f"unknown table format {fmt!r}")
    out: list[str] = []
    for title, select in (("r >= 2", lambda x: x.r >= 2), ("r = 1", lambda x: x.r == 1)):
        loci = sorted({row.locus for row in rows if select(row.locus)}, key=lambda x: (x.r, x.d))
        if not loci:
            continue
        header = ["locus", "rho", "existence range", "nonexistence threshold"]
        for g1, g2 in pairs:
            header += [f"existence ({g1},{g2})", f"threshold ({g1},{g2})"]
        out.append(f"### {title}")
        out.append("")
        out.append("| " + " | ".join(header) + " |")
        out.append("|" + "|".join("---" for _ in header) + "|")
        for locus in loci:
            ex_sym, thr_sym = _symbolic(locus)
            cells = [locus.label(), str(locus.rho), ex_sym, thr_sym]
            for g1, g2 in pairs:
                row = next(x for x in rows if x.locus == locus and (x.g1, x.g2) == (g1, g2))
                cells += [row.existence.describe(), str(row.threshold)]
            out.append("| " + " | ".join(cells) + " |")
        out.append("")
    return "\n".join(out)
