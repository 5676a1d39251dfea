from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bnchain import bounds as bd
from bnchain.bn_core import rho

M = {(r, d): bd.LocusId(34, r, d) for r, d in [(1, 17), (2, 24), (3, 28), (4, 31), (5, 33)]}


@pytest.mark.parametrize(
    "args,expected",
    [((34, 2, 24, 16, 16), 13), ((34, 2, 24, 17, 15), 14), ((34, 4, 31, 16, 16), 12), ((34, 1, 17, 16, 16), 18)],
)
def test_threshold_examples(args, expected):
    assert bd.nonexistence_threshold(*args) == expected


def test_existence_examples():
    assert bd.existence_range(34, 5, 33, 16, 16).values() == [8, 9]
    pencil = bd.existence_range(34, 1, 17, 16, 16)
    assert pencil.values() == list(range(3, 18, 2))
    assert bd.existence_range(6, 1, 3, 2, 2).values() == [3]
    assert not bd.existence_range(34, 5, 33, 17, 15)


def test_extended_range_examples():
    assert bd.tmin(2, 16, 16, 24, 0) == 4
    assert bd.tmin(3, 17, 15, 28, 0) == 6  # d + 2 + 1 odd
    sk = bd.existence_range_sk(34, 2, 24, 16, 16)
    assert (sk.lo, sk.hi) == (4, 12)


def test_enumerate_loci_examples():
    key = lambda xs: {(x.r, x.d) for x in xs}  # noqa: E731
    assert key(bd.enumerate_loci(34, [-2])) == {(1, 17), (2, 24), (3, 28), (5, 33)}
    assert key(bd.enumerate_loci(34, [-1])) == {(4, 31)}
    assert key(bd.enumerate_loci(6, [-2])) == {(1, 3)}


def test_classification_examples():
    loci = list(M.values())
    assert all(bd.classify(x, 16, 16, 9) == bd.IN for x in loci)
    for t in (13, 15, 17):
        assert bd.classify(M[1, 17], 16, 16, t) == bd.IN
        assert all(bd.classify(M[k], 16, 16, t) == bd.OUT for k in M if k != (1, 17))
    assert [bd.classify(M[k], 16, 16, 10) for k in sorted(M)] == [bd.GAP, bd.IN, bd.IN, bd.IN, bd.OUT]


def test_certificates():
    c = bd.distinct_support_pair(34, 2, 24, 3, 28)
    assert c.t == 12 and c.threshold == 11 and c.certified
    assert bd.distinct_support_pair(34, 2, 24, 5, 33).certified
    c = bd.not_in_divisor(34, 2, 24, 4, 31)
    assert c.t == 12 and c.threshold == 12 and c.certified


def test_dimensions():
    assert bd.family_dimension(34) == 94
    assert 2 * bd.moduli_dimension(16, 1) + 2 * (bd.moduli_dimension(1, 2) - 1) == 94
    assert bd.family_dimension(4) == 4


def test_relation_statements():
    rels = {r.t: r for r in bd.relation_report(34, 16, 16)}
    assert rels[9].statement() == "Δ(16,16;2,9) ⊂ M^1_{34,17} ∩ M^2_{34,24} ∩ M^3_{34,28} ∩ M^4_{34,31} ∩ M^5_{34,33}"
    assert rels[10].statement() == "Δ(16,16;2,10) ⊂ (M^2_{34,24} ∩ M^3_{34,28} ∩ M^4_{34,31}) − M^5_{34,33}"
    assert rels[12].statement() == "Δ(16,16;2,12) ⊂ M^2_{34,24} − (M^3_{34,28} ∪ M^4_{34,31} ∪ M^5_{34,33})"


def test_union_of_families():
    a = {r.t: r for r in bd.relation_report(34, 16, 16)}
    b = {r.t: r for r in bd.relation_report(34, 17, 15)}
    inside, outside = bd.union_relation([a[11], a[12], b[12]])
    assert inside == {M[2, 24]} and outside == {M[3, 28], M[5, 33]}
    inside, outside = bd.union_relation([a[11], a[12], b[11], b[12]])
    assert inside == {M[2, 24]} and outside == {M[5, 33]}


def test_table_rows_shape():
    rows = bd.table_rows(34, [(16, 16), (17, 15)])
    assert len(rows) == 10
    md = bd.render_tables(34, [(16, 16), (17, 15)], "md")
    assert "| M^2_{34,24} | -2 | 5+(g1-g2) ≤ t ≤ 12 | 12+(g1-g2)+δ | [5, 12] | 13 | [7, 12] | 14 |" in md
    with pytest.raises(ValueError):
        bd.render_tables(34, [(16, 16)], "xml")


def test_bad_split_rejected():
    with pytest.raises(ValueError):
        bd.nonexistence_threshold(34, 2, 24, 16, 15)
    with pytest.raises(ValueError):
        bd.nonexistence_threshold(34, 2, 24, 15, 17)


# -- invariants over g <= 60 -------------------------------------------------------


def _all_negative_loci(g_max=60):
    for g in range(6, g_max + 1):
        for x in bd.enumerate_loci(g, (-1, -2)):
            for g2 in range(2, (g - 2) // 2 + 1):
                yield g, x, g - 2 - g2, g2


def test_threshold_forms_agree_everywhere():
    for g, x, g1, g2 in _all_negative_loci():
        thr = bd.nonexistence_threshold(g, x.r, x.d, g1, g2)
        assert thr == bd.table_threshold(g, x.r, x.d, g1, g2)
        if x.r == 1 and x.rho == -2:
            assert thr == bd.pencil_threshold(g, x.d, g1, g2)


def test_existence_below_threshold():
    """No t is both inside an existence range and at or above the threshold."""
    for g, x, g1, g2 in _all_negative_loci():
        ex = bd.existence_range(g, x.r, x.d, g1, g2)
        if ex:
            assert ex.max < bd.nonexistence_threshold(g, x.r, x.d, g1, g2)


def test_threshold_monotone_in_imbalance():
    for g, x, g1, g2 in _all_negative_loci():
        if g2 > 2:
            later = bd.nonexistence_threshold(g, x.r, x.d, g1 + 1, g2 - 1)
            assert later >= bd.nonexistence_threshold(g, x.r, x.d, g1, g2)


@given(st.integers(6, 60), st.data())
def test_enumerated_loci_have_requested_rho(g, data):
    targets = data.draw(st.sets(st.integers(-4, -1), min_size=1, max_size=3))
    for x in bd.enumerate_loci(g, targets):
        assert rho(g, x.r, x.d) in targets
        assert x.d <= g - 1 and 1 <= x.r


@given(st.integers(-6, -1), st.integers(6, 60))
def test_threshold_bound_is_exact_fraction(p, g):
    for x in bd.enumerate_loci(g, [p]):
        g1, g2 = bd.balanced_split(g)
        bound = bd.threshold_bound(g, x.r, x.d, g1, g2)
        assert isinstance(bound, Fraction)
        assert bd.nonexistence_threshold(g, x.r, x.d, g1, g2) == -(-bound.numerator // bound.denominator)
