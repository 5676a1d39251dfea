import dataclasses
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bnchain.bn_core import VanishingSeq
from bnchain.chain_search import (
    ChainError,
    ChainSpec,
    LimitWitness,
    all_identities_hold,
    brute_force,
    check_additivity,
    check_balance,
    check_tail_bounds,
    check_torsion_inequalities,
    compatible,
    is_monotone,
    search,
    stats,
    validate,
    witness_from_sequences,
)


# -- chain specs ---------------------------------------------------------------


def test_parse_examples():
    assert str(ChainSpec.parse("tail:16,ell:9,ell:9,tail:16")) == "TCBE(16,16;2,9)"
    with pytest.raises(ChainError):
        ChainSpec.parse("ell:3,tail:2,tail:2")


@pytest.mark.parametrize(
    "text",
    ["tail:1,ell:3,tail:2", "tail:2,ell:3,ell:4,tail:2", "tail:2,ell:1,tail:2", "tail:2,tail:2", "tail:2,ell:x,tail:2"],
)
def test_parse_rejects(text):
    with pytest.raises(ChainError):
        ChainSpec.parse(text)


@given(st.integers(2, 40), st.integers(2, 40), st.integers(2, 30), st.integers(1, 5))
def test_render_round_trip(g1, g2, t, n):
    chain = ChainSpec.tcbe(g1, g2, t, n)
    assert ChainSpec.parse(chain.render()) == chain
    assert chain.genus == g1 + g2 + n


# -- compatibility -------------------------------------------------------------


def test_compatible_examples():
    assert compatible((1, 3), (0, 2), 3, "refined")
    assert compatible((1, 3), (1, 2), 3, "crude")
    assert not compatible((1, 3), (1, 2), 3, "refined")
    assert not compatible((0, 1), (0, 1), 3, "crude")
    assert not compatible((0, 1), (0, 1), 3, "refined")


# -- search examples -------------------------------------------------------------


def test_small_exists():
    v = search(ChainSpec.tcbe(2, 2, 3), 1, 3, "crude", "sufficient")
    assert v.exists and validate(v.witness)
    w = v.witness
    assert w.tail_left.values == (0, 3) and w.tail_right.values == (0, 3)
    assert [(b.seq_left.values, b.seq_right.values, b.k) for b in w.bridges] == [((0, 3), (0, 3), 0)] * 2


def test_small_not_exists():
    v = search(ChainSpec.tcbe(2, 2, 5), 1, 3, "crude", "necessary")
    assert v.not_exists and v.witness is None


def test_necessary_never_claims_existence():
    v = search(ChainSpec.tcbe(2, 2, 3), 1, 3, "crude", "necessary")
    assert v.undetermined and v.candidate is not None


def test_auto_criterion():
    assert search(ChainSpec.tcbe(2, 2, 3), 1, 3).exists
    assert search(ChainSpec.tcbe(2, 2, 7), 1, 3).not_exists


def test_resource_caps_give_undetermined():
    chain = ChainSpec.tcbe(16, 16, 12)
    assert search(chain, 2, 24, max_candidates=100).undetermined
    assert search(chain, 2, 24, "refined", "sufficient", time_budget=0.0).undetermined


def test_g34_examples():
    chain = ChainSpec.tcbe(16, 16, 12)
    v = search(chain, 2, 24, "refined", "sufficient")
    assert v.exists and validate(v.witness) and all_identities_hold(v.witness)
    w = v.witness
    assert w.tail_left.values == (6, 13, 18)
    assert [(b.seq_left.values, b.seq_right.values, b.k) for b in w.bridges] == [
        ((6, 11, 18), (6, 12, 18), 6),
        ((6, 12, 18), (6, 11, 18), 6),
    ]
    assert search(ChainSpec.tcbe(16, 16, 13), 2, 24, "crude", "necessary").not_exists


def test_witness_json_round_trip():
    w = search(ChainSpec.tcbe(3, 2, 4), 1, 4, "refined", "sufficient").witness
    assert w is not None
    data = json.loads(json.dumps(w.to_dict()))
    assert LimitWitness.from_dict(data) == w
    comp = data["components"][1]
    assert set(comp) == {"kind", "torsion", "seq_left", "seq_right", "class_k"}


def test_verdict_stats_block():
    v = search(ChainSpec.tcbe(2, 2, 3), 1, 3, "crude", "sufficient")
    block = v.to_dict()["witness"]["stats"]
    assert {"eta", "nu", "m", "gamma", "eta1", "eta2", "beta", "nu1", "nu2"} <= set(block)


def test_jobs_and_repeat_are_deterministic():
    chain = ChainSpec.tcbe(5, 4, 6)
    ref = search(chain, 2, 9, "crude", "auto").to_dict()
    assert search(chain, 2, 9, "crude", "auto", jobs=3).to_dict() == ref
    assert search(chain, 2, 9, "crude", "auto").to_dict() == ref


def test_longer_chains():
    chain = ChainSpec.parse("tail:2,ell:3,ell:3,ell:3,tail:2")
    v = search(chain, 1, 3, "crude", "auto")
    w = v.witness or v.candidate
    if w is not None:
        assert validate(w)
        a, b = check_additivity(w)
        assert a == b
        with pytest.raises(ValueError):
            check_torsion_inequalities(w)
    assert v.to_dict()["verdict"] in ("exists", "not_exists", "undetermined")


# -- brute force cross-check -----------------------------------------------------


def _small_instances():
    for g1 in range(2, 4):
        for g2 in range(2, g1 + 1):
            for t in range(2, 7):
                for r in (0, 1):
                    for d in range(max(r, 1), 7):
                        yield g1, g2, t, r, d


@pytest.mark.parametrize("crit", ["necessary", "sufficient"])
@pytest.mark.parametrize("mode", ["crude", "refined"])
def test_dp_matches_brute_force(crit, mode):
    mismatches = []
    for g1, g2, t, r, d in _small_instances():
        chain = ChainSpec.tcbe(g1, g2, t)
        bf = brute_force(chain, r, d, crit, mode)
        v = search(chain, r, d, mode, crit, reduce=False)
        if crit == "sufficient":
            got = v.witness if v.exists else None
        else:
            got = None if v.not_exists else v.candidate
        if (bf is None) != (got is None):
            mismatches.append((g1, g2, t, r, d))
        elif bf is not None:
            assert got.sort_key() == bf.sort_key(), (g1, g2, t, r, d)
            assert validate(got)
    assert mismatches == []


def test_reduction_agrees_on_small_instances():
    for g1, g2, t, r, d in _small_instances():
        chain = ChainSpec.tcbe(g1, g2, t)
        a = search(chain, r, d, "crude", "necessary", reduce=True)
        b = search(chain, r, d, "crude", "necessary", reduce=False)
        assert a.status == b.status


def test_no_contradictory_verdicts():
    for g1, g2, t, r, d in _small_instances():
        chain = ChainSpec.tcbe(g1, g2, t)
        suff = search(chain, r, d, "crude", "sufficient")
        nec = search(chain, r, d, "crude", "necessary")
        assert not (suff.exists and nec.not_exists)


# -- validation and identities ---------------------------------------------------


@pytest.fixture(scope="module")
def small_witness():
    return search(ChainSpec.tcbe(2, 2, 3), 1, 3, "crude", "sufficient").witness


def test_validate_rejects_bad_tail(small_witness):
    bad = dataclasses.replace(small_witness, tail_left=VanishingSeq((2, 3), 1, 3))
    assert not validate(bad)


def test_validate_rejects_negative_slack(small_witness):
    w = small_witness
    b0 = w.bridges[0]
    shifted = dataclasses.replace(b0, seq_left=VanishingSeq((0, 2), 1, 3))
    bad = dataclasses.replace(w, bridges=(shifted,) + w.bridges[1:])
    assert min(min(row) for row in stats(bad).eta) < 0
    assert not validate(bad)


def test_validate_rejects_wrong_class(small_witness):
    w = small_witness
    b0 = dataclasses.replace(w.bridges[0], k=1)
    assert not validate(dataclasses.replace(w, bridges=(b0,) + w.bridges[1:]))


def test_small_witness_identities(small_witness):
    s = stats(small_witness)
    assert all(v >= 0 for row in s.eta for v in row) and all(v >= 0 for v in s.beta)
    lhs, rhs = check_balance(small_witness)
    assert lhs == rhs
    assert all(check_tail_bounds(small_witness))
    assert check_torsion_inequalities(small_witness).ok


def test_refined_witness_has_zero_slack():
    w = search(ChainSpec.tcbe(16, 16, 11), 2, 24, "refined", "sufficient").witness
    s = stats(w)
    assert all(v == 0 for row in s.eta for v in row)
    assert check_additivity(w) == (w.params.rho, w.params.rho)
    assert is_monotone(w)


def test_tail_bounds_hold_on_valid_tails_and_can_fail():
    """The bound at each tail node holds whenever the tail passes its criterion; corrupted tails can break it."""
    from bnchain.bn_core import all_sequences, eh_exists

    chain = ChainSpec.tcbe(5, 4, 3)
    r, d = 2, 6
    seqs = all_sequences(r, d)
    bridge = ((0, 1, 2), (4, 5, 6), 0)
    violated = 0
    for tl in seqs:
        for tr in seqs:
            w = witness_from_sequences(chain, r, d, tl, [bridge, bridge], tr)
            first, last = check_tail_bounds(w)
            if eh_exists(chain.g1, r, d, w.tail_left.ramification):
                assert first
            if eh_exists(chain.g2, r, d, w.tail_right.ramification):
                assert last
            violated += (not first) + (not last)
    assert violated > 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(2, 5), st.integers(2, 9), st.integers(1, 2), st.integers(2, 9))
def test_witnesses_satisfy_identities(g1, g2, t, r, d):
    if r > d:
        return
    chain = ChainSpec.tcbe(max(g1, g2), min(g1, g2), t)
    for mode in ("crude", "refined"):
        v = search(chain, r, d, mode, "sufficient")
        if v.exists:
            assert validate(v.witness)
            assert all_identities_hold(v.witness)
            if mode == "refined":
                assert is_monotone(v.witness)
