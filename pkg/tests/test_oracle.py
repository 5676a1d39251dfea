import numpy as np
import pytest

from bnchain.elliptic_aspect import dim_f, pair_exact_exists
from bnchain.oracle import (
    check_agreement,
    exact_pair_oracle,
    make_curve,
    realize,
    rr_space,
    section_space,
    verify_dim_table,
)
from bnchain.oracle import fp_linalg as fl


@pytest.fixture(scope="module", params=[3, 4, 5])
def inst(request):
    return make_curve(request.param)


@pytest.fixture(scope="module")
def inst2():
    return make_curve(2, allow_two_torsion=True)


def test_linear_algebra():
    p = 101
    m = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert fl.rank(m, p) == 2
    ns = fl.nullspace(m, p)
    assert ns.shape == (1, 3)
    assert not ((m @ ns.T) % p).any()
    assert fl.leading_orders([[0, 0, 5], [0, 3, 1]], p) == [1, 2]


def test_curve_instances(inst):
    c = inst.curve
    assert c.p >= 101 and c.contains(inst.P)
    assert c.point_order(inst.P) == inst.t
    assert inst.P[1] != 0
    assert inst.group_order == c.order()
    assert c.mul(inst.group_order, inst.P) is None


def test_two_torsion_needs_opt_in():
    with pytest.raises(ValueError):
        make_curve(2)
    with pytest.raises(ValueError):
        make_curve(1)


def test_rr_dimensions(inst):
    t = inst.t
    for d in range(0, 7):
        assert rr_space(inst, 0, d).dim == max(d, 1)
        for k in range(t):
            if d >= 1:
                assert rr_space(inst, k, d - k).dim == d
    assert rr_space(inst, t, -t).dim == 1
    assert rr_space(inst, 1, -1).dim == 0
    assert rr_space(inst, -2, -1).dim == 0


def test_dim_table_examples():
    i4, i5 = make_curve(4), make_curve(5)
    assert verify_dim_table(i4, 4, 2) == []
    assert section_space(i4, 4, 2).subspace_dim(2, 2) == 1
    assert verify_dim_table(i5, 3, 4) == []


def test_exact_pair_example():
    i5 = make_curve(5)
    assert exact_pair_oracle(i5, 5, 1, 1, 3) is False


def test_realize_two_torsion(inst2):
    res = realize(inst2, 4, 0, (0, 2), (2, 4))
    assert res is not None and res.seq_p == (0, 2) and res.seq_o == (2, 4)
    for d in range(7):
        for k in range(2):
            assert verify_dim_table(inst2, d, k) == []


def test_realize_rejects_infeasible():
    i4 = make_curve(4)
    assert all(realize(i4, 4, k, (0, 2), (2, 4)) is None for k in range(4))


def test_oracle_agrees_with_model(inst):
    rep = check_agreement(inst.t, d_max=6, samples=10, seed=1, inst=inst)
    assert rep.ok and rep.realized == 10


def test_model_and_oracle_cellwise(inst):
    t = inst.t
    for d in range(5):
        for k in range(t):
            sp = section_space(inst, d, k)
            for a in range(d + 2):
                for b in range(d + 2):
                    assert sp.subspace_dim(a, b) == dim_f(a, b, k, t, d)
                    if a <= d and b <= d:
                        assert exact_pair_oracle(inst, d, k, a, b) == pair_exact_exists(a, b, k, t, d)
