import numpy as np
import pytest

from thermoex import exactrel as er
from thermoex.laminate import (Leaf, Mix, laminate2, laminate_tree, conduct2,
                               RankOneModel, IteratedRank2Model,
                               sigma_star_rank1, tree_to_json, tree_from_json)
from thermoex.tensor4 import I2, I4, RPERP, block_is_pd, rotate_block
from conftest import rand_spd, rand_pd_block


def uncoupled(sig):
    return np.block([[np.asarray(sig, float), np.zeros((2, 2))],
                     [np.zeros((2, 2)), I2]])


def test_trivial_mixes(rng):
    L = rand_pd_block(rng)
    n = rng.standard_normal(2)
    assert np.abs(laminate2(L, L, 0.5, n) - L).max() < 1e-10
    L2 = rand_pd_block(rng)
    assert np.allclose(laminate2(L, L2, 1.0, n), L)
    assert np.allclose(laminate2(L, L2, 0.0, n), L2)
    with pytest.raises(ValueError):
        laminate2(L, L2, 1.5, n)


def test_analytic_1d_solution(rng):
    """Uncoupled conduction against the series/parallel closed form."""
    for _ in range(20):
        a, b = rng.uniform(0.3, 4.0, 2)
        f = rng.uniform(0.0, 1.0)
        Ls = laminate2(uncoupled(a * I2), uncoupled(b * I2), f, [1.0, 0.0])
        sh = 1.0 / (f / a + (1 - f) / b)
        sa = f * a + (1 - f) * b
        assert np.abs(Ls - uncoupled(np.diag([sh, sa]))).max() < 1e-12 * (1 + sa)


def test_reference_independence(rng):
    L1, L2 = rand_pd_block(rng), rand_pd_block(rng)
    f, n = 0.3, (0.6, 0.8)
    a = laminate2(L1, L2, f, n)
    b = laminate2(L1, L2, f, n, L0=2 * I4)
    assert np.abs(a - b).max() < 1e-10 * (1 + np.abs(a).max())


def test_pole_shift(rng):
    """A phase equal to the shifted reference hits the transform pole; the
    epsilon-shift with one Richardson step recovers the answer."""
    L1 = uncoupled(2 * I2)
    L2 = uncoupled(5 * I2)
    direct = laminate2(L1, L2, 0.3, [1.0, 0.0])
    shifted = laminate2(L1, L2, 0.3, [1.0, 0.0], L0=2 * I4)
    assert np.abs(direct - shifted).max() < 1e-7


def test_er13_parameter_rule(rng):
    for _ in range(20):
        La, Lb = rand_spd(rng) + I2, rand_spd(rng) + I2
        f = rng.uniform(0, 1)
        n = rng.standard_normal(2)
        Ls = laminate2(er.lm_par(La, RPERP), er.lm_par(Lb, RPERP), f, n)
        pred = np.linalg.inv(f * np.linalg.inv(La) + (1 - f) * np.linalg.inv(Lb))
        assert np.abs(Ls[:2, :2] - pred).max() < 1e-10


def test_tree_leaf_rotation(rng):
    L = rand_pd_block(rng)
    th = 0.8
    assert np.allclose(laminate_tree(Leaf(L, th)), rotate_block(th, L))
    tree = Mix(Leaf(L), Leaf(L), 0.4, (0.0, 1.0))
    assert np.abs(laminate_tree(tree) - L).max() < 1e-10
    deep = Mix(Mix(Leaf(L), Leaf(L), 0.3, (1.0, 0.0)),
               Mix(Leaf(L), Leaf(L), 0.6, (0.6, 0.8)), 0.5, (0.0, 1.0))
    assert np.abs(laminate_tree(deep) - L).max() < 1e-9


def test_rank3_tree_stays_in_relation(rng):
    """Hierarchical laminates of relation-21 members remain members."""
    for _ in range(10):
        leaves = [Leaf(er.er_sample(21, rng=rng, scale=0.5),
                       rng.uniform(0, np.pi)) for _ in range(4)]
        t = Mix(Mix(Mix(leaves[0], leaves[1], rng.uniform(0.2, 0.8),
                        tuple(rng.standard_normal(2))),
                    leaves[2], rng.uniform(0.2, 0.8),
                    tuple(rng.standard_normal(2))),
                leaves[3], rng.uniform(0.2, 0.8),
                tuple(rng.standard_normal(2)))
        Ls = laminate_tree(t)
        assert block_is_pd(Ls)
        assert er.er_member(21, Ls, tol=1e-8).member


def test_sigma_star_closed_form():
    assert np.allclose(sigma_star_rank1(1.0, 0.3, [1, 0]), I2)
    out = sigma_star_rank1(4.0, 0.5, [1, 0])
    assert np.allclose(out, np.diag([1.6, 2.5]))
    with pytest.raises(ValueError):
        sigma_star_rank1(-1.0, 0.5, [1, 0])


def test_conduct2_matches_closed_form(rng):
    for _ in range(20):
        h = rng.uniform(0.2, 5.0)
        f = rng.uniform(0, 1)
        n = rng.standard_normal(2)
        lhs = conduct2(I2, h * I2, f, n)
        assert np.abs(lhs - sigma_star_rank1(h, f, n)).max() < 1e-12 * (1 + h)


def test_model_embedding_consistency(rng):
    """Conductivity mixing agrees with the 4x4 path on uncoupled tensors."""
    for model in (RankOneModel(0.4, (1.0, 0.0)),
                  RankOneModel(0.7, (0.6, 0.8)),
                  IteratedRank2Model(0.4, (1.0, 0.0), 0.6, (0.0, 1.0))):
        for _ in range(10):
            h = rng.uniform(0.3, 4.0)
            full = model.tensor(uncoupled(I2), uncoupled(h * I2))
            assert np.abs(full - uncoupled(model.sigma_star(h))).max() < 1e-10
            tree_val = laminate_tree(model.tree(uncoupled(I2), uncoupled(h * I2)))
            assert np.abs(full - tree_val).max() < 1e-12


def test_w_linearity_membership(rng):
    """Rank-one mixes of members stay members, for every relation."""
    for ident in er.ER_IDS:
        for _ in range(15):
            L1 = er.er_sample(ident, rng=rng, scale=0.6)
            L2 = er.er_sample(ident, rng=rng, scale=0.6)
            f = rng.uniform(0, 1)
            n = rng.standard_normal(2)
            Ls = laminate2(L1, L2, f, n)
            m = er.er_member(ident, Ls, tol=1e-8)
            assert m.member, (ident, m.residual)


def test_tree_json_roundtrip(rng):
    L = rand_pd_block(rng)
    t = Mix(Leaf(L, 0.3), Mix(Leaf(L), Leaf(L, 1.1), 0.2, (0.0, 1.0)),
            0.7, (0.6, 0.8))
    back = tree_from_json(tree_to_json(t))
    assert np.abs(laminate_tree(back) - laminate_tree(t)).max() < 1e-14
    with pytest.raises(ValueError):
        tree_from_json({"oops": {}})
