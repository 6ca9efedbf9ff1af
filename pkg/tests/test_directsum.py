from __future__ import annotations

import itertools

import numpy as np
import pytest

from qmatroids.algebra import Matrix, make_field
from qmatroids.directsum import (DirectSumContext, brute_force_mu, compute_direct_sum, direct_sum,
                                 ds_circuits, lift_with_loops, subspaces_below, x_set)
from qmatroids.lattice import embed_indices, get_lattice
from qmatroids.qmatroid import QMatroid

from conftest import G1, GF4


def _all_on(n: int):
    """Uniform q-matroids plus a few represented ones on GF(2)^n."""
    lat = get_lattice(2, n)
    out = [QMatroid.uniform(k, lat) for k in range(n + 1)]
    f = make_field(2, 2)
    rng = np.random.default_rng(n)
    for _ in range(3):
        out.append(QMatroid.from_matrix(Matrix(f, rng.integers(0, 4, (1, n))), lat))
    return out


def test_uniform_sum_ground_truth(u12):
    ds = compute_direct_sum(u12, u12)
    lat = ds.lattice
    total = ds.matroid
    e12 = lat.canonicalize([[1, 0, 0, 0], [0, 1, 0, 0]])
    e34 = lat.canonicalize([[0, 0, 1, 0], [0, 0, 0, 1]])
    for v in lat:
        if v.dim <= 1:
            want = v.dim
        elif v.dim == 2:
            want = 1 if v in (e12, e34) else 2
        else:
            want = 2
        assert total[v] == want, v
    xs = {v.index for v in ds.x_set()}
    assert xs == {v.index for v in lat if v.dim >= 3} | {e12.index, e34.index}
    assert len(xs) == 18
    assert {c.index for c in ds.circuits() if c.dim == 2} == {e12.index, e34.index}


def test_dp_equals_oracle_everywhere_small(u12):
    ds = compute_direct_sum(u12, u12)
    for v in ds.lattice:
        assert brute_force_mu(ds, v) == ds.mu[v.index]


def test_subspaces_below_counts(lat24):
    assert len(subspaces_below(lat24.full)) == 67
    v = lat24.canonicalize([[1, 0, 0, 0], [0, 1, 0, 0]])
    assert len(subspaces_below(v)) == 5


def test_rank_additivity_all_pairs(u12):
    total = direct_sum(u12, u12)
    big = total.lattice
    small = u12.lattice
    for a, b in itertools.product(range(small.size), repeat=2):
        i = embed_indices(big, (2, 2), 1, [a])[0]
        j = embed_indices(big, (2, 2), 2, [b])[0]
        s = big.join_indices([i], [j])[0]
        assert total.ranks[s] == u12.ranks[a] + u12.ranks[b]


def _embed_all(big, split, side, idx):
    return set(embed_indices(big, split, side, idx).tolist()) if len(idx) else set()


def _sums(big, split, a_idx, b_idx):
    pairs = list(itertools.product(a_idx, b_idx))
    if not pairs:
        return set()
    a = embed_indices(big, split, 1, [x for x, _ in pairs])
    b = embed_indices(big, split, 2, [y for _, y in pairs])
    return set(big.join_indices(a, b).tolist())


@pytest.mark.parametrize("i,j", list(itertools.product(range(6), repeat=2)))
def test_sum_containments_2_2(i, j):
    m1, m2 = _all_on(2)[i], _all_on(2)[j]
    ds = compute_direct_sum(m1, m2)
    total = ds.matroid
    big = total.lattice
    split = (2, 2)
    idx = lambda mask: np.flatnonzero(mask).tolist()  # noqa: E731
    assert _sums(big, split, idx(m1.independent_mask()), idx(m2.independent_mask())) <= set(idx(total.independent_mask()))
    assert _sums(big, split, idx(m1.flat_mask()), idx(m2.flat_mask())) <= set(idx(total.flat_mask()))
    assert _sums(big, split, idx(m1.open_mask()), idx(m2.open_mask())) <= set(idx(total.open_mask()))
    circ = set(idx(total.circuit_mask()))
    assert _embed_all(big, split, 1, idx(m1.circuit_mask())) <= circ
    assert _embed_all(big, split, 2, idx(m2.circuit_mask())) <= circ
    z1 = idx(m1.flat_mask() & m1.open_mask())
    z2 = idx(m2.flat_mask() & m2.open_mask())
    assert _sums(big, split, z1, z2) == set(idx(total.flat_mask() & total.open_mask()))
    # dependence: V dependent iff some member of X lies below V
    dependent = total.ranks < big.dims
    assert np.array_equal(dependent, ds.mu < 0)
    for v in big:
        below = subspaces_below(v)
        assert dependent[v.index] == bool(ds.x_mask()[below].any())
    assert np.array_equal(ds.circuit_mask(), total.circuit_mask())
    assert not total.check_axioms()


def test_free_plus_free_is_free():
    a = QMatroid.uniform(2, get_lattice(2, 2))
    b = QMatroid.uniform(1, get_lattice(2, 1))
    ds = compute_direct_sum(a, b)
    assert not ds.x_mask().any() and not ds.circuits()
    assert ds.matroid == QMatroid.uniform(3, get_lattice(2, 3))


def test_loop_summand_is_padded_lift(m1):
    zero = QMatroid.uniform(0, get_lattice(2, 1))
    padded = QMatroid.from_matrix(Matrix.from_text(GF4, "1,2,0,3,0;0,0,1,2,0"))
    assert direct_sum(m1, zero) == padded
    ctx = DirectSumContext.for_summands(m1, zero)
    assert lift_with_loops(m1, 1, ctx) == padded


def test_free_summand_represented(m1):
    free = QMatroid.uniform(1, get_lattice(2, 1))
    g = Matrix.from_text(GF4, "1,0,0,0,0;0,1,2,0,3;0,0,0,1,2")
    total = direct_sum(free, m1)
    assert total.lattice.size == 374
    assert QMatroid.from_matrix(g) == total
    assert not total.check_axioms()


def test_ds_circuits_helpers(u12):
    ctx = DirectSumContext.for_summands(u12, u12)
    assert len(x_set(ctx, u12, u12)) == 18
    assert [c.index for c in ds_circuits(u12, u12)] == [c.index for c in direct_sum(u12, u12).circuits()]


def test_mismatched_summands_rejected(u12):
    other = QMatroid.uniform(1, get_lattice(3, 2))
    with pytest.raises(ValueError):
        compute_direct_sum(u12, other)
    ctx = DirectSumContext.for_summands(u12, u12)
    with pytest.raises(ValueError):
        ctx.lift_table(QMatroid.uniform(1, get_lattice(2, 3)), 1)


@pytest.mark.parametrize("seed", range(2))
def test_dp_oracle_random_sums(seed):
    rng = np.random.default_rng(seed)
    f = make_field(2, 3)
    n1 = int(rng.integers(1, 4))
    n2 = 6 - n1
    m1 = QMatroid.from_matrix(Matrix(f, rng.integers(0, 8, (2, n1))))
    m2 = QMatroid.from_matrix(Matrix(f, rng.integers(0, 8, (2, n2))))
    ds = compute_direct_sum(m1, m2)
    lat = ds.lattice
    small = np.flatnonzero(lat.dims <= 3)
    for i in small:
        assert brute_force_mu(ds, lat[int(i)]) == ds.mu[i]
    for i in rng.choice(np.flatnonzero(lat.dims > 3), 50, replace=False):
        assert brute_force_mu(ds, lat[int(i)]) == ds.mu[i]
    assert not ds.matroid.check_axioms()


@pytest.mark.slow
def test_big_sum_dp_oracle_sample(big_sum):
    lat = big_sum.lattice
    rng = np.random.default_rng(7)
    low = rng.choice(np.flatnonzero(lat.dims <= 3), 300, replace=False)
    high = rng.choice(np.flatnonzero(lat.dims > 3), 200, replace=False)
    for i in np.concatenate([low, high]):
        assert brute_force_mu(big_sum, lat[int(i)]) == big_sum.mu[i]


@pytest.mark.slow
def test_big_sum_structure(big_sum, m1):
    total = big_sum.matroid
    lat = total.lattice
    assert lat.size == 417199
    assert total.rank_of_matroid == 4
    # every 5-space lies in X since tau <= 4 - 5
    assert big_sum.x_mask()[lat.level(5)].all()
    split = (4, 4)
    i1 = embed_indices(lat, split, 1, np.arange(67))
    i2 = embed_indices(lat, split, 2, np.arange(67))
    assert np.array_equal(total.ranks[i1], m1.ranks) and np.array_equal(total.ranks[i2], m1.ranks)
