"""Direct sums of q-matroids.

For a split GF(q)^n = GF(q)^n1 (+) GF(q)^n2 the lifted ranks are
rho'_i(V) = rho_i(pi_i(V)).  With the deficiency

    tau(X) = rho'_1(X) + rho'_2(X) - dim X

the sum has rank rho(V) = dim V + mu(V), where mu(V) = min(0, min_{X <= V} tau(X)).
mu is filled dimension by dimension from the hyperplanes of V, since every
proper subspace of V sits inside one of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import enumerate_rref
from .lattice import Lattice, Subspace, get_lattice, project_indices
from .qmatroid import QMatroid


class DirectSumContext:
    """Split (n1, n2) with cached projections onto both sides."""

    def __init__(self, q: int, n1: int, n2: int):
        self.q = q
        self.split = (n1, n2)
        self.side_lattices = (get_lattice(q, n1), get_lattice(q, n2))
        self.lattice = get_lattice(q, n1 + n2)
        self.projections = (project_indices(self.lattice, self.split, 1),
                            project_indices(self.lattice, self.split, 2))

    @classmethod
    def for_summands(cls, m1: QMatroid, m2: QMatroid) -> DirectSumContext:
        if m1.q != m2.q:
            raise ValueError("summands over different base fields")
        return _context(m1.q, m1.n, m2.n)

    def lift_table(self, m: QMatroid, side: int) -> np.ndarray:
        if side not in (1, 2):
            raise ValueError("side must be 1 or 2")
        if (m.q, m.n) != (self.q, self.split[side - 1]):
            raise ValueError(f"q-matroid on GF({m.q})^{m.n} does not fit side {side} of {self.split}")
        return m.ranks[self.projections[side - 1]]


_CONTEXTS: dict[tuple[int, int, int], DirectSumContext] = {}


def _context(q: int, n1: int, n2: int) -> DirectSumContext:
    key = (q, n1, n2)
    if key not in _CONTEXTS:
        _CONTEXTS[key] = DirectSumContext(q, n1, n2)
    return _CONTEXTS[key]


def lift_with_loops(m: QMatroid, side: int, ctx: DirectSumContext) -> QMatroid:
    """Extend m to the big space by adding the other summand as a loop space."""
    return QMatroid(ctx.lattice, ctx.lift_table(m, side))


@dataclass
class DirectSum:
    m1: QMatroid
    m2: QMatroid
    ctx: DirectSumContext
    lifted1: np.ndarray
    lifted2: np.ndarray
    tau: np.ndarray
    mu: np.ndarray

    @property
    def lattice(self) -> Lattice:
        return self.ctx.lattice

    @property
    def matroid(self) -> QMatroid:
        if not hasattr(self, "_matroid"):
            self._matroid = QMatroid(self.lattice, self.lattice.dims + self.mu)
        return self._matroid

    def x_mask(self) -> np.ndarray:
        return self.tau < 0

    def x_set(self) -> list[Subspace]:
        return [self.lattice[int(i)] for i in np.flatnonzero(self.x_mask())]

    def circuit_mask(self) -> np.ndarray:
        """Inclusion-minimal members of X: tau < 0 and nothing of X strictly below."""
        lat = self.lattice
        mask = self.x_mask().copy()
        for k in range(1, lat.n + 1):
            rng = lat.level(k)
            below = self.mu[lat.hyperplanes(k)].min(axis=1)
            mask[rng] &= below == 0
        return mask

    def circuits(self) -> list[Subspace]:
        return [self.lattice[int(i)] for i in np.flatnonzero(self.circuit_mask())]


def compute_direct_sum(m1: QMatroid, m2: QMatroid, ctx: DirectSumContext | None = None) -> DirectSum:
    ctx = ctx or DirectSumContext.for_summands(m1, m2)
    lat = ctx.lattice
    l1, l2 = ctx.lift_table(m1, 1), ctx.lift_table(m2, 2)
    tau = l1 + l2 - lat.dims
    mu = np.zeros(lat.size, dtype=np.int64)
    mu[0] = min(0, int(tau[0]))
    for k in range(1, lat.n + 1):
        rng = lat.level(k)
        below = mu[lat.hyperplanes(k)].min(axis=1)
        mu[rng] = np.minimum(np.minimum(tau[rng], below), 0)
    for arr in (l1, l2, tau, mu):
        arr.flags.writeable = False
    return DirectSum(m1, m2, ctx, l1, l2, tau, mu)


def direct_sum(m1: QMatroid, m2: QMatroid, ctx: DirectSumContext | None = None) -> QMatroid:
    return compute_direct_sum(m1, m2, ctx).matroid


def x_set(ctx: DirectSumContext, m1: QMatroid, m2: QMatroid) -> list[Subspace]:
    return compute_direct_sum(m1, m2, ctx).x_set()


def ds_circuits(m1: QMatroid, m2: QMatroid, ctx: DirectSumContext | None = None) -> list[Subspace]:
    return compute_direct_sum(m1, m2, ctx).circuits()


def subspaces_below(v: Subspace) -> np.ndarray:
    """Indices of every subspace of V, by explicit enumeration of coordinate subspaces."""
    lat = v.lattice
    basis = v.rows.astype(np.int64)
    d = v.dim
    found = [np.array([0], dtype=np.int64)]
    for k in range(1, d + 1):
        for _, coeffs in enumerate_rref(k, d, lat.q):
            rows = np.einsum("mkd,dn->mkn", coeffs, basis) % lat.q
            found.append(lat.lookup(rows))
    return np.unique(np.concatenate(found))


def brute_force_mu(ds: DirectSum, v: Subspace) -> int:
    """min(0, min over all X <= V of tau(X)), straight from the definition."""
    return min(0, int(ds.tau[subspaces_below(v)].min()))
