"""
Direct sums
===========

For q-matroids M1 on GF(q)^n1 and M2 on GF(q)^n2 the direct sum lives on
GF(q)^(n1+n2).  Its rank is dim V plus the most negative deficiency
rho1(pi1 X) + rho2(pi2 X) - dim X over the subspaces X of V, which a
dynamic program fills in one dimension at a time.
"""

import numpy as np

from qmatroids.directsum import brute_force_mu, compute_direct_sum
from qmatroids.lattice import get_lattice
from qmatroids.qmatroid import QMatroid

U = QMatroid.uniform(1, get_lattice(2, 2))
ds = compute_direct_sum(U, U)
M = ds.matroid
L = M.lattice

# Every line has rank 1; among the 35 planes only <e1,e2> and <e3,e4> drop to rank 1.
planes = [v for v in L if v.dim == 2 and M[v] == 1]
print("rank-1 planes:", [v.to_text() for v in planes])
print("rank of the sum:", M.rank_of_matroid)

# The spaces with negative deficiency, and their minimal members (the circuits).
print("|X| =", len(ds.x_set()), "  circuits:", len(ds.circuits()))
print("dims of circuits:", np.bincount(L.dims[ds.circuit_mask()]).tolist())

# The DP agrees with the definition on every subspace.
print("DP == definition:", all(brute_force_mu(ds, v) == ds.mu[v.index] for v in L))

# Adding a free summand keeps representability: diag(1, G) represents U_{1,1} (+) M_G.
from qmatroids.algebra import Matrix, block_diag, make_field
from qmatroids.directsum import direct_sum

F = make_field(2, 2)
G = Matrix.from_text(F, "1,2,0,3;0,0,1,2")
MG = QMatroid.from_matrix(G)
free = QMatroid.uniform(1, get_lattice(2, 1))
big = QMatroid.from_matrix(block_diag(Matrix.identity(F, 1), G))
print("diag(1, G) represents the sum:", big == direct_sum(free, MG), "on", big.lattice.size, "subspaces")
