"""
Rank tables of represented q-matroids
=====================================

A k x n matrix G over GF(q^m) defines a rank function on the subspaces of
GF(q)^n: the rank of rs(Y) is the rank of G Y^T.  We build the table for a
2 x 4 matrix over GF(4) and look at what it contains.
"""

import numpy as np

from qmatroids.algebra import Matrix, make_field
from qmatroids.lattice import get_lattice
from qmatroids.qmatroid import QMatroid

# GF(4) with modulus x^2 + x + 1; the element w (a root) has code 2, w + 1 is 3.
F = make_field(2, 2)
w = F(2)
print(F, "  w*w =", w * w, "  w^3 =", w**3)

# Every subspace of GF(2)^4, grouped by dimension.
L = get_lattice(2, 4)
print(L, "subspaces per dimension:", list(L.counts))

G = Matrix.from_text(F, "1,2,0,3;0,0,1,2")
M = QMatroid.from_matrix(G, L)

# Rank 1 on exactly five planes, min(2, dim) everywhere else: a paving q-matroid.
low = [v for v in L if v.dim == 2 and M[v] == 1]
for v in low:
    print("rank 1 plane:", v.to_text())
print("paving:", M.is_paving(), " rank:", M.rank_of_matroid)

# The Frobenius conjugate (entries squared) has the same row-space ranks.
print("conjugate gives the same q-matroid:", QMatroid.from_matrix(G.frobenius(), L) == M)

# Circuits, flats, open spaces and cyclic flats come straight from the table.
rep = M.structure_report()
for name in ("circuits", "flats", "open", "cyclic_flats"):
    print(f"{name:13s}", len(getattr(rep, name)))

# Every axiom is checked on all covering pairs and all pairs of subspaces.
print("axiom violations:", M.check_axioms())
print(M.to_csv().splitlines()[:4])
