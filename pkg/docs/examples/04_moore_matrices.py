"""
Uniform q-matroids from Moore matrices
======================================

With points a_1..a_n of GF(q^m) independent over GF(q), the k x n matrix
with rows a_j^(q^i) has rank k on every subspace of dimension >= k, so it
represents the uniform q-matroid U_{k,n}.
"""

from qmatroids.algebra import make_field
from qmatroids.lattice import get_lattice
from qmatroids.qmatroid import QMatroid
from qmatroids.representation import moore_matrix, rank_weight

for k, n, m in [(1, 2, 2), (2, 3, 3), (2, 4, 4), (3, 4, 4)]:
    F = make_field(2, m)
    points = [2**j for j in range(n)]  # 1, z, z^2, ...
    G = moore_matrix(points, k, F)
    L = get_lattice(2, n)
    ok = QMatroid.from_matrix(G, L) == QMatroid.uniform(k, L)
    print(f"U_{k},{n} over GF({F.order}): {G.to_text():30s} represents: {ok}")

# Rank weight counts how many GF(2)-independent entries a vector has.
F = make_field(2, 4)
print("rank weight of (1, z, 1+z):", rank_weight([F(1), F(2), F(3)]))
