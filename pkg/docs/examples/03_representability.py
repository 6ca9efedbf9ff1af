"""
Searching for representations
=============================

Two matrices with the same row space give the same q-matroid, so an
exhaustive search at a fixed degree m only needs one RREF matrix per row
space.  Each run returns the representations found and a certificate.
"""

import json

from qmatroids.algebra import Matrix, make_field
from qmatroids.lattice import get_lattice
from qmatroids.qmatroid import QMatroid
from qmatroids.representation import (block_diag_test, kernel_support_witness,
                                      obstruction_space, search_representations)

F = make_field(2, 2)
G1 = Matrix.from_text(F, "1,2,0,3;0,0,1,2")
G1h = Matrix.from_text(F, "1,3,0,2;0,0,1,3")
M1 = QMatroid.from_matrix(G1)

for m in (1, 2, 3):
    found, cert = search_representations(M1, m)
    print(f"m={m}: {cert.payload['candidates']:5d} candidates, {cert.verdict}",
          [g.to_text() for g in found])

# The certificate re-derives itself: representations are re-checked and a 1%
# sample of rejected candidates is re-tested against its recorded witness.
print("revalidates:", cert.revalidate(seed=1))

# Block-diagonal candidates for M1 (+) M1 at degree 2: all four pairs fail.
cert = block_diag_test(M1, M1, 2)
print(cert.verdict, cert.payload["pairs_tried"], "pairs")
print(json.dumps(cert.payload["failures"][0], indent=1))

# Why: the two kernels contain vectors of rank weight 2 with the same support.
pair, cert = kernel_support_witness(G1, G1h, 2)
print("v1 =", pair[0].to_text(), " v2 =", pair[1].to_text(), " support basis:", cert.payload["support_basis"])
W = obstruction_space(cert)
print("W =", W.to_text())

# The same question for two copies of U_{1,2}: the answer flips at degree 4.
U = QMatroid.uniform(1, get_lattice(2, 2))
for m in (2, 3, 4):
    cert = block_diag_test(U, U, m)
    print(f"U12 (+) U12, m={m}: {cert.verdict}", cert.payload.get("matrix", ""))
