"""Representability of q-matroids over extensions GF(q^m).

A representation is a matrix G over GF(q^m) with rk(G Y^T) = rho(rs Y) for
every subspace rs Y of GF(q)^n.  Since M_G only depends on the row space of G,
searching over RREF candidates is exhaustive at a fixed degree m.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import __version__
from .algebra import (Field, FieldElement, Matrix, batch_rank, block_diag, enumerate_rref,
                      gauss_binom, kernel, make_field, parse_field)
from .directsum import direct_sum
from .lattice import Subspace, get_lattice
from .qmatroid import QMatroid, matrix_ranks

CANDIDATE_CAP = 10**8
KERNEL_POINT_CAP = 10**6
BATCH = 1 << 17

REPRESENTABLE = "Representable"
NOT_REPRESENTABLE = "NotRepresentableAtDegree"
OBSTRUCTION = "ObstructionFound"
INCONCLUSIVE = "Inconclusive"


class CapExceeded(RuntimeError):
    def __init__(self, needed: int, cap: int, what: str = "candidates"):
        super().__init__(f"{needed} {what} exceed the cap {cap}")
        self.needed, self.cap = needed, cap


@dataclass(frozen=True)
class Disagreement:
    subspace: Subspace
    expected: int
    actual: int

    def to_dict(self) -> dict:
        return {"index": self.subspace.index, "rows": self.subspace.to_text(),
                "expected_rank": self.expected, "matrix_rank": self.actual}


@dataclass
class Certificate:
    """A checkable verdict.  ``revalidate`` re-derives it from scratch."""

    verdict: str
    field: str
    payload: dict = field(default_factory=dict)
    fingerprints: dict = field(default_factory=dict)
    notes: str = ""
    # in-memory evidence used by revalidate(); not serialized
    evidence: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "field": self.field, "payload": self.payload,
                "fingerprints": self.fingerprints, "notes": self.notes,
                "tool_version": __version__}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def revalidate(self, seed: int = 0) -> bool:
        kind = self.evidence.get("kind")
        if kind == "search" and self.verdict != INCONCLUSIVE:
            return _revalidate_search(self, seed)
        if self.verdict == REPRESENTABLE:
            ok, _ = is_representation(self.evidence["matrix"], self.evidence["matroid"])
            return ok
        if self.verdict == OBSTRUCTION:
            return _revalidate_obstruction(self)
        if self.verdict == NOT_REPRESENTABLE and kind == "block_diag":
            return _revalidate_block_diag(self, seed)
        return self.verdict == INCONCLUSIVE


# -- supports and rank weight -------------------------------------------------

def _vector(v) -> tuple[Field, list[int]]:
    if isinstance(v, Matrix):
        if v.rows != 1:
            raise ValueError("expected a row vector")
        return v.field, [int(x) for x in v.array[0]]
    elems = list(v)
    if not elems or not isinstance(elems[0], FieldElement):
        raise ValueError("pass a Matrix row or a sequence of FieldElements")
    return elems[0].field, [e.code for e in elems]


def support(v) -> Subspace:
    """GF(p)-span of the entries of v inside GF(p^m), as a subspace of GF(p)^m."""
    f, codes = _vector(v)
    lat = get_lattice(f.p, f.d)
    rows = [f.coords(c) for c in codes]
    return lat.canonicalize(rows) if rows else lat.zero


def rank_weight(v) -> int:
    f, codes = _vector(v)
    if not codes:
        return 0
    rows = np.array([f.coords(c) for c in codes], dtype=np.int64)
    return int(batch_rank(rows[None], make_field(f.p))[0])


def support_elements(s: Subspace, f: Field) -> list[int]:
    """Codes of the canonical basis of a support subspace."""
    return [f.from_coords(row) for row in s.rows]


# -- MRD generators -------------------------------------------------------------

def moore_matrix(points: Sequence, k: int, f: Field | None = None) -> Matrix:
    """k x n matrix with entries alpha_j^(q^i), q the characteristic of the field."""
    if points and isinstance(points[0], FieldElement):
        f = points[0].field
        points = [e.code for e in points]
    if f is None:
        raise ValueError("field required for integer point codes")
    n = len(points)
    if f.d < n:
        raise ValueError(f"need extension degree m >= n, got m={f.d} < n={n}")
    if not 0 <= k <= n:
        raise ValueError(f"rank {k} out of range 0..{n}")
    pts = Matrix(f, [list(points)])
    if rank_weight(pts) != n:
        raise ValueError("points are linearly dependent over the prime field")
    rows = [[int(f.pow(a, f.p**i)) for a in points] for i in range(k)]
    return Matrix(f, rows, cols=n)


# -- representation check ------------------------------------------------------

def _check_compatible(g: Matrix, m: QMatroid):
    if g.cols != m.n:
        raise ValueError(f"matrix has {g.cols} columns, q-matroid lives on GF({m.q})^{m.n}")
    if g.field.p != m.q:
        raise ValueError(f"matrix over {g.field} cannot represent a q-matroid over GF({m.q})")


def is_representation(g: Matrix, m: QMatroid) -> tuple[bool, Disagreement | None]:
    """Scan dimension by dimension; report the first subspace where ranks differ."""
    _check_compatible(g, m)
    lat = m.lattice
    for k in range(1, lat.n + 1):
        got = matrix_ranks(g, lat.level_bases(k))
        want = m.ranks[lat.level(k)]
        bad = np.flatnonzero(got != want)
        if len(bad):
            i = int(bad[0])
            return False, Disagreement(lat[lat.offsets[k] + i], int(want[i]), int(got[i]))
    return True, None


# -- candidate enumeration and search --------------------------------------------

def _candidate_batches(k: int, n: int, f: Field) -> Iterator[np.ndarray]:
    if k == 0:
        yield np.zeros((1, 1, n), dtype=np.int64)
        return
    for _, stack in enumerate_rref(k, n, f.order):
        for s in range(0, len(stack), BATCH):
            yield stack[s:s + BATCH]


def candidate_count(k: int, n: int, f: Field) -> int:
    return 1 if k == 0 else gauss_binom(n, k, f.order)


def enumerate_candidates(k: int, n: int, f: Field, cap: int = CANDIDATE_CAP) -> Iterator[Matrix]:
    """One full-rank k x n RREF matrix per k-dim row space over f, in pivot-profile order."""
    count = candidate_count(k, n, f)
    if count > cap:
        raise CapExceeded(count, cap)
    for batch in _candidate_batches(k, n, f):
        for g in batch:
            yield Matrix(f, g, cols=n)


def _candidate_at(k: int, n: int, f: Field, index: int) -> np.ndarray:
    seen = 0
    for batch in _candidate_batches(k, n, f):
        if index < seen + len(batch):
            return batch[index - seen]
        seen += len(batch)
    raise IndexError(index)


def _stack_ranks(f: Field, gs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """rk(G B^T) for a stack of candidates G (C, k, n) and one prime-field basis B (d, n)."""
    img = f.sum(f.mul(basis[None, :, None, :], gs[:, None, :, :]), axis=3)
    return batch_rank(img, f)


def _filter_batch(gs: np.ndarray, m: QMatroid, f: Field) -> np.ndarray:
    """First disagreeing subspace index per candidate, -1 for representations."""
    lat = m.lattice
    fail = np.full(len(gs), -1, dtype=np.int64)
    alive = np.arange(len(gs))
    for idx in range(1, lat.size):
        if not len(alive):
            break
        basis = lat.basis_rows(idx).astype(np.int64)
        got = _stack_ranks(f, gs[alive], basis)
        bad = got != m.ranks[idx]
        fail[alive[bad]] = idx
        alive = alive[~bad]
    return fail


def search_representations(m: QMatroid, degree: int, *, f: Field | None = None,
                           cap: int = CANDIDATE_CAP) -> tuple[list[Matrix], Certificate]:
    """Every RREF matrix over GF(q^degree) representing m."""
    f = f or make_field(m.q, degree)
    if f.p != m.q or f.d != degree:
        raise ValueError(f"{f} is not GF({m.q}^{degree})")
    k, n = m.rank_of_matroid, m.n
    count = candidate_count(k, n, f)
    fps = {"matroid": m.fingerprint, "lattice": m.lattice.fingerprint}
    if count > cap:
        return [], Certificate(INCONCLUSIVE, f.spec, {"candidates_needed": count, "cap": cap}, fps,
                               "candidate cap exceeded")
    fails = []
    found: list[Matrix] = []
    for batch in _candidate_batches(k, n, f):
        fail = _filter_batch(batch, m, f)
        fails.append(fail)
        found += [Matrix(f, g, cols=n) for g in batch[fail < 0]]
    fail = np.concatenate(fails)
    payload = {
        "degree": degree,
        "shape": [max(k, 1), n],
        "candidates": int(len(fail)),
        "representations": [g.to_text() for g in found],
        "first_disagreement_histogram": {str(i): c for i, c in
                                         sorted(Counter(fail[fail >= 0].tolist()).items())},
        "first_disagreement_digest": hashlib.sha256(fail.astype("<i8").tobytes()).hexdigest(),
    }
    evidence = {"kind": "search", "matroid": m, "field_obj": f, "fail": fail, "found": found}
    if found:
        cert = Certificate(REPRESENTABLE, f.spec, payload, fps,
                           f"{len(found)} representing RREF matrices over GF({f.order})",
                           evidence | {"matrix": found[0]})
        payload["matrix"] = found[0].to_text()
    else:
        cert = Certificate(NOT_REPRESENTABLE, f.spec, payload, fps,
                           f"exhaustive over all {len(fail)} RREF candidates at degree {degree}; "
                           "other degrees are not covered", evidence)
    return found, cert


def _revalidate_search(cert: Certificate, seed: int) -> bool:
    ev = cert.evidence
    m, f, fail = ev["matroid"], ev["field_obj"], ev["fail"]
    k = m.rank_of_matroid
    if len(fail) != candidate_count(k, m.n, f) or (fail >= 0).sum() != len(fail) - len(ev["found"]):
        return False
    rng = np.random.default_rng(seed)
    discarded = np.flatnonzero(fail >= 0)
    picks = rng.choice(discarded, size=max(1, len(discarded) // 100), replace=False) if len(discarded) else []
    for i in picks:
        g = Matrix(f, _candidate_at(k, m.n, f, int(i)), cols=m.n)
        w = m.lattice[int(fail[i])]
        if matrix_ranks(g, w.rows[None])[0] == m[w]:
            return False
    return all(is_representation(g, m)[0] for g in ev["found"])


# -- the kernel-support obstruction -----------------------------------------------

def _normalize(f: Field, v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(v)
    return f.mul(v, f.inv(int(v[nz[0]]))) if len(nz) else v


def kernel_points(g: Matrix, cap: int = KERNEL_POINT_CAP) -> list[np.ndarray]:
    """Every kernel vector with first nonzero entry 1."""
    f = g.field
    basis = kernel(g)
    r = len(basis)
    if not r:
        return []
    count = (f.order**r - 1) // (f.order - 1)
    if count > cap:
        raise CapExceeded(count, cap, "kernel points")
    kb = np.vstack([b.array[0] for b in basis])
    out = {}
    for coeffs in itertools.product(range(f.order), repeat=r):
        nz = [c for c in coeffs if c]
        if not nz or nz[0] != 1:
            continue
        v = f.sum(f.mul(np.array(coeffs)[:, None], kb), axis=0)
        v = _normalize(f, np.asarray(v, dtype=np.int64))
        out[tuple(int(x) for x in v)] = v
    return list(out.values())


def _order_key(v: np.ndarray):
    # full Hamming support first, then lexicographic codes
    return (-int(np.count_nonzero(v)), tuple(int(x) for x in v))


def coefficient_matrix(v: np.ndarray, alpha_rows: np.ndarray, f: Field) -> np.ndarray:
    """Y over GF(p) with alpha . Y = v, where alpha is the canonical support basis."""
    pivots = [int(np.flatnonzero(r)[0]) for r in alpha_rows]
    coords = np.array([f.coords(int(x)) for x in v], dtype=np.int64)
    return coords[:, pivots].T


def kernel_support_witness(g1: Matrix, g2: Matrix, k: int, *, cap: int = KERNEL_POINT_CAP
                           ) -> tuple[tuple[Matrix, Matrix] | None, Certificate]:
    """Look for v_i in ker G_i of rank weight k with supp(v1) = supp(v2)."""
    if g1.field != g2.field:
        raise ValueError("matrices over different fields")
    f = g1.field
    try:
        pts1, pts2 = kernel_points(g1, cap), kernel_points(g2, cap)
    except CapExceeded as exc:
        return None, Certificate(INCONCLUSIVE, f.spec, {"kernel_points_needed": exc.needed, "cap": cap},
                                 notes="kernel point cap exceeded")
    by_support: dict[int, np.ndarray] = {}
    for v in sorted(pts2, key=_order_key):
        row = Matrix(f, v[None], cols=g2.cols)
        if rank_weight(row) == k:
            by_support.setdefault(support(row).index, v)
    payload = {"G1": g1.to_text(), "G2": g2.to_text(), "k": k,
               "kernel_points": [len(pts1), len(pts2)]}
    for v1 in sorted(pts1, key=_order_key):
        row = Matrix(f, v1[None], cols=g1.cols)
        if rank_weight(row) != k:
            continue
        s = support(row)
        v2 = by_support.get(s.index)
        if v2 is None:
            continue
        alpha_rows = s.rows.astype(np.int64)
        y1 = coefficient_matrix(v1, alpha_rows, f)
        y2 = coefficient_matrix(v2, alpha_rows, f)
        w = np.hstack([y1, y2])
        payload.update({
            "v1": ",".join(map(str, v1)), "v2": ",".join(map(str, v2)),
            "support_basis": support_elements(s, f),
            "W": ";".join(",".join(map(str, r)) for r in w),
        })
        pair = (Matrix(f, v1[None], cols=g1.cols), Matrix(f, v2[None], cols=g2.cols))
        cert = Certificate(OBSTRUCTION, f.spec, payload,
                           notes="diag(G1, G2) does not represent M_G1 (+) M_G2 "
                                 "when both are paving of rank k",
                           evidence={"kind": "obstruction", "g1": g1, "g2": g2, "pair": pair, "k": k})
        return pair, cert
    return None, Certificate(INCONCLUSIVE, f.spec, payload, notes="no kernel-support witness exists")


def _revalidate_obstruction(cert: Certificate) -> bool:
    ev = cert.evidence
    g1, g2, (v1, v2), k = ev["g1"], ev["g2"], ev["pair"], ev["k"]
    zero1 = not (g1 @ v1.T).array.any()
    zero2 = not (g2 @ v2.T).array.any()
    return (zero1 and zero2 and rank_weight(v1) == k == rank_weight(v2)
            and support(v1) == support(v2))


def obstruction_space(cert: Certificate) -> Subspace:
    """W = rs(Y1 | Y2) from an obstruction certificate."""
    f = make_field(parse_field(cert.field).p)
    w = Matrix(f, [[int(x) for x in r.split(",")] for r in cert.payload["W"].split(";")])
    return get_lattice(f.p, w.cols).canonicalize(w)


# -- block-diagonal test ---------------------------------------------------------

def block_diag_test(m1: QMatroid, m2: QMatroid, degree: int, *,
                    cap: int = CANDIDATE_CAP) -> Certificate:
    """Decide representability of m1 (+) m2 over GF(q^degree) via block-diagonal candidates."""
    f = make_field(m1.q, degree)
    r1, c1 = search_representations(m1, degree, f=f, cap=cap)
    r2, c2 = search_representations(m2, degree, f=f, cap=cap)
    fps = {"summand1": m1.fingerprint, "summand2": m2.fingerprint}
    if INCONCLUSIVE in (c1.verdict, c2.verdict):
        return Certificate(INCONCLUSIVE, f.spec, {"summand_searches": [c1.to_dict(), c2.to_dict()]},
                           fps, "summand search exceeded its cap")
    total = direct_sum(m1, m2)
    fps["sum"] = total.fingerprint
    payload = {"degree": degree,
               "summand_representations": [[g.to_text() for g in r1], [g.to_text() for g in r2]]}
    if not r1 or not r2:
        payload["reason"] = "a summand has no representation at this degree"
        payload["summand_searches"] = [c1.to_dict(), c2.to_dict()]
        return Certificate(NOT_REPRESENTABLE, f.spec, payload, fps,
                           "a representable direct sum forces representable summands",
                           {"kind": "block_diag", "pairs": [], "sum": total,
                            "searches": (c1, c2)})
    tried = []
    for a, b in itertools.product(r1, r2):
        g = block_diag(a, b)
        ok, why = is_representation(g, total)
        if ok:
            payload.update({"matrix": g.to_text(), "pairs_tried": len(tried) + 1})
            return Certificate(REPRESENTABLE, f.spec, payload, fps,
                               "block-diagonal representation of the direct sum",
                               {"kind": "block_diag", "matrix": g, "matroid": total})
        tried.append((a, b, why))
    payload["pairs_tried"] = len(tried)
    payload["failures"] = [{"A": a.to_text(), "B": b.to_text(), **why.to_dict()} for a, b, why in tried]
    return Certificate(NOT_REPRESENTABLE, f.spec, payload, fps,
                       f"all {len(tried)} block-diagonal pairs fail at degree {degree}; "
                       "other degrees are not covered",
                       {"kind": "block_diag", "pairs": tried, "sum": total, "searches": (c1, c2)})


def _revalidate_block_diag(cert: Certificate, seed: int) -> bool:
    ev = cert.evidence
    total = ev["sum"]
    c1, c2 = ev["searches"]
    if not ev["pairs"]:
        return any(c.verdict == NOT_REPRESENTABLE and c.revalidate(seed) for c in (c1, c2))
    if not (c1.revalidate(seed) and c2.revalidate(seed)):
        return False
    expected = len(c1.evidence["found"]) * len(c2.evidence["found"])
    if len(ev["pairs"]) != expected:
        return False
    for a, b, why in ev["pairs"]:
        g = block_diag(a, b)
        if matrix_ranks(g, why.subspace.rows[None])[0] == total[why.subspace]:
            return False
    return True
