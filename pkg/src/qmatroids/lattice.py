"""The subspace lattice of GF(q)^n, fully enumerated and densely indexed.

Subspaces are indexed dimension-major, then lexicographically by their RREF
rows (column 0 most significant).  Lookups go through a batched RREF and a
binary search over per-dimension sorted keys, so whole levels can be mapped
at once.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from typing import Iterator, Sequence

import numpy as np

from .algebra import Field, Matrix, batch_rref, enumerate_rref, gauss_binom, kernel, make_field

DEFAULT_CAP = 2**23
CHUNK = 1 << 16


class LatticeCapError(ValueError):
    def __init__(self, needed: int, cap: int):
        super().__init__(f"lattice needs {needed} subspaces, cap is {cap}")
        self.needed = needed
        self.cap = cap


def lattice_size(q: int, n: int) -> int:
    return sum(gauss_binom(n, k, q) for k in range(n + 1))


class Lattice:
    """All subspaces of GF(q)^n for a prime q."""

    def __init__(self, q: int, n: int, cap: int = DEFAULT_CAP):
        field = make_field(q)
        size = lattice_size(q, n)
        if size > cap:
            raise LatticeCapError(size, cap)
        self.q, self.n, self.field = q, n, field
        self.counts = [gauss_binom(n, k, q) for k in range(n + 1)]
        self.offsets = np.concatenate([[0], np.cumsum(self.counts)]).astype(np.int64)
        self.size = size
        self._wide = [math.log2(q) * k * n > 64 for k in range(n + 1)]
        self._bases: list[np.ndarray] = []
        self._keys: list[np.ndarray] = []
        for k in range(n + 1):
            stacks = [s for _, s in enumerate_rref(k, n, q)]
            bases = np.concatenate(stacks).astype(np.uint8) if stacks else np.zeros((1, 0, n), np.uint8)
            keys = self._level_keys(k, bases)
            order = np.argsort(keys, kind="stable")
            self._bases.append(bases[order])
            self._keys.append(keys[order])
            assert len(bases) == self.counts[k]
        self.dims = np.repeat(np.arange(n + 1), self.counts).astype(np.int64)
        self._padded: np.ndarray | None = None
        self._perp: np.ndarray | None = None
        self._hyper: dict[int, np.ndarray] = {}

    # -- keys and lookup ------------------------------------------------------

    def _level_keys(self, k: int, bases: np.ndarray) -> np.ndarray:
        flat = bases.reshape(len(bases), k * self.n)
        if self._wide[k]:
            keys = np.zeros(len(bases), dtype=object)
            for j in range(flat.shape[1]):
                keys = keys * self.q + flat[:, j].astype(object)
            return keys
        keys = np.zeros(len(bases), dtype=np.uint64)
        q = np.uint64(self.q)
        for j in range(flat.shape[1]):
            keys = keys * q + flat[:, j].astype(np.uint64)
        return keys

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the row spaces of a stack of shape (N, r, n)."""
        rows = np.asarray(rows)
        out = np.empty(len(rows), dtype=np.int64)
        for start in range(0, len(rows), CHUNK):
            block = rows[start:start + CHUNK]
            reduced, ranks = batch_rref(block, self.field)
            res = out[start:start + CHUNK]
            for k in np.unique(ranks):
                k = int(k)
                sel = np.flatnonzero(ranks == k)
                keys = self._level_keys(k, reduced[sel, :k, :])
                pos = np.searchsorted(self._keys[k], keys)
                res[sel] = self.offsets[k] + pos
        return out

    # -- handles ---------------------------------------------------------------

    def __len__(self):
        return self.size

    def __iter__(self) -> Iterator[Subspace]:
        return (Subspace(self, i) for i in range(self.size))

    def __getitem__(self, index: int) -> Subspace:
        index = int(index)
        if not 0 <= index < self.size:
            raise IndexError(index)
        return Subspace(self, index)

    def __repr__(self):
        return f"Lattice(q={self.q}, n={self.n}, size={self.size})"

    @property
    def fingerprint(self) -> dict:
        return {"q": self.q, "n": self.n, "count": self.size}

    def level(self, k: int) -> range:
        return range(int(self.offsets[k]), int(self.offsets[k + 1]))

    def level_bases(self, k: int) -> np.ndarray:
        return self._bases[k]

    def basis_rows(self, index: int) -> np.ndarray:
        k = int(self.dims[index])
        return self._bases[k][index - self.offsets[k]]

    @property
    def padded(self) -> np.ndarray:
        """Every basis padded with zero rows to shape (size, n, n)."""
        if self._padded is None:
            pad = np.zeros((self.size, self.n, self.n), dtype=np.uint8)
            for k in range(1, self.n + 1):
                pad[self.offsets[k]:self.offsets[k + 1], :k] = self._bases[k]
            self._padded = pad
        return self._padded

    @property
    def zero(self) -> Subspace:
        return Subspace(self, 0)

    @property
    def full(self) -> Subspace:
        return Subspace(self, self.size - 1)

    def canonicalize(self, y) -> Subspace:
        """Handle of the row space of a matrix (Matrix or nested sequence of codes)."""
        arr = y.array if isinstance(y, Matrix) else np.asarray(y, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else np.zeros((0, self.n), np.int64)
        if arr.shape[1] != self.n:
            raise ValueError(f"expected {self.n} columns, got {arr.shape[1]}")
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"entries out of range for GF({self.q})")
        if arr.shape[0] == 0:
            return self.zero
        return Subspace(self, int(self.lookup(arr[None])[0]))

    # -- lattice operations on index arrays ------------------------------------

    def join_indices(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        out = np.empty(len(a), dtype=np.int64)
        pad = self.padded
        for s in range(0, len(a), CHUNK):
            stack = np.concatenate([pad[a[s:s + CHUNK]], pad[b[s:s + CHUNK]]], axis=1)
            out[s:s + CHUNK] = self.lookup(stack)
        return out

    @property
    def perp(self) -> np.ndarray:
        """Index of the orthogonal complement under the standard bilinear form."""
        if self._perp is None:
            perp = np.empty(self.size, dtype=np.int64)
            for k in range(self.n + 1):
                perp[self.level(k)] = self._complements(k)
            self._perp = perp
        return self._perp

    def _complements(self, k: int) -> np.ndarray:
        n, q = self.n, self.q
        bases = self._bases[k].astype(np.int64)
        m = len(bases)
        if k == 0:
            return np.full(m, self.size - 1)
        if k == n:
            return np.zeros(m, dtype=np.int64)
        pivots = (bases != 0).argmax(axis=2)
        is_piv = np.zeros((m, n), dtype=bool)
        is_piv[np.arange(m)[:, None], pivots] = True
        free = np.nonzero(~is_piv)[1].reshape(m, n - k)
        comp = np.zeros((m, n - k, n), dtype=np.int64)
        ar = np.arange(m)
        for t in range(n - k):
            comp[ar, t, free[:, t]] = 1
            for i in range(k):
                comp[ar, t, pivots[:, i]] = (-bases[ar, i, free[:, t]]) % q
        return self.lookup(comp)

    def meet_indices(self, a, b) -> np.ndarray:
        perp = self.perp
        return perp[self.join_indices(perp[np.asarray(a)], perp[np.asarray(b)])]

    def hyperplanes(self, k: int) -> np.ndarray:
        """Table of shape (count_k, (q^k-1)/(q-1)): hyperplane indices of each k-space."""
        if k < 1:
            raise ValueError("the zero space has no hyperplanes")
        if k not in self._hyper:
            self._hyper[k] = self._hyperplanes_of(self._bases[k])
        return self._hyper[k]

    def _hyperplanes_of(self, bases: np.ndarray) -> np.ndarray:
        m, k, n = bases.shape
        maps = functional_kernels(self.field, k)
        out = np.empty((m, len(maps)), dtype=np.int64)
        b = bases.astype(np.int64)
        for j, kmat in enumerate(maps):
            rows = np.einsum("ij,mjc->mic", kmat, b) % self.q
            out[:, j] = self.lookup(rows)
        return out

    def covers_below(self, v: Subspace) -> Iterator[Subspace]:
        if v.dim < 1:
            raise ValueError("the zero space has no hyperplanes")
        table = self._hyper.get(v.dim)
        if table is not None:
            row = table[v.index - self.offsets[v.dim]]
        else:
            row = self._hyperplanes_of(self.basis_rows(v.index)[None])[0]
        return (Subspace(self, int(i)) for i in row)

    def covers_above(self, v: Subspace) -> Iterator[Subspace]:
        k = v.dim
        if k == self.n:
            return iter(())
        table = self.hyperplanes(k + 1)
        hits = np.flatnonzero((table == v.index).any(axis=1)) + self.offsets[k + 1]
        return (Subspace(self, int(i)) for i in hits)

    # -- handle-level operations ------------------------------------------------

    def _check(self, *spaces: Subspace):
        for s in spaces:
            if s.lattice is not self and (s.lattice.q, s.lattice.n) != (self.q, self.n):
                raise ValueError("subspaces from different lattices")

    def sum_spaces(self, v: Subspace, w: Subspace) -> Subspace:
        self._check(v, w)
        return Subspace(self, int(self.join_indices([v.index], [w.index])[0]))

    def intersect(self, v: Subspace, w: Subspace) -> Subspace:
        self._check(v, w)
        rows_v, rows_w = self.basis_rows(v.index), self.basis_rows(w.index)
        if not len(rows_v) or not len(rows_w):
            return self.zero
        # x = a V = b W  <=>  (a | b) is in the left kernel of (V ; -W)
        stacked = Matrix(self.field, np.vstack([rows_v, (-rows_w.astype(np.int64)) % self.q]))
        sol = kernel(stacked.T)
        if not sol:
            return self.zero
        coeffs = np.vstack([s.array[0, : len(rows_v)] for s in sol])
        return self.canonicalize((coeffs @ rows_v.astype(np.int64)) % self.q)

    def contains(self, v: Subspace, w: Subspace) -> bool:
        """True iff w <= v."""
        self._check(v, w)
        return w.dim <= v.dim and self.sum_spaces(v, w).index == v.index

    def to_csv(self, fh=None) -> str | None:
        buf = fh or io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "dim", "rows"])
        for i in range(self.size):
            writer.writerow([i, int(self.dims[i]), rows_text(self.basis_rows(i))])
        return buf.getvalue() if fh is None else None


def rows_text(rows: np.ndarray) -> str:
    return ";".join(",".join(str(int(x)) for x in r) for r in rows)


@functools.lru_cache(maxsize=None)
def functional_kernels(field: Field, k: int) -> tuple[np.ndarray, ...]:
    """Kernel bases ((k-1) x k) of the normalized nonzero functionals on GF(q)^k.

    Functionals are normalized so the first nonzero entry is 1, giving each
    hyperplane exactly once.
    """
    out = []
    q = field.order
    for f in np.ndindex(*(q,) * k):
        nz = [x for x in f if x]
        if not nz or nz[0] != 1:
            continue
        ker = kernel(Matrix(field, [list(f)]))
        out.append(np.vstack([v.array[0] for v in ker]) if ker else np.zeros((0, k), np.int64))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def get_lattice(q: int, n: int, cap: int = DEFAULT_CAP) -> Lattice:
    return Lattice(q, n, cap)


def build_lattice(q: int, n: int, cap: int = DEFAULT_CAP) -> Lattice:
    return get_lattice(q, n, cap) if lattice_size(q, n) <= cap else Lattice(q, n, cap)


class Subspace:
    """A subspace of GF(q)^n, identified by its dense lattice index."""

    __slots__ = ("lattice", "index")

    def __init__(self, lattice: Lattice, index: int):
        self.lattice = lattice
        self.index = int(index)

    @property
    def dim(self) -> int:
        return int(self.lattice.dims[self.index])

    @property
    def rows(self) -> np.ndarray:
        return self.lattice.basis_rows(self.index)

    @property
    def basis(self) -> Matrix:
        return Matrix(self.lattice.field, self.rows.astype(np.int64), cols=self.lattice.n)

    def to_text(self) -> str:
        return rows_text(self.rows)

    def _same(self, other) -> bool:
        return isinstance(other, Subspace) and (
            other.lattice is self.lattice
            or (other.lattice.q, other.lattice.n) == (self.lattice.q, self.lattice.n))

    def __eq__(self, other):
        return self._same(other) and self.index == other.index

    def __hash__(self):
        return hash((self.lattice.q, self.lattice.n, self.index))

    def __add__(self, other: Subspace) -> Subspace:
        return self.lattice.sum_spaces(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return self.lattice.intersect(self, other)

    def __le__(self, other: Subspace) -> bool:
        return other.lattice.contains(other, self)

    def __lt__(self, other: Subspace) -> bool:
        return self.dim < other.dim and self <= other

    def __repr__(self):
        return f"<{self.to_text() or '0'} | dim {self.dim} #{self.index}>"


def sum_spaces(v: Subspace, w: Subspace) -> Subspace:
    return v.lattice.sum_spaces(v, w)


def intersect(v: Subspace, w: Subspace) -> Subspace:
    return v.lattice.intersect(v, w)


def contains(v: Subspace, w: Subspace) -> bool:
    return v.lattice.contains(v, w)


def canonicalize(y, lattice: Lattice | None = None) -> Subspace:
    if lattice is None:
        if not isinstance(y, Matrix) or y.field.d != 1:
            raise ValueError("pass a lattice or a Matrix over a prime field")
        lattice = get_lattice(y.field.p, y.cols)
    return lattice.canonicalize(y)


def _split_check(lattice: Lattice, split: Sequence[int]):
    n1, n2 = split
    if n1 + n2 != lattice.n or n1 < 0 or n2 < 0:
        raise ValueError(f"split {tuple(split)} does not match ambient dimension {lattice.n}")


def project_indices(lattice: Lattice, split: Sequence[int], side: int) -> np.ndarray:
    """pi_side of every subspace, as indices into the side lattice."""
    _split_check(lattice, split)
    n1, n2 = split
    cols = slice(0, n1) if side == 1 else slice(n1, n1 + n2)
    target = get_lattice(lattice.q, split[side - 1])
    out = np.empty(lattice.size, dtype=np.int64)
    pad = lattice.padded
    for s in range(0, lattice.size, CHUNK):
        out[s:s + CHUNK] = target.lookup(pad[s:s + CHUNK, :, cols])
    return out


def project(v: Subspace, split: Sequence[int], side: int) -> Subspace:
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    _split_check(v.lattice, split)
    n1 = split[0]
    rows = v.rows[:, :n1] if side == 1 else v.rows[:, n1:]
    target = get_lattice(v.lattice.q, split[side - 1])
    if not len(rows):
        return target.zero
    return target.canonicalize(rows)


def embed_direct_sum(v1: Subspace, v2: Subspace) -> Subspace:
    """V1 (+) V2 inside GF(q)^(n1+n2)."""
    q = v1.lattice.q
    if v2.lattice.q != q:
        raise ValueError("summands over different fields")
    n1, n2 = v1.lattice.n, v2.lattice.n
    big = get_lattice(q, n1 + n2)
    rows = np.zeros((v1.dim + v2.dim, n1 + n2), dtype=np.int64)
    rows[: v1.dim, :n1] = v1.rows
    rows[v1.dim:, n1:] = v2.rows
    return big.canonicalize(rows) if len(rows) else big.zero


def embed_indices(big: Lattice, split: Sequence[int], side: int, indices) -> np.ndarray:
    """Indices of V (+) 0 (side 1) or 0 (+) V (side 2) for side-lattice indices."""
    n1, n2 = split
    small = get_lattice(big.q, split[side - 1])
    pad = small.padded[np.asarray(indices, dtype=np.int64)]
    rows = np.zeros((len(pad), small.n, n1 + n2), dtype=np.uint8)
    if side == 1:
        rows[:, :, :n1] = pad
    else:
        rows[:, :, n1:] = pad
    return big.lookup(rows)
