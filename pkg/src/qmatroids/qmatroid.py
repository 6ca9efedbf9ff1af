"""q-matroids as materialized rank tables over a subspace lattice."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import Field, Matrix, batch_rank
from .lattice import Lattice, Subspace, get_lattice

DEFAULT_SEED = 0xC0FFEE
EXHAUSTIVE_LIMIT = 10**4
SAMPLED_PAIRS = 10**6
PAIR_CHUNK = 1 << 18


class AxiomError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    axiom: str
    witnesses: tuple[int, ...]
    detail: str

    def __str__(self):
        return f"{self.axiom} at {self.witnesses}: {self.detail}"


def matrix_ranks(g: Matrix, bases: np.ndarray) -> np.ndarray:
    """rk(G B^T) for a stack of prime-field bases B of shape (N, d, n)."""
    f = g.field
    m, d, n = bases.shape
    if d == 0 or g.rows == 0:
        return np.zeros(m, dtype=np.int64)
    out = np.empty(m, dtype=np.int64)
    ga = g.array
    for s in range(0, m, PAIR_CHUNK):
        b = bases[s:s + PAIR_CHUNK].astype(np.int64)
        # image of each basis row: sum_j b_j * (column j of G), shape (N, d, k)
        img = f.sum(f.mul(b[:, :, :, None], ga.T[None, None, :, :]), axis=2)
        out[s:s + PAIR_CHUNK] = batch_rank(img, f)
    return out


def check_axioms(lattice: Lattice, table, *, seed: int = DEFAULT_SEED,
                 samples: int = SAMPLED_PAIRS, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                 max_violations: int = 100) -> list[Violation]:
    """Check (R1) everywhere, (R2) on covering pairs and (R3) on pairs of subspaces.

    (R3) runs over all unordered pairs when the lattice has at most
    ``exhaustive_limit`` subspaces, otherwise over ``samples`` seeded random pairs.
    """
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (lattice.size,):
        raise ValueError(f"rank table has length {len(table)}, lattice has {lattice.size}")
    out: list[Violation] = []
    dims = lattice.dims

    bad = np.flatnonzero((table < 0) | (table > dims))
    out += [Violation("R1", (int(i),), f"rank {table[i]} outside [0, {dims[i]}]")
            for i in bad[:max_violations]]

    for k in range(1, lattice.n + 1):
        if len(out) >= max_violations:
            return out
        hyp = lattice.hyperplanes(k)
        upper = table[lattice.level(k)]
        hit = np.argwhere(table[hyp] > upper[:, None])
        for row, col in hit[: max_violations - len(out)]:
            v = int(lattice.offsets[k] + row)
            w = int(hyp[row, col])
            out.append(Violation("R2", (w, v), f"rank {table[w]} on {w} > rank {table[v]} on cover {v}"))

    for a, b in _pairs(lattice.size, seed, samples, exhaustive_limit):
        if len(out) >= max_violations:
            break
        join = lattice.join_indices(a, b)
        meet = lattice.meet_indices(a, b)
        fail = np.flatnonzero(table[join] + table[meet] > table[a] + table[b])
        for i in fail[: max_violations - len(out)]:
            out.append(Violation(
                "R3", (int(a[i]), int(b[i])),
                f"rho(V+W)+rho(V^W) = {table[join[i]]}+{table[meet[i]]} > {table[a[i]]}+{table[b[i]]}"))
    return out


def _pairs(size: int, seed: int, samples: int, exhaustive_limit: int):
    if size <= exhaustive_limit:
        a_all, b_all = np.triu_indices(size, k=1)
        for s in range(0, len(a_all), PAIR_CHUNK):
            yield a_all[s:s + PAIR_CHUNK], b_all[s:s + PAIR_CHUNK]
        return
    rng = np.random.default_rng(seed)
    left = samples
    while left > 0:
        m = min(left, PAIR_CHUNK)
        yield rng.integers(0, size, m), rng.integers(0, size, m)
        left -= m


class QMatroid:
    """A q-matroid on GF(q)^n given by its complete rank table."""

    def __init__(self, lattice: Lattice, table, *, validate: bool = False):
        table = np.array(table, dtype=np.int64)
        if table.shape != (lattice.size,):
            raise ValueError(f"rank table has length {len(table)}, lattice has {lattice.size}")
        if validate:
            bad = check_axioms(lattice, table)
            if bad:
                raise AxiomError(f"{len(bad)} axiom violations, first: {bad[0]}")
        table.flags.writeable = False
        self.lattice = lattice
        self.ranks = table
        self._cache: dict = {}

    # -- constructors -----------------------------------------------------------

    @classmethod
    def from_matrix(cls, g: Matrix, lattice: Lattice | None = None) -> QMatroid:
        """The q-matroid represented by G: rho(rs Y) = rk(G Y^T)."""
        f = g.field
        if lattice is None:
            lattice = get_lattice(f.p, g.cols)
        if g.cols != lattice.n:
            raise ValueError(f"matrix has {g.cols} columns, ground space has dimension {lattice.n}")
        if f.p != lattice.q:
            raise ValueError(f"matrix over {f} cannot represent a q-matroid over GF({lattice.q})")
        table = np.zeros(lattice.size, dtype=np.int64)
        for k in range(1, lattice.n + 1):
            table[lattice.level(k)] = matrix_ranks(g, lattice.level_bases(k))
        return cls(lattice, table)

    @classmethod
    def uniform(cls, k: int, lattice: Lattice) -> QMatroid:
        if not 0 <= k <= lattice.n:
            raise ValueError(f"uniform rank {k} out of range 0..{lattice.n}")
        return cls(lattice, np.minimum(lattice.dims, k))

    @classmethod
    def paving_from_family(cls, family: Sequence[Subspace], k: int, lattice: Lattice) -> QMatroid:
        """Rank k-1 on the family members, min(k, dim) elsewhere."""
        if not 1 <= k < lattice.n:
            raise ValueError(f"paving rank {k} must satisfy 1 <= k < {lattice.n}")
        for s in family:
            if s.dim != k:
                raise ValueError(f"family member {s} has dimension {s.dim}, expected {k}")
        family = list(dict.fromkeys(family))
        for i, x in enumerate(family):
            for y in family[i + 1:]:
                if (x & y).dim > k - 2:
                    raise ValueError(f"family members {x} and {y} meet in dimension > {k - 2}")
        table = np.minimum(lattice.dims, k)
        table[[s.index for s in family]] = k - 1
        return cls(lattice, table)

    # -- basic queries ---------------------------------------------------------

    def __getitem__(self, v) -> int:
        return int(self.ranks[v.index if isinstance(v, Subspace) else v])

    def rank(self, v) -> int:
        return self[v]

    @property
    def rank_of_matroid(self) -> int:
        return int(self.ranks[-1])

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def q(self) -> int:
        return self.lattice.q

    def __repr__(self):
        return f"QMatroid(q={self.q}, n={self.n}, rank={self.rank_of_matroid})"

    def check_axioms(self, **kw) -> list[Violation]:
        return check_axioms(self.lattice, self.ranks, **kw)

    def equals(self, other: QMatroid) -> tuple[bool, tuple[Subspace, int, int] | None]:
        """Compare rank tables; on mismatch return the first disagreeing subspace and both ranks."""
        if (other.lattice.q, other.lattice.n) != (self.q, self.n):
            raise ValueError("q-matroids on different lattices")
        diff = np.flatnonzero(self.ranks != other.ranks)
        if not len(diff):
            return True, None
        i = int(diff[0])
        return False, (self.lattice[i], int(self.ranks[i]), int(other.ranks[i]))

    def __eq__(self, other):
        return isinstance(other, QMatroid) and self.equals(other)[0]

    __hash__ = None

    @property
    def fingerprint(self) -> str:
        h = hashlib.sha256(f"{self.q}:{self.n}:".encode())
        h.update(self.ranks.astype("<i8").tobytes())
        return h.hexdigest()[:16]

    # -- structures ------------------------------------------------------------

    def _handles(self, mask: np.ndarray) -> list[Subspace]:
        return [self.lattice[int(i)] for i in np.flatnonzero(mask)]

    def independent_mask(self) -> np.ndarray:
        return self.ranks == self.lattice.dims

    def circuit_mask(self) -> np.ndarray:
        if "circuits" not in self._cache:
            lat = self.lattice
            indep = self.independent_mask()
            mask = np.zeros(lat.size, dtype=bool)
            for k in range(1, lat.n + 1):
                rng = lat.level(k)
                below_ok = indep[lat.hyperplanes(k)].all(axis=1)
                mask[rng] = ~indep[rng] & below_ok
            self._cache["circuits"] = mask
        return self._cache["circuits"]

    def flat_mask(self) -> np.ndarray:
        if "flats" not in self._cache:
            lat = self.lattice
            flat = np.ones(lat.size, dtype=bool)
            for k in range(1, lat.n + 1):
                hyp = lat.hyperplanes(k)
                same = self.ranks[hyp] == self.ranks[lat.level(k)][:, None]
                flat[hyp[same]] = False
            self._cache["flats"] = flat
        return self._cache["flats"]

    def circuit_closure(self) -> np.ndarray:
        """For every V, the index of the sum of all circuits contained in V."""
        if "joins" not in self._cache:
            lat = self.lattice
            circ = self.circuit_mask()
            join = np.zeros(lat.size, dtype=np.int64)
            for k in range(1, lat.n + 1):
                rng = np.arange(lat.offsets[k], lat.offsets[k + 1])
                hyp = lat.hyperplanes(k)
                sub = join[hyp]
                level = np.empty(len(rng), dtype=np.int64)
                is_c = circ[rng]
                level[is_c] = rng[is_c]
                # two distinct hyperplanes that are their own closure already span V
                full = (sub == hyp).sum(axis=1) >= 2
                level[full & ~is_c] = rng[full & ~is_c]
                todo = np.flatnonzero(~is_c & ~full)
                if len(todo):
                    level[todo] = _join_many(lat, sub[todo], k - 1)
                join[rng] = level
            self._cache["joins"] = join
        return self._cache["joins"]

    def open_mask(self) -> np.ndarray:
        return self.circuit_closure() == np.arange(self.lattice.size)

    def independent_spaces(self) -> list[Subspace]:
        return self._handles(self.independent_mask())

    def dependent_spaces(self) -> list[Subspace]:
        return self._handles(~self.independent_mask())

    def circuits(self) -> list[Subspace]:
        return self._handles(self.circuit_mask())

    def flats(self) -> list[Subspace]:
        return self._handles(self.flat_mask())

    def open_spaces(self) -> list[Subspace]:
        return self._handles(self.open_mask())

    def cyclic_flats(self) -> list[Subspace]:
        return self._handles(self.flat_mask() & self.open_mask())

    def loops(self) -> list[Subspace]:
        return self._handles((self.lattice.dims == 1) & (self.ranks == 0))

    def is_paving(self) -> bool:
        circ = self.circuit_mask()
        if not circ.any():
            return True
        return int(self.lattice.dims[circ].min()) >= self.rank_of_matroid

    def structure_report(self) -> StructureReport:
        idx = lambda mask: [int(i) for i in np.flatnonzero(mask)]  # noqa: E731
        flats, opens = self.flat_mask(), self.open_mask()
        indep = self.independent_mask()
        return StructureReport(
            lattice=self.lattice.fingerprint,
            loops=idx((self.lattice.dims == 1) & (self.ranks == 0)),
            independent=idx(indep),
            dependent=idx(~indep),
            circuits=idx(self.circuit_mask()),
            flats=idx(flats),
            open=idx(opens),
            cyclic_flats=idx(flats & opens),
        )

    # -- serialization ---------------------------------------------------------

    def to_csv(self, fh=None) -> str | None:
        buf = fh or io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "dim", "rows", "rank"])
        lat = self.lattice
        for i in range(lat.size):
            v = lat[i]
            w.writerow([i, v.dim, v.to_text(), int(self.ranks[i])])
        return buf.getvalue() if fh is None else None

    @classmethod
    def from_csv(cls, text: str, q: int) -> QMatroid:
        rows = list(csv.DictReader(io.StringIO(text)))
        size = len(rows)
        n = next(len(r["rows"].split(";")[0].split(",")) for r in rows if r["rows"])
        lattice = get_lattice(q, n)
        if lattice.size != size:
            raise ValueError(f"table has {size} rows, lattice of GF({q})^{n} has {lattice.size}")
        table = np.zeros(size, dtype=np.int64)
        for r in rows:
            i = int(r["index"])
            if lattice[i].to_text() != r["rows"]:
                raise ValueError(f"row {i}: subspace {r['rows']} does not match the lattice order")
            table[i] = int(r["rank"])
        return cls(lattice, table)


def _join_many(lat: Lattice, idx: np.ndarray, max_dim: int) -> np.ndarray:
    """Sum of the subspaces in each row of an index table."""
    m, h = idx.shape
    width = max(max_dim, 0)
    out = np.empty(m, dtype=np.int64)
    step = max(1, (1 << 21) // max(1, h * width * lat.n))
    pad = lat.padded
    for s in range(0, m, step):
        block = pad[idx[s:s + step]][:, :, :width, :]
        out[s:s + step] = lat.lookup(block.reshape(len(block), h * width, lat.n))
    return out


@dataclass
class StructureReport:
    lattice: dict
    loops: list[int] = field(default_factory=list)
    independent: list[int] = field(default_factory=list)
    dependent: list[int] = field(default_factory=list)
    circuits: list[int] = field(default_factory=list)
    flats: list[int] = field(default_factory=list)
    open: list[int] = field(default_factory=list)
    cyclic_flats: list[int] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def from_matrix(g: Matrix, lattice: Lattice | None = None) -> QMatroid:
    return QMatroid.from_matrix(g, lattice)


def uniform(k: int, lattice: Lattice) -> QMatroid:
    return QMatroid.uniform(k, lattice)


def paving_from_family(family: Iterable[Subspace], k: int, lattice: Lattice) -> QMatroid:
    return QMatroid.paving_from_family(list(family), k, lattice)


def represented(field: Field, text: str, n: int | None = None) -> QMatroid:
    """Shorthand: the q-matroid of a matrix given in text form."""
    g = Matrix.from_text(field, text)
    return QMatroid.from_matrix(g, get_lattice(field.p, n or g.cols))
