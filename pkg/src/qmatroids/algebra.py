"""Finite fields GF(p^d) and exact linear algebra over them.

Elements are integer codes: the base-p digits of a code (least significant
first) are the coefficients of 1, x, ..., x^(d-1) modulo the field's
modulus polynomial.  All array routines accept numpy integer arrays of codes.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

ORDER_CAP = 2**32
LOG_TABLE_CAP = 2**16

# Conway polynomials, coefficients lowest degree first.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p) as coefficient lists, lowest degree first --------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    m = _poly_trim(list(m))
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    d = len(modulus) - 1
    for deg in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


def _first_irreducible(p: int, d: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=d):
        cand = tuple(reversed(low)) + (1,)
        if cand[0] != 0 and is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {d} over GF({p})")


class Field:
    """The finite field GF(p^d) = GF(p)[x] / (modulus)."""

    def __init__(self, p: int, d: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if d < 1:
            raise FieldError("degree must be positive")
        if p**d > ORDER_CAP:
            raise FieldError(f"field order {p}^{d} exceeds the cap 2^32")
        if modulus is None:
            if d == 1:
                modulus = (0, 1)
            else:
                modulus = DEFAULT_MODULI.get((p, d)) or _first_irreducible(p, d)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != d + 1 or any(not 0 <= c < p for c in modulus):
            raise FieldError(f"modulus {modulus} is not a degree-{d} polynomial over GF({p})")
        if modulus[-1] != 1:
            raise FieldError(f"modulus {modulus} is not monic")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.d = d
        self.modulus = modulus
        self.order = p**d
        self._pows = [p**i for i in range(d)]
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._inv: np.ndarray | None = None
        if d > 1 and self.order <= LOG_TABLE_CAP:
            self._build_log_tables()
        elif d == 1:
            self._inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)

    # -- identity -----------------------------------------------------------

    @property
    def modulus_code(self) -> int:
        return sum(c * self.p**i for i, c in enumerate(self.modulus))

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.d}/{self.modulus_code}"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.d, self.modulus) == (
            other.p, other.d, other.modulus)

    def __hash__(self):
        return hash((self.p, self.d, self.modulus))

    def __repr__(self):
        return f"Field({self.spec})"

    def __call__(self, code: int) -> FieldElement:
        return FieldElement(self, int(code))

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.order)]

    # -- scalar polynomial arithmetic (reference path) -----------------------

    def coords(self, a: int) -> tuple[int, ...]:
        """Base-p digits of a code, least significant first."""
        a = int(a)
        if not 0 <= a < self.order:
            raise FieldError(f"code {a} is not an element of GF({self.order})")
        return tuple((a // q) % self.p for q in self._pows)

    def from_coords(self, digits: Sequence[int]) -> int:
        return sum((int(c) % self.p) * q for c, q in zip(digits, self._pows))

    def poly_mul(self, a: int, b: int) -> int:
        """Multiply by schoolbook convolution and reduction mod the modulus."""
        if self.p == 2:
            prod = 0
            x, y = int(a), int(b)
            while y:
                if y & 1:
                    prod ^= x
                y >>= 1
                x <<= 1
            mod = self.modulus_code
            for bit in range(prod.bit_length() - 1, self.d - 1, -1):
                if prod >> bit & 1:
                    prod ^= mod << (bit - self.d)
            return prod
        ca, cb = self.coords(a), self.coords(b)
        prod = [0] * (2 * self.d - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_coords(_poly_mod(prod, self.modulus, self.p))

    def _poly_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.poly_mul(result, base)
            base = self.poly_mul(base, base)
            e >>= 1
        return result

    def _build_log_tables(self):
        n = self.order - 1
        factors = _prime_factors(n)
        gen = next(g for g in range(2, self.order)
                   if all(self._poly_pow(g, n // r) != 1 for r in factors))
        exp = np.empty(2 * n, dtype=np.int64)
        x = 1
        for i in range(n):
            exp[i] = x
            x = self.poly_mul(x, gen)
        exp[n:] = exp[:n]
        log = np.zeros(self.order, dtype=np.int64)
        log[exp[:n]] = np.arange(n)
        self.generator = gen
        self._exp, self._log = exp, log

    # -- array arithmetic ----------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.d == 1:
            return (np.add(a, b)) % self.p
        a, b = np.asarray(a), np.asarray(b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for q in self._pows:
            out += ((a // q + b // q) % self.p) * q
        return out if out.ndim else int(out)

    def neg(self, a):
        if self.p == 2:
            return a
        if self.d == 1:
            return (-np.asarray(a)) % self.p if np.ndim(a) else (-a) % self.p
        a = np.asarray(a)
        out = np.zeros(a.shape, dtype=np.int64)
        for q in self._pows:
            out += ((-(a // q)) % self.p) * q
        return out if out.ndim else int(out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.d == 1:
            if self.p == 2:
                return np.bitwise_and(a, b)
            return np.multiply(a, b) % self.p
        if self._exp is None:
            return _vectorized(self.poly_mul)(a, b)
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        out = np.where((a == 0) | (b == 0), 0, out)
        return out if out.ndim else int(out)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.d == 1:
            return self._inv[a] if np.ndim(a) else int(self._inv[a])
        if self._exp is None:
            return _vectorized(lambda x: self._poly_pow(x, self.order - 2))(a)
        out = self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return out if np.ndim(out) else int(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self._exp is not None:
            a = np.asarray(a, dtype=np.int64)
            out = self._exp[(self._log[a] * e) % (self.order - 1)]
            out = np.where(a == 0, 0 if e else 1, out)
            return out if out.ndim else int(out)
        return _vectorized(lambda x: self._poly_pow(x, e))(a)

    def sum(self, arr, axis: int):
        """Field sum of an array along one axis."""
        arr = np.asarray(arr)
        if self.p == 2:
            return np.bitwise_xor.reduce(arr, axis=axis)
        if self.d == 1:
            return arr.sum(axis=axis) % self.p
        arr = np.moveaxis(arr, axis, 0)
        out = np.zeros(arr.shape[1:], dtype=np.int64)
        for a in arr:
            out = self.add(out, a)
        return out

    def contains_prime_subfield(self, other: Field) -> bool:
        return other.d == 1 and other.p == self.p


def _vectorized(fn):
    def apply(*args):
        if all(np.ndim(a) == 0 for a in args):
            return fn(*(int(a) for a in args))
        return np.vectorize(lambda *xs: fn(*(int(x) for x in xs)), otypes=[np.int64])(*args)
    return apply


@functools.lru_cache(maxsize=None)
def make_field(p: int, d: int = 1, modulus: tuple[int, ...] | None = None) -> Field:
    return Field(p, d, modulus)


def parse_field(spec: str) -> Field:
    """Parse "p^d" or "p^d/modulusCode" (also a bare prime "p")."""
    m = re.fullmatch(r"\s*(\d+)(?:\^(\d+))?(?:/(\d+))?\s*", spec)
    if not m:
        raise FieldError(f"cannot parse field spec {spec!r}")
    p, d = int(m.group(1)), int(m.group(2) or 1)
    modulus = None
    if m.group(3) is not None:
        code = int(m.group(3))
        modulus = []
        while code:
            modulus.append(code % p)
            code //= p
        modulus = tuple(modulus)
    return make_field(p, d, modulus)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.field.order:
            raise FieldError(f"code {self.code} is not an element of {self.field}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed-field operands {self.field} and {other.field}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.field.from_coords([int(other)])
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, int(self.field.add(self.code, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, int(self.field.sub(self.code, self._other(other))))

    def __rsub__(self, other):
        return FieldElement(self.field, int(self.field.sub(self._other(other), self.code)))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg(self.code)))

    def __mul__(self, other):
        return FieldElement(self.field, int(self.field.mul(self.code, self._other(other))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, int(self.field.div(self.code, self._other(other))))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, int(self.field.inv(self.code)))

    def __pow__(self, e: int):
        return FieldElement(self.field, int(self.field.pow(self.code, int(e))))

    def coords(self) -> tuple[int, ...]:
        return self.field.coords(self.code)

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{self.code}@GF({self.field.order})"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch one of add, sub, mul, div, inv, pow (b is the integer exponent for pow)."""
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    if isinstance(b, FieldElement) and b.field != a.field:
        raise FieldError(f"mixed-field operands {a.field} and {b.field}")
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)


def coords(e: FieldElement) -> tuple[int, ...]:
    return e.coords()


# -- batched Gaussian elimination -------------------------------------------

def batch_rref(a: np.ndarray, field: Field) -> tuple[np.ndarray, np.ndarray]:
    """Row-reduce a stack of matrices of shape (N, r, c).

    Pivot choice is the leftmost column with a nonzero entry at or below the
    current row, taking the topmost such entry, so the output is the unique
    RREF.  Returns the reduced stack and the rank of each matrix.
    """
    a = np.asarray(a)
    binary = field.order == 2
    a = a.astype(np.uint8 if binary else np.int64, copy=True)
    n_mat, r, c = a.shape
    rank = np.zeros(n_mat, dtype=np.int64)
    if r == 0 or n_mat == 0:
        return a, rank
    rows = np.arange(r)
    for col in range(c):
        cand = (a[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.flatnonzero(has)
        piv = cand[sel].argmax(axis=1)
        tgt = rank[sel]
        prow = a[sel, piv]
        a[sel, piv] = a[sel, tgt]
        if not binary:
            scale = field.inv(prow[:, col])
            prow = field.mul(prow, scale[:, None])
        a[sel, tgt] = prow
        sub = a[sel]
        factors = sub[:, :, col].copy()
        factors[np.arange(len(sel)), tgt] = 0
        if binary:
            sub ^= factors[:, :, None] & prow[:, None, :]
        else:
            sub = field.sub(sub, field.mul(factors[:, :, None], prow[:, None, :]))
        a[sel] = sub
        rank[sel] += 1
        if rank.min() == r:
            break
    return a, rank


def batch_rank(a: np.ndarray, field: Field) -> np.ndarray:
    return batch_rref(a, field)[1]


class Matrix:
    """An immutable matrix over a finite field, stored as an int64 code array."""

    __slots__ = ("field", "_a")

    def __init__(self, field: Field, entries, cols: int | None = None):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(0, cols or 0) if arr.size == 0 else arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise FieldError(f"matrix entries out of range for {field}")
        arr.flags.writeable = False
        self.field = field
        self._a = arr

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Matrix:
        return cls(field, np.zeros((rows, cols), dtype=np.int64), cols=cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        return cls(field, np.eye(n, dtype=np.int64), cols=n)

    @classmethod
    def from_text(cls, field: Field, text: str, cols: int | None = None) -> Matrix:
        """Parse "a,b,c;d,e,f" (rows by ';', entries by ',', integer codes)."""
        text = text.strip()
        if not text:
            return cls.zeros(field, 0, cols or 0)
        rows = []
        for i, row in enumerate(text.split(";")):
            parsed = []
            for j, x in enumerate(row.split(",")):
                try:
                    parsed.append(int(x))
                except ValueError:
                    raise ValueError(f"row {i}, entry {j}: cannot parse {x!r}") from None
            rows.append(parsed)
        if len({len(r) for r in rows}) != 1:
            raise ValueError(f"ragged matrix text {text!r}")
        return cls(field, rows)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    def to_text(self) -> str:
        return ";".join(",".join(str(int(x)) for x in row) for row in self._a)

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __getitem__(self, key):
        out = self._a[key]
        if np.ndim(out) == 0:
            return FieldElement(self.field, int(out))
        return Matrix(self.field, out, cols=out.shape[-1] if out.ndim == 2 else None)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.shape == other.shape and np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash((self.field, self.shape, self._a.tobytes()))

    def __repr__(self):
        return f"Matrix({self.field.spec}, {self.to_text()!r})"

    @property
    def T(self) -> Matrix:
        return Matrix(self.field, self._a.T, cols=self.rows)

    def __matmul__(self, other: Matrix) -> Matrix:
        if other.field != self.field:
            raise FieldError("mixed-field matrix product")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        prod = self.field.mul(self._a[:, :, None], other._a[None, :, :])
        return Matrix(self.field, self.field.sum(prod, axis=1), cols=other.cols)

    def scale(self, s: int) -> Matrix:
        return Matrix(self.field, self.field.mul(self._a, int(s)), cols=self.cols)

    def frobenius(self, e: int | None = None) -> Matrix:
        """Entrywise power (default: the prime p)."""
        return Matrix(self.field, self.field.pow(self._a, e or self.field.p), cols=self.cols)

    def rref(self) -> tuple[Matrix, tuple[int, ...]]:
        return rref(self)

    def rank(self) -> int:
        return rank(self)

    def kernel(self) -> list[Matrix]:
        return kernel(self)

    def lift(self, target: Field) -> Matrix:
        return lift(self, target)


def hstack(*ms: Matrix) -> Matrix:
    return Matrix(ms[0].field, np.hstack([m.array for m in ms]))


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise FieldError("blocks over different fields")
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.int64)
    out[: a.rows, : a.cols] = a.array
    out[a.rows:, a.cols:] = b.array
    return Matrix(a.field, out, cols=a.cols + b.cols)


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    reduced, rk = batch_rref(m.array[None], m.field)
    r = reduced[0].astype(np.int64)
    k = int(rk[0])
    pivots = tuple(int(np.flatnonzero(row)[0]) for row in r[:k])
    return Matrix(m.field, r, cols=m.cols), pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(batch_rank(m.array[None], m.field)[0])


def kernel(m: Matrix) -> list[Matrix]:
    """Basis of {v : M v^T = 0}, one row vector per free column of the RREF."""
    r, pivots = rref(m)
    f = m.field
    out = []
    for j in range(m.cols):
        if j in pivots:
            continue
        v = np.zeros(m.cols, dtype=np.int64)
        v[j] = 1
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(int(r.array[i, j]))
        out.append(Matrix(f, v[None, :], cols=m.cols))
    return out


def lift(y: Matrix, target: Field) -> Matrix:
    """Embed a matrix over the prime field GF(p) into an extension of characteristic p."""
    if y.field.d != 1 or y.field.p != target.p:
        raise FieldError(f"cannot lift {y.field} into {target}")
    return Matrix(target, y.array, cols=y.cols)


def field_embedding(src: Field, dst: Field) -> np.ndarray:
    """Code map of a field homomorphism src -> dst (x mapped to the smallest root)."""
    if src.p != dst.p or dst.d % src.d:
        raise FieldError(f"{src} does not embed in {dst}")
    if src.d == 1:
        return np.arange(src.order, dtype=np.int64)
    for root in range(dst.order):
        acc = 0
        for c in reversed(src.modulus):
            acc = int(dst.add(dst.mul(acc, root), c))
        if acc == 0:
            break
    powers = [1]
    for _ in range(src.d - 1):
        powers.append(int(dst.mul(powers[-1], root)))
    table = np.zeros(src.order, dtype=np.int64)
    for code in range(src.order):
        acc = 0
        for c, pw in zip(src.coords(code), powers):
            acc = int(dst.add(acc, dst.mul(c, pw)))
        table[code] = acc
    return table


def enumerate_rref(k: int, n: int, order: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """All full-rank k x n RREF matrices with entries in range(order).

    Yields (pivot columns, stack of shape (count, k, n)) per pivot profile, in
    lexicographic pivot order; within a profile the free entries run through
    itertools.product order.
    """
    for pivots in itertools.combinations(range(n), k):
        free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
        count = order ** len(free)
        base = np.zeros((k, n), dtype=np.int64)
        base[np.arange(k), list(pivots)] = 1
        stack = np.broadcast_to(base, (count, k, n)).copy()
        if free:
            digits = np.indices((order,) * len(free)).reshape(len(free), -1).T
            ii, cc = zip(*free)
            stack[:, list(ii), list(cc)] = digits
        yield pivots, stack


def gauss_binom(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


# -- packed GF(2) rows: column 0 is the most significant bit ----------------

def pack_gf2(m: Matrix) -> list[int]:
    if m.field.order != 2:
        raise FieldError("packed layout is GF(2) only")
    return [int("".join(str(int(x)) for x in row) or "0", 2) for row in m.array]


def unpack_gf2(rows: Sequence[int], cols: int) -> Matrix:
    return Matrix(make_field(2), [[(r >> (cols - 1 - j)) & 1 for j in range(cols)] for r in rows],
                  cols=cols)


def gf2_rref(rows: Sequence[int], cols: int) -> tuple[list[int], tuple[int, ...]]:
    """RREF on bitmask rows; zero rows are dropped."""
    work = list(rows)
    pivots = []
    top = 0
    for j in range(cols):
        bit = 1 << (cols - 1 - j)
        p = next((i for i in range(top, len(work)) if work[i] & bit), None)
        if p is None:
            continue
        work[top], work[p] = work[p], work[top]
        for i in range(len(work)):
            if i != top and work[i] & bit:
                work[i] ^= work[top]
        pivots.append(j)
        top += 1
    return work[:top], tuple(pivots)
