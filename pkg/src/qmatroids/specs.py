"""Text specs for q-matroids.

    matrix:<field>:<n>:<matrix-text>     e.g. matrix:2^2:4:1,2,0,3;0,0,1,2
    uniform:<q>:<n>:<k>                  e.g. uniform:2:2:1
    paving:<q>:<n>:<k>:<rows>            k consecutive ';'-separated rows per space
    dsum:<spec>+<spec>                   split at the first '+'
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Matrix, make_field, parse_field
from .directsum import direct_sum
from .lattice import DEFAULT_CAP, LatticeCapError, get_lattice, lattice_size
from .qmatroid import QMatroid


class SpecError(ValueError):
    pass


@dataclass
class ParsedSpec:
    text: str
    matroid: QMatroid
    matrix: Matrix | None = None
    summands: tuple[ParsedSpec, ParsedSpec] | None = None


def _lattice(q: int, n: int, cap: int):
    size = lattice_size(q, n)
    if size > cap:
        raise LatticeCapError(size, cap)
    return get_lattice(q, n)


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise SpecError(f"{what}: expected an integer, got {text!r}") from None


def parse_spec(text: str, cap_lattice: int = DEFAULT_CAP) -> ParsedSpec:
    kind, _, rest = text.partition(":")
    if kind == "dsum":
        left, plus, right = rest.partition("+")
        if not plus:
            raise SpecError(f"dsum spec needs two summands joined by '+': {text!r}")
        a, b = parse_spec(left, cap_lattice), parse_spec(right, cap_lattice)
        if a.matroid.q != b.matroid.q:
            raise SpecError("dsum summands over different base fields")
        _lattice(a.matroid.q, a.matroid.n + b.matroid.n, cap_lattice)
        return ParsedSpec(text, direct_sum(a.matroid, b.matroid), summands=(a, b))
    parts = rest.split(":")
    if kind == "matrix":
        if len(parts) != 3:
            raise SpecError(f"expected matrix:<field>:<n>:<matrix-text>, got {text!r}")
        field = parse_field(parts[0])
        n = _int(parts[1], "n")
        g = Matrix.from_text(field, parts[2], cols=n)
        if g.cols != n:
            raise SpecError(f"matrix has {g.cols} columns, spec says n={n}")
        lat = _lattice(field.p, n, cap_lattice)
        return ParsedSpec(text, QMatroid.from_matrix(g, lat), matrix=g)
    if kind == "uniform":
        if len(parts) != 3:
            raise SpecError(f"expected uniform:<q>:<n>:<k>, got {text!r}")
        q, n, k = (_int(x, name) for x, name in zip(parts, ("q", "n", "k")))
        make_field(q)
        return ParsedSpec(text, QMatroid.uniform(k, _lattice(q, n, cap_lattice)))
    if kind == "paving":
        if len(parts) != 4:
            raise SpecError(f"expected paving:<q>:<n>:<k>:<rows>, got {text!r}")
        q, n, k = (_int(x, name) for x, name in zip(parts[:3], ("q", "n", "k")))
        lat = _lattice(q, n, cap_lattice)
        rows = Matrix.from_text(make_field(q), parts[3], cols=n).array if parts[3].strip() else np.zeros((0, n))
        if len(rows) % k:
            raise SpecError(f"{len(rows)} rows do not split into spaces of {k} rows")
        family = []
        for s in range(0, len(rows), k):
            space = lat.canonicalize(rows[s:s + k])
            if space.dim != k:
                raise SpecError(f"rows {s}..{s + k - 1} span a space of dimension {space.dim}, not {k}")
            family.append(space)
        return ParsedSpec(text, QMatroid.paving_from_family(family, k, lat))
    raise SpecError(f"unknown q-matroid spec kind {kind!r}")
