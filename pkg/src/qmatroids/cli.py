"""qmatroids command line: rank tables, structures, direct sums, representation searches."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import FieldError, Matrix, parse_field
from .directsum import compute_direct_sum
from .lattice import DEFAULT_CAP, LatticeCapError, embed_indices, get_lattice, lattice_size
from .qmatroid import QMatroid
from .representation import (CANDIDATE_CAP, INCONCLUSIVE, CapExceeded, block_diag_test,
                             search_representations)
from .scenarios import SCENARIOS, run_scenario
from .specs import SpecError, parse_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class CommandFailed(RuntimeError):
    pass


def rank_table_json(m: QMatroid) -> str:
    lat = m.lattice
    rows = [{"index": v.index, "dim": v.dim, "rows": v.to_text(), "rank": int(m.ranks[v.index])}
            for v in lat]
    doc = {"q": m.q, "n": m.n, "rank": m.rank_of_matroid, "fingerprint": m.fingerprint,
           "lattice_fingerprint": lat.fingerprint, "table": rows}
    return json.dumps(doc, sort_keys=True, indent=1)


def _table(m: QMatroid, fmt: str) -> tuple[str, str]:
    return ("rank_table.json", rank_table_json(m)) if fmt == "json" else ("rank_table.csv", m.to_csv())


# -- commands -------------------------------------------------------------------
# each returns (exit code, {artifact name: text}); the first artifact goes to stdout without --out

def cmd_rank_table(args) -> tuple[int, dict[str, str]]:
    field = parse_field(args.field)
    g = Matrix.from_text(field, args.matrix, cols=args.n)
    n = args.n if args.n is not None else g.cols
    if g.cols != n:
        raise SpecError(f"matrix has {g.cols} columns, --n says {n}")
    lat = _lattice(field.p, n, args.cap_lattice)
    m = QMatroid.from_matrix(g, lat)
    bad = m.check_axioms(seed=args.seed)
    if bad:
        raise CommandFailed(f"represented table violates the axioms: {bad[0]}")
    name, text = _table(m, args.format)
    return EXIT_OK, {name: text}


def cmd_structures(args):
    m = parse_spec(args.spec, args.cap_lattice).matroid
    return EXIT_OK, {"structures.json": m.structure_report().to_json()}


def cmd_direct_sum(args):
    a = parse_spec(args.spec1, args.cap_lattice).matroid
    b = parse_spec(args.spec2, args.cap_lattice).matroid
    if a.q != b.q:
        raise SpecError("summands over different base fields")
    _lattice(a.q, a.n + b.n, args.cap_lattice)
    ds = compute_direct_sum(a, b)
    total = ds.matroid
    big = total.lattice
    split = (a.n, b.n)
    i1 = embed_indices(big, split, 1, np.arange(a.lattice.size))
    i2 = embed_indices(big, split, 2, np.arange(b.lattice.size))
    ia, ib = (x.ravel() for x in np.meshgrid(np.arange(a.lattice.size), np.arange(b.lattice.size),
                                            indexing="ij"))
    sums = big.join_indices(i1[ia], i2[ib])
    additive = bool(np.array_equal(total.ranks[sums], a.ranks[ia] + b.ranks[ib]))
    summary = {
        "summands": [args.spec1, args.spec2],
        "split": list(split),
        "subspaces": big.size,
        "rank": total.rank_of_matroid,
        "x_size": int(ds.x_mask().sum()),
        "circuits": int(ds.circuit_mask().sum()),
        "additivity": {"pairs": int(len(sums)), "holds": additive,
                       "rank_sum": total.rank_of_matroid == a.rank_of_matroid + b.rank_of_matroid},
        "fingerprint": total.fingerprint,
    }
    name, text = _table(total, args.format)
    arts = {name: text, "direct_sum.json": json.dumps(summary, sort_keys=True, indent=2)}
    return (EXIT_OK if additive else EXIT_FAIL), arts


def cmd_repr_search(args):
    m = parse_spec(args.spec, args.cap_lattice).matroid
    found, cert = search_representations(m, args.degree, cap=args.cap_candidates)
    if cert.verdict == INCONCLUSIVE:
        raise CapExceeded(cert.payload["candidates_needed"], args.cap_candidates)
    return EXIT_OK, {f"repr_search_m{args.degree}.json": cert.to_json()}


def cmd_block_diag(args):
    a = parse_spec(args.spec1, args.cap_lattice).matroid
    b = parse_spec(args.spec2, args.cap_lattice).matroid
    if a.q != b.q:
        raise SpecError("summands over different base fields")
    _lattice(a.q, a.n + b.n, args.cap_lattice)
    cert = block_diag_test(a, b, args.degree, cap=args.cap_candidates)
    if cert.verdict == INCONCLUSIVE:
        raise CapExceeded(-1, args.cap_candidates)
    return EXIT_OK, {f"block_diag_m{args.degree}.json": cert.to_json()}


def cmd_verify_paper(args):
    res = run_scenario(args.scenario, seed=args.seed)
    print(res.summary(), file=sys.stderr)
    doc = {"scenario": res.name, "passed": res.passed, "seed": args.seed,
           "checks": [{"check": c, "passed": ok, "detail": d} for c, ok, d in res.checks]}
    arts = {"scenario.json": json.dumps(doc, sort_keys=True, indent=2), **res.artifacts}
    return (EXIT_OK if res.passed else EXIT_FAIL), arts


def _lattice(q: int, n: int, cap: int):
    size = lattice_size(q, n)
    if size > cap:
        raise LatticeCapError(size, cap)
    return get_lattice(q, n)


# -- plumbing -------------------------------------------------------------------

def write_artifacts(out: Path, artifacts: dict[str, str], command: list[str]) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for name, text in artifacts.items():
        data = text.encode()
        (out / name).write_bytes(data)
        files[name] = {"bytes": len(data), "sha256": hashlib.sha256(data).hexdigest()}
    manifest = {"tool": "qmatroids", "version": __version__, "command": command, "files": files}
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; work is vectorized in one process")
    common.add_argument("--cap-lattice", type=int, default=DEFAULT_CAP,
                        help="largest subspace lattice to build (default %(default)s)")
    common.add_argument("--cap-candidates", type=int, default=CANDIDATE_CAP,
                        help="largest representation search (default %(default)s)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="rank-table format")
    common.add_argument("--out", type=Path, help="write artifacts and manifest.json here")

    p = argparse.ArgumentParser(prog="qmatroids", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rank-table", parents=[common], help="rank table of the q-matroid of a matrix")
    s.add_argument("field", help="field spec, e.g. 2^2 or 2^2/7")
    s.add_argument("matrix", help="rows separated by ';', entries by ','")
    s.add_argument("--n", type=int, help="number of columns (needed for empty matrices)")
    s.set_defaults(func=cmd_rank_table)

    s = sub.add_parser("structures", parents=[common], help="circuits, flats, open and cyclic spaces")
    s.add_argument("spec")
    s.set_defaults(func=cmd_structures)

    s = sub.add_parser("direct-sum", parents=[common], help="rank table of M1 (+) M2 plus summary")
    s.add_argument("spec1")
    s.add_argument("spec2")
    s.set_defaults(func=cmd_direct_sum)

    s = sub.add_parser("repr-search", parents=[common], help="all representations at one degree")
    s.add_argument("spec")
    s.add_argument("--degree", "-m", type=int, required=True)
    s.set_defaults(func=cmd_repr_search)

    s = sub.add_parser("block-diag", parents=[common], help="block-diagonal test for M1 (+) M2")
    s.add_argument("spec1")
    s.add_argument("spec2")
    s.add_argument("--degree", "-m", type=int, required=True)
    s.set_defaults(func=cmd_block_diag)

    s = sub.add_parser("verify-paper", parents=[common], help="run a worked-example scenario")
    s.add_argument("scenario", choices=sorted(SCENARIOS))
    s.set_defaults(func=cmd_verify_paper)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code, artifacts = args.func(args)
    except (LatticeCapError, CapExceeded) as exc:
        print(f"qmatroids: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CommandFailed as exc:
        print(f"qmatroids: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SpecError, FieldError, ValueError) as exc:
        print(f"qmatroids: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out is not None:
        try:
            manifest = write_artifacts(args.out, artifacts, argv)
        except OSError as exc:
            print(f"qmatroids: input error: cannot write to {args.out}: {exc}", file=sys.stderr)
            return EXIT_INPUT
        print(f"wrote {len(artifacts)} artifacts, manifest {manifest}", file=sys.stderr)
    else:
        sys.stdout.write(next(iter(artifacts.values())).rstrip("\n") + "\n")
        for name, text in list(artifacts.items())[1:]:
            if name.endswith(".json") and args.command == "direct-sum":
                print(text, file=sys.stderr)
    print(f"elapsed {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
