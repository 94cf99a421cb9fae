"""Command-line interface.

Exit codes: 0 = positive result / full pass, 1 = zero / not found / violation,
2 = invalid input or parameters.
"""

from __future__ import annotations

import argparse
import sys

from . import verify as verify_mod
from .diagonals import find_positive_diagonal, permanent
from .errors import PolypermError
from .gen import random_latin, random_polystochastic, sinkhorn_project
from .latin import (
    dumps_lhc,
    from_matrix,
    loads_lhc,
    to_matrix,
    z_matrix,
)
from .matrix import dumps_pmat, loads_pmat
from .prover44 import find_positive_diagonal_44
from .rowlatin import enumerate_classes, find_transversal


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def cmd_permanent(args) -> int:
    matrix = loads_pmat(_read_text(args.file))
    value = permanent(matrix)
    print(value)
    return 0 if value > 0 else 1


def cmd_find_diagonal(args) -> int:
    matrix = loads_pmat(_read_text(args.file))
    if args.method == "constructive":
        diag, trace = find_positive_diagonal_44(matrix)
        print(diag.to_text())
        if args.trace:
            print(trace.render())
        return 0
    diag = find_positive_diagonal(matrix)
    if diag is None:
        print("none")
        return 1
    print(diag.to_text())
    return 0


def cmd_verify(args) -> int:
    kwargs = {}
    if args.target == "theorem44":
        kwargs["count"] = args.count
        kwargs["seed0"] = args.seed
    if args.target == "census":
        kwargs["allow_large"] = args.unsafe_scope
        if args.dim is not None or args.order is not None:
            if args.dim is None or args.order is None:
                raise PolypermError("census slice selection needs both --dim and --order")
            kwargs["scope"] = (
                verify_mod.slice_for(
                    args.dim,
                    args.order,
                    reduced=not args.unrestricted,
                    mode="existence" if args.existence_only else "count",
                ),
            )
            kwargs["include_group_table_order4"] = False
    report = verify_mod.run_target(args.target, jobs=args.jobs, **kwargs)
    print(report.render(workers=args.jobs))
    return 0 if report.passed else 1


def cmd_convert(args) -> int:
    text = _read_text(args.file)
    if args.direction == "lhc-to-pmat":
        cube = loads_lhc(text)
        _write_text(args.output, dumps_pmat(to_matrix(cube)))
    else:
        matrix = loads_pmat(text)
        _write_text(args.output, dumps_lhc(from_matrix(matrix)))
    return 0


def cmd_gen(args) -> int:
    if args.kind == "latin":
        cube = random_latin(args.dim, args.order, args.seed)
        _write_text(args.output, dumps_lhc(cube))
        return 0
    if args.kind == "zmatrix":
        _write_text(args.output, dumps_pmat(z_matrix(args.dim, args.order)))
        return 0
    # poly
    matrix = random_polystochastic(args.dim, args.order, args.terms, args.seed)
    if args.sinkhorn:
        result = sinkhorn_project(matrix.to_float(), tol=args.tol, max_iter=args.max_iter)
        if not result.converged:
            print(f"warning: line scaling not converged (dev {result.max_deviation:.3g})",
                  file=sys.stderr)
        matrix = result.matrix
    _write_text(args.output, dumps_pmat(matrix))
    return 0


def cmd_classes(args) -> int:
    reps = enumerate_classes(args.rows, args.cols)
    free = 0
    for rect in reps:
        has = find_transversal(rect.rows) is not None
        if not has:
            free += 1
        sys.stdout.write(rect.to_text())
        print(f"transversal: {'yes' if has else 'no'}")
    print(f"classes: {len(reps)}")
    print(f"transversal_free: {free}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyperm",
        description=(
            "Permanents of polystochastic matrices, latin hypercube "
            "transversals, and the constructive order-4 positive-diagonal finder."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("permanent", help="permanent of a pmat file (exit 0 if positive)")
    p.add_argument("file", help="pmat file, or - for stdin")
    p.set_defaults(fn=cmd_permanent)

    p = sub.add_parser("find-diagonal", help="search a positive diagonal")
    p.add_argument("file", help="pmat file, or - for stdin")
    p.add_argument("--method", choices=("exhaustive", "constructive"), default="exhaustive")
    p.add_argument("--trace", action="store_true", help="print the constructive trace")
    p.set_defaults(fn=cmd_find_diagonal)

    p = sub.add_parser("verify", help="run a verification batch")
    p.add_argument("target", choices=verify_mod.TARGET_NAMES)
    p.add_argument("--jobs", type=int, default=verify_mod.default_jobs())
    p.add_argument("--count", type=int, default=10_000, help="theorem44 batch size")
    p.add_argument("--seed", type=int, default=0, help="theorem44 base seed")
    p.add_argument("--dim", type=int, default=None, help="census: restrict to one slice")
    p.add_argument("--order", type=int, default=None, help="census: restrict to one slice")
    p.add_argument("--unrestricted", action="store_true",
                   help="census: enumerate without the reduced-form normalization")
    p.add_argument("--existence-only", action="store_true",
                   help="census: stop at the first transversal per object")
    p.add_argument("--unsafe-scope", action="store_true",
                   help="census: lift the default enumeration guards")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("convert", help="convert between lhc and pmat files")
    p.add_argument("file", help="input file, or - for stdin")
    p.add_argument("--direction", choices=("lhc-to-pmat", "pmat-to-lhc"), required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("gen", help="generate test objects")
    p.add_argument("kind", choices=("latin", "poly", "zmatrix"))
    p.add_argument("dim", type=int)
    p.add_argument("order", type=int)
    p.add_argument("--terms", type=int, default=3, help="poly: convex combination size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sinkhorn", action="store_true",
                   help="poly: line-scale a float copy instead of exact output")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("classes", help="row-latin rectangle classes")
    p.add_argument("rows", type=int)
    p.add_argument("cols", type=int)
    p.set_defaults(fn=cmd_classes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except PolypermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
