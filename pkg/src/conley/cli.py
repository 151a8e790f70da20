"""Command-line interface.

Exit codes: 0 success, 1 invariant violation, 2 unreadable or malformed
input, 3 timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bench import run_benchmark
from .complex import InvariantError, SimplicialComplex
from .discretize import discretize_field, read_samples_csv, sample_builtin, triangulate_grid
from .morse import FilteredOrder, MorseDecomposition, filtered_order, minimum_morse_decomposition
from .mvf import MultivectorField, connection_probability, validate_field
from .persist import (LyapunovFunction, conley_persistence, downset_function,
                      f_compatible_order, morse_persistence)
from .randgen import TABLE_PRESETS, build_benchmark_complex, coarsen_to
from .reduce import ReductionTimeout, check_reduced, conmat, connectmat, with_row_additions
from .z2matrix import boundary_matrix

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_TIMEOUT = 0, 1, 2, 3
DEFAULT_SEED = 0


class InputError(Exception):
    """Input that cannot be read or parsed."""


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _parse(path: str, fn):
    """Run a parser over loaded JSON, tagging structural errors with the file name."""
    data = _read_json(path)
    try:
        return fn(data)
    except InvariantError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_complex(path: str) -> SimplicialComplex:
    return _parse(path, SimplicialComplex.from_json)


def _load_pair(complex_path: str, field_path: str) -> tuple[SimplicialComplex, MultivectorField]:
    K = _load_complex(complex_path)
    return K, _parse(field_path, lambda d: MultivectorField.from_json(K, d))


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _deadline(args) -> float | None:
    return None if args.timeout is None else time.perf_counter() + args.timeout


# -- subcommands ------------------------------------------------------------

def cmd_morse(args) -> int:
    K, F = _load_pair(args.complex, args.field)
    md = minimum_morse_decomposition(K, F)
    _write(_dumps(md.to_json()), args.out)
    return EXIT_OK


def cmd_connect(args) -> int:
    K, F = _load_pair(args.complex, args.field)
    md = minimum_morse_decomposition(K, F)
    if args.order:
        order = _parse(args.order, lambda d: FilteredOrder.from_permutation(K, md, d["order"]))
    else:
        order = filtered_order(K, md)
    A = boundary_matrix(K, order)
    algo = conmat if args.algorithm == "conmat" else connectmat
    A_out, cm = algo(A, deadline=_deadline(args))
    _check_output(args.algorithm, A_out)
    cm.check_invariants(md)
    if args.dump:
        _write(A_out.dump_coo(), args.dump)
    out = cm.to_json()
    out["algorithm"] = args.algorithm
    out["reduced"] = bool(check_reduced(A_out))
    _write(_dumps(out), args.out)
    return EXIT_OK


def _check_output(algorithm: str, A_out) -> None:
    # column operations alone keep triangularity; A*A = 0 returns once the
    # deferred row additions are applied. ConnectMat's output is a conjugate.
    if algorithm == "conmat":
        if not A_out.is_upper_triangular():
            raise InvariantError("upper triangularity violated")
        if not with_row_additions(A_out).squares_to_zero():
            raise InvariantError("A*A = 0 violated")
    elif not A_out.squares_to_zero():
        raise InvariantError("A*A = 0 violated")


def _persistence_input(args) -> tuple[SimplicialComplex, MultivectorField]:
    if args.builtin_field:
        if args.complex or args.field:
            raise InputError("give either complex/field files or --builtin-field, not both")
        samples = sample_builtin(args.builtin_field, tuple(args.region), args.resolution)
        K, geo = triangulate_grid(samples)
        return K, discretize_field(K, geo, samples, args.eps)
    if not (args.complex and args.field):
        raise InputError("persist needs <complex.json> <field.json> or --builtin-field")
    return _load_pair(args.complex, args.field)


def cmd_persist(args) -> int:
    K, F = _persistence_input(args)
    md = minimum_morse_decomposition(K, F)
    if args.lyapunov:
        f = _parse(args.lyapunov, lambda d: LyapunovFunction.from_json(d, md))
    else:
        f = downset_function(md)
    f.check(md)
    if args.via_conley:
        order = filtered_order(K, md, linear_ext=f_compatible_order(md, f))
        _, cm = conmat(boundary_matrix(K, order, track_chains=False), check=False,
                       deadline=_deadline(args))
        bc = conley_persistence(cm, f)
    else:
        bc = morse_persistence(K, md, f)
    _write(bc.to_csv(), args.out_csv)
    if args.out_svg:
        _write(bc.to_svg(log_scale=args.log), args.out_svg)
    return EXIT_OK


def cmd_discretize(args) -> int:
    if args.builtin_field:
        samples = sample_builtin(args.builtin_field, tuple(args.region), args.resolution)
    elif args.samples:
        try:
            samples = read_samples_csv(args.samples)
        except OSError as exc:
            raise InputError(f"{args.samples}: {exc.strerror or exc}") from None
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        raise InputError("discretize needs <samples.csv> or --builtin-field")
    K, geo = triangulate_grid(samples)
    F = discretize_field(K, geo, samples, args.eps)
    validate_field(K, F)
    _emit_pair(K, F, args)
    print(f"simplices: {len(K)}  vectors: {len(F)}  p: {float(connection_probability(F)):.6f}",
          file=sys.stderr)
    return EXIT_OK


def _emit_pair(K, F, args) -> None:
    if args.out_complex or args.out_field:
        if not (args.out_complex and args.out_field):
            raise InputError("give both --out-complex and --out-field")
        _write(_dumps(K.to_json()), args.out_complex)
        _write(_dumps(F.to_json()), args.out_field)
    else:
        _write(_dumps({**K.to_json(), **F.to_json()}), None)


def cmd_gen(args) -> int:
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise InputError(f"--params: malformed JSON: {exc.msg}") from None
    print(f"seed: {args.seed}", file=sys.stderr)
    try:
        K = build_benchmark_complex(args.kind, params, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    F, p = coarsen_to(K, args.target_p, args.seed)
    _emit_pair(K, F, args)
    print(f"simplices: {len(K)}  vectors: {len(F)}  p: {float(p):.6f}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    print(f"seed: {args.seed}", file=sys.stderr)
    instances = []
    for name in args.preset or []:
        if name not in TABLE_PRESETS:
            raise InputError(f"unknown preset {name!r}; known: {', '.join(TABLE_PRESETS)}")
        kind, params, p = TABLE_PRESETS[name]
        K = build_benchmark_complex(kind, params, args.seed)
        F, _ = coarsen_to(K, p, args.seed)
        instances.append((name, K, F))
    for cpath, fpath in args.instance or []:
        K, F = _load_pair(cpath, fpath)
        instances.append((Path(fpath).stem, K, F))
    if args.g_resolution:
        samples = sample_builtin("g", (-3.0, 3.0, -3.0, 3.0), args.g_resolution)
        K, geo = triangulate_grid(samples)
        instances.append((f"g{args.g_resolution}", K, discretize_field(K, geo, samples)))
    if not instances:
        raise InputError("bench needs at least one --preset, --instance or --g-resolution")
    report = run_benchmark(instances, args.repetitions, args.timeout)
    _write(report.to_markdown(), args.out)
    if args.out_csv:
        _write(report.to_csv(), args.out_csv)
    return EXIT_TIMEOUT if any(r.status == "timeout" for r in report.rows) else EXIT_OK


def cmd_validate(args) -> int:
    if len(args.files) == 1:
        data = _read_json(args.files[0])
        if not isinstance(data, dict) or "simplices" not in data or "vectors" not in data:
            raise InputError(f"{args.files[0]}: a lone file must hold both 'simplices' and 'vectors'")
        K = _parse(args.files[0], SimplicialComplex.from_json)
        F = _parse(args.files[0], lambda d: MultivectorField.from_json(K, d))
    elif len(args.files) == 2:
        K, F = _load_pair(*args.files)
    else:
        raise InputError("validate takes <complex.json> <field.json> or one combined file")
    md = minimum_morse_decomposition(K, F)
    if args.decomposition:
        given = _parse(args.decomposition, lambda d: MorseDecomposition.from_json(d, len(K)))
        if given.sets != md.sets or any(set(a) != set(b) for a, b in zip(given.below, md.below)):
            raise InvariantError("decomposition differs from the minimum Morse decomposition")
    if args.order:
        _parse(args.order, lambda d: FilteredOrder.from_permutation(K, md, d["order"]))
    if args.lyapunov:
        _parse(args.lyapunov, lambda d: LyapunovFunction.from_json(d, md)).check(md)
    print(f"ok: {len(K)} simplices, {len(F)} vectors, {len(md)} Morse sets")
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _region(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("region must be xmin,xmax,ymin,ymax") from None
    if len(vals) != 4 or vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise argparse.ArgumentTypeError("region must be xmin,xmax,ymin,ymax with min < max")
    return vals


def _add_sampling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin-field", choices=["g"])
    p.add_argument("--region", type=_region, default=[-3.0, 3.0, -3.0, 3.0],
                   help="xmin,xmax,ymin,ymax (default -3,3,-3,3)")
    p.add_argument("--resolution", type=int, default=21, help="samples per axis (default 21)")
    p.add_argument("--eps", type=float, default=1e-9)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conley", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("morse", help="minimum Morse decomposition")
    p.add_argument("complex")
    p.add_argument("field")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_morse)

    p = sub.add_parser("connect", help="connection matrix")
    p.add_argument("complex")
    p.add_argument("field")
    p.add_argument("--algorithm", choices=["conmat", "connectmat"], default="conmat")
    p.add_argument("--order", help="JSON {'order': [...]} giving a P-filtered simplex order")
    p.add_argument("--dump", help="write the reduced matrix in COO text form here")
    p.add_argument("--timeout", type=float)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("persist", help="barcode of a Morse decomposition under a Lyapunov function")
    p.add_argument("complex", nargs="?")
    p.add_argument("field", nargs="?")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lyapunov")
    g.add_argument("--downset", action="store_true", help="use the downset function (default)")
    _add_sampling(p)
    p.add_argument("--via-conley", action="store_true", help="filter the Conley complex instead of K")
    p.add_argument("--out-csv")
    p.add_argument("--out-svg")
    p.add_argument("--log", action="store_true", help="logarithmic bar lengths in the SVG")
    p.add_argument("--timeout", type=float)
    p.set_defaults(func=cmd_persist)

    p = sub.add_parser("discretize", help="multivector field from a sampled planar field")
    p.add_argument("samples", nargs="?", help="CSV with rows x,y,vx,vy")
    _add_sampling(p)
    p.add_argument("--out-complex")
    p.add_argument("--out-field")
    p.set_defaults(func=cmd_discretize)

    p = sub.add_parser("gen", help="random complex and coarsened field")
    p.add_argument("--kind", required=True,
                   choices=["full-simplex", "triangle-soup", "dense-graph", "mixed"])
    p.add_argument("--params", required=True, help='JSON, e.g. \'{"d": 6}\'')
    p.add_argument("--target-p", type=float, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out-complex")
    p.add_argument("--out-field")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time conmat against connectmat")
    p.add_argument("--preset", action="append", choices=sorted(TABLE_PRESETS))
    p.add_argument("--instance", nargs=2, action="append", metavar=("COMPLEX", "FIELD"))
    p.add_argument("--g-resolution", type=int, help="add the discretized g field at this resolution")
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--timeout", type=float, help="seconds per reduction run")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-o", "--out")
    p.add_argument("--out-csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="check a field (and optional decomposition, order, Lyapunov function)")
    p.add_argument("files", nargs="+")
    p.add_argument("--decomposition")
    p.add_argument("--order")
    p.add_argument("--lyapunov")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ReductionTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
