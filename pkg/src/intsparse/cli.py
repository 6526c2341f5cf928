"""Command line entry point: ``intsparse {forge,algmat,decode,bounds,bench} ...``.

Exit codes: 0 success, 1 bad input, 2 certificate violation, 3 resource cap.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import io as fileio
from .algebraic import (AlgebraicSensingMatrix, NumberFieldSpec, build_algebraic_matrix,
                        verify_norm_lower_bound)
from .baselines import BaselineConfig, run_baseline
from .bench import csv_digest, emit_csv, emit_plot_data, format_summary, run_experiment
from .bounds import find_sparse_witness, sparse_minkowski_bound
from .decoder import brute_force_decode, real_system, reconstruct_cvp
from .errors import CertificateError, ResourceCapError
from .exact import ExactMatrix, as_exact
from .forge import (GenSpec, generate, gen_verified, kbound_max_d, schwartz_zippel_entry_bound,
                    union_bound_feasibility, verify_plucker)

EXIT_OK, EXIT_INPUT, EXIT_CERTIFICATE, EXIT_RESOURCE = 0, 1, 2, 3


def _emit(obj, out: Optional[str] = None) -> None:
    text = json.dumps(obj, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -------------------------------------------------------------------- forge

def cmd_forge_gen(args) -> int:
    spec = GenSpec(args.m, args.d, args.k, args.model, args.seed)
    if args.verified:
        report = gen_verified(spec, max_attempts=args.max_attempts)
        if report.matrix is None:
            print(f"no certified draw in {report.attempts} attempts", file=sys.stderr)
            return EXIT_CERTIFICATE
        A = report.matrix
    else:
        A = generate(spec)
    if args.output:
        fileio.save_matrix(A, args.output)
    else:
        _emit(fileio.matrix_to_dict(A))
    return EXIT_OK


def cmd_forge_verify(args) -> int:
    A = fileio.load_matrix(args.matrix)
    if isinstance(A, (ExactMatrix, AlgebraicSensingMatrix)):
        print("forge verify expects an integer matrix", file=sys.stderr)
        return EXIT_INPUT
    cert = verify_plucker(A, cap=args.cap)
    total = math.comb(A.d, A.m)
    print(f"m={A.m} d={A.d} |A|={A.k} minors={total} vanishing={len(cert.singular_sets)}")
    for I in cert.singular_sets[:10]:
        print(f"  singular columns {list(I)}")
    return EXIT_OK if cert.all_nonzero else EXIT_CERTIFICATE


def cmd_forge_bounds(args) -> int:
    out = {"m": args.m, "k": args.k}
    if args.m >= 3:
        out["kbound_max_d"] = kbound_max_d(args.m, args.k)
    if args.d is not None:
        out["d"] = args.d
        out["union_bound"] = union_bound_feasibility(args.m, args.d, args.k)
        out["schwartz_zippel_entry_bound"] = str(schwartz_zippel_entry_bound(args.m, args.d))
    _emit(out)
    return EXIT_OK


# ------------------------------------------------------------------- algmat

def cmd_algmat_build(args) -> int:
    B = fileio.load_matrix(args.B)
    field = NumberFieldSpec.parse(args.minpoly)
    A = build_algebraic_matrix(B, field)
    if args.output:
        fileio.save_matrix(A, args.output)
    else:
        _emit(fileio.matrix_to_dict(A))
    print(f"entry bound {A.entry_bound:.6f}", file=sys.stderr)
    return EXIT_OK


def cmd_algmat_verify(args) -> int:
    A = fileio.load_matrix(args.matrix)
    if not isinstance(A, AlgebraicSensingMatrix):
        print("algmat verify expects an algebraic matrix file", file=sys.stderr)
        return EXIT_INPUT
    check = verify_norm_lower_bound(A, args.s, args.box)
    print(f"min ||Ax|| = {check.min_norm:.9f} >= sqrt({A.m}) = {check.guaranteed:.9f}"
          f" (attained at {list(check.witness)})")
    return EXIT_OK


# ------------------------------------------------------------------- decode

def _decode_inputs(args):
    """Real matrix, measurement and default alpha for the decode commands."""
    A = fileio.load_matrix(args.matrix)
    y = fileio.load_measurement(args.measurement)
    if isinstance(A, AlgebraicSensingMatrix):
        Ar, _ = real_system(A.entries)
        alpha = math.sqrt(A.m)
    else:
        Ar = as_exact(A).to_numpy()
        alpha = 1.0
    if args.alpha is not None:
        alpha = args.alpha
    return Ar, y, alpha


def _print_result(res) -> None:
    _emit({"estimate": [int(v) for v in res.estimate.to_dense()],
           "support": list(res.estimate.support),
           "residual_norm": res.residual_norm,
           "lattice_used": None if res.lattice_used is None else list(res.lattice_used),
           "status": res.status})


def cmd_decode_cvp(args) -> int:
    Ar, y, alpha = _decode_inputs(args)
    _print_result(reconstruct_cvp(Ar, y, alpha, s=args.s))
    return EXIT_OK


def cmd_decode_brute(args) -> int:
    Ar, y, alpha = _decode_inputs(args)
    _print_result(brute_force_decode(Ar, y, args.s, args.box, alpha=alpha))
    return EXIT_OK


def cmd_decode_baseline(args) -> int:
    Ar, y, _ = _decode_inputs(args)
    est = run_baseline(BaselineConfig(args.method, args.s, args.round), Ar, y)
    _emit({"method": args.method, "estimate": [v if args.round else float(v) for v in
                                                est.tolist()],
           "residual_norm": float(np.linalg.norm(y - Ar @ est))})
    return EXIT_OK


# ------------------------------------------------------------------- bounds

def cmd_bounds_report(args) -> int:
    A = as_exact(fileio.load_matrix(args.matrix))
    completion = fileio.load_matrix(args.completion) if args.completion else None
    rep = sparse_minkowski_bound(A, completion=completion, label=args.matrix)
    out = rep.as_dict()
    if not args.show_inverse:
        out.pop("right_inverse")
    _emit(out)
    return EXIT_OK


def cmd_bounds_witness(args) -> int:
    A = as_exact(fileio.load_matrix(args.matrix))
    bound = args.bound if args.bound is not None else sparse_minkowski_bound(A).minkowski_bound
    w = find_sparse_witness(A, bound, max_coeff=args.box)
    if w is None:
        _emit({"bound": bound, "box": args.box, "witness": None})
        return EXIT_OK
    x = w.to_dense()
    _emit({"bound": bound, "box": args.box, "witness": [int(v) for v in x],
           "norm": float(np.linalg.norm(A.to_numpy() @ x))})
    return EXIT_OK


# -------------------------------------------------------------------- bench

def cmd_bench_run(args) -> int:
    config = fileio.load_config(args.config)
    result = run_experiment(config, workers=args.workers)
    emit_csv(result.records, args.output)
    if args.plot_data:
        emit_plot_data(result.summary, args.plot_data)
    print(format_summary(result))
    print(f"records: {len(result.records)}  digest (timing excluded): {csv_digest(args.output)}")
    if any(c.guarantee_failures for c in result.summary):
        print("guarantee violated: a trial inside the radius was not recovered", file=sys.stderr)
        return EXIT_CERTIFICATE
    return EXIT_OK


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="intsparse", description=__doc__.splitlines()[0])
    top = p.add_subparsers(dest="group", required=True)

    forge = top.add_parser("forge", help="integer sensing matrices").add_subparsers(
        dest="cmd", required=True)
    g = forge.add_parser("gen", help="draw a random matrix")
    g.add_argument("--model", choices=("ternary", "uniform", "trivial"), default="ternary")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--verified", action="store_true", help="rejection-sample until certified")
    g.add_argument("--max-attempts", type=int, default=100)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_forge_gen)
    v = forge.add_parser("verify", help="check every maximal minor")
    v.add_argument("matrix")
    v.add_argument("--cap", type=int, default=10**7)
    v.set_defaults(func=cmd_forge_verify)
    b = forge.add_parser("bounds", help="width limit, union bound, entry bound")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--d", type=int)
    b.set_defaults(func=cmd_forge_bounds)

    alg = top.add_parser("algmat", help="number-field matrices").add_subparsers(
        dest="cmd", required=True)
    a = alg.add_parser("build")
    a.add_argument("--B", required=True, help="matrix file holding the d x m integer matrix B")
    a.add_argument("--minpoly", required=True, help='coefficients, highest first: "1,0,0,-2"')
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_algmat_build)
    a = alg.add_parser("verify")
    a.add_argument("--matrix", required=True)
    a.add_argument("--s", type=int, required=True)
    a.add_argument("--box", type=int, required=True)
    a.set_defaults(func=cmd_algmat_verify)

    dec = top.add_parser("decode", help="recover a sparse integer signal").add_subparsers(
        dest="cmd", required=True)
    for name, func in (("cvp", cmd_decode_cvp), ("brute", cmd_decode_brute),
                       ("baseline", cmd_decode_baseline)):
        d = dec.add_parser(name)
        d.add_argument("--matrix", required=True)
        d.add_argument("--measurement", required=True,
                       help="one value per line (compact real coordinates for algebraic A)")
        d.add_argument("--alpha", type=float)
        d.set_defaults(func=func)
        if name == "cvp":
            d.add_argument("--s", type=int)
        elif name == "brute":
            d.add_argument("--s", type=int, required=True)
            d.add_argument("--box", type=int, required=True)
        else:
            d.add_argument("--method", choices=("omp", "ht", "ls"), required=True)
            d.add_argument("--s", type=int, default=1)
            d.add_argument("--round", action="store_true")

    bnd = top.add_parser("bounds", help="determinantal upper bounds").add_subparsers(
        dest="cmd", required=True)
    r = bnd.add_parser("report")
    r.add_argument("--matrix", required=True)
    r.add_argument("--completion", help="matrix file with d - m rows completing A")
    r.add_argument("--show-inverse", action="store_true")
    r.set_defaults(func=cmd_bounds_report)
    w = bnd.add_parser("witness")
    w.add_argument("--matrix", required=True)
    w.add_argument("--box", type=int, required=True)
    w.add_argument("--bound", type=float, help="default: the min-norm determinantal bound")
    w.set_defaults(func=cmd_bounds_witness)

    bench = top.add_parser("bench", help="noise sweeps").add_subparsers(dest="cmd", required=True)
    br = bench.add_parser("run")
    br.add_argument("--config", required=True)
    br.add_argument("-o", "--output", required=True, help="records CSV")
    br.add_argument("--plot-data", help="per-cell curve CSV")
    br.add_argument("--workers", type=int, help="default: $INTSPARSE_WORKERS or 1")
    br.set_defaults(func=cmd_bench_run)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CertificateError as exc:
        print(f"certificate violation: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError, ArithmeticError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
