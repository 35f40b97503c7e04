"""``ortho`` command line.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 numeric
failure (a diagnostic record goes to stderr), 4 I/O failure.

Vectors and matrices are comma separated (rows split by ``;``). Values that
start with a minus sign need the ``--x=-1,2`` form.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .. import __version__
from ..auerbach import auerbach_basis, verify_property_star
from ..exceptions import ArgumentError, OrthoError
from ..normed_space import parse_space, parse_vector
from ..operators import (isometry_deviation, local_preservation_constant,
                         local_reversal_constant, preservation_constant, reversal_constant)
from ..orthogonality import (Relation, dragomir_eps, dual_margin, holds, min_gap)
from .config import resolve_config
from .report import _clean, emit_report
from .suites import SUITES, custom_operator, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


def _dump(obj, stream=None):
    stream = sys.stdout if stream is None else stream
    stream.write(json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n")


def _cmd_check_pair(args) -> int:
    space = parse_space(args.space)
    x, y = parse_vector(args.x), parse_vector(args.y)
    rel = Relation.parse(args.relation)
    out = {"space": space.describe(), "relation": str(rel), "x": x, "y": y,
           "holds": holds(space, rel, x, y, args.tolerance)}
    if rel.tag in ("birkhoff", "dragomir"):
        g = min_gap(space, x, y)
        out.update(alpha=g.alpha, minimizer_lambda=g.minimizer_lambda)
    if rel.tag in ("birkhoff", "chmielinski"):
        out["dual_margin"] = dual_margin(space, rel, x, y)
    _dump(out)
    return EXIT_OK


def _cmd_eps(args) -> int:
    space = parse_space(args.space)
    x, y = parse_vector(args.x), parse_vector(args.y)
    g = min_gap(space, x, y)
    _dump({"space": space.describe(), "x": x, "y": y, "alpha": g.alpha,
           "minimizer_lambda": g.minimizer_lambda, "eps": dragomir_eps(space, x, y)})
    return EXIT_OK


def _report_dict(rep):
    return {"eta_hat": rep.eta_hat, "direction": rep.direction, "relation": str(rep.relation),
            "worst_pair": list(rep.worst_pair), "samples_used": rep.samples_used,
            "skipped_degenerate": rep.skipped_degenerate, "note": rep.note}


def _cmd_analyze_op(args) -> int:
    cfg = resolve_config({"domain": args.domain, "codomain": args.codomain,
                          "matrix": args.matrix, "relation": args.relation,
                          "seed": args.seed, "sample_count": args.samples})
    T = custom_operator(cfg)
    rel = cfg.relation_obj
    out = {"domain": T.domain.describe(), "codomain": T.codomain.describe(),
           "matrix": T.matrix, "rank": T.rank, "injective": T.injective}
    if np.any(T.matrix):
        prof = isometry_deviation(T, seed=cfg.seed)
        out["profile"] = {"op_norm": prof.op_norm, "lower_bound": prof.lower_bound,
                          "delta1": prof.delta1, "delta2": prof.delta2, "scale": prof.scale,
                          "norm_method": prof.norm_method, "lower_method": prof.lower_method}
    if args.local_at is not None:
        x = parse_vector(args.local_at)
        x = x / T.domain.norm(x)
        p = local_preservation_constant(T, rel, x, cfg.seed, cfg.sample_count, tol=cfg.tolerance)
        r = local_reversal_constant(T, rel, x, cfg.seed, cfg.sample_count, tol=cfg.tolerance)
        out["local_at"] = x
        out["x_image_zero"] = p.x_image_zero
    else:
        p = preservation_constant(T, rel, cfg.seed, cfg.sample_count, cfg.tolerance)
        r = reversal_constant(T, rel, cfg.seed, cfg.sample_count, cfg.tolerance)
    out["preserve"] = _report_dict(p)
    out["reverse"] = _report_dict(r)
    _dump(out)
    return EXIT_OK


def _cmd_auerbach(args) -> int:
    space = parse_space(args.space)
    b = auerbach_basis(space, seed=args.seed, max_sweeps=args.sweeps)
    ok, defect = verify_property_star(space, b, seed=args.seed)
    _dump({"space": space.describe(), "vectors": b.vectors, "duals": b.duals,
           "det_abs": b.det_abs, "sweeps": b.sweeps, "property_star": ok, "defect": defect})
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_verify(args) -> int:
    try:
        cfg = resolve_config({"domain": args.domain, "codomain": args.codomain,
                              "matrix": args.matrix, "relation": args.relation,
                              "seed": args.seed, "sample_count": args.samples,
                              "tolerance": args.tolerance, "suite": args.suite},
                             path=args.config)
    except OSError as exc:
        print(f"ortho: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    doc = run_suite(args.suite, cfg)
    try:
        text = emit_report(doc, args.format, args.out)
    except OSError as exc:
        print(f"ortho: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.out is None:
        sys.stdout.write(text)
    else:
        print(f"{doc.suite}: {'pass' if doc.passed else 'fail'} -> {args.out}", file=sys.stderr)
    return EXIT_OK if doc.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ortho", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-pair", help="decide x ⊥ y for a relation")
    p.add_argument("--space", required=True, help="lp:<p>:<n>, euclidean:<n> or poly:<n>:[rows]")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--relation", default="birkhoff", help="tag[:eps], e.g. dragomir:0.3")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.set_defaults(func=_cmd_check_pair)

    p = sub.add_parser("eps", help="minimal Dragomir constant of (x, y)")
    p.add_argument("--space", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=_cmd_eps)

    p = sub.add_parser("analyze-op", help="norm profile and preservation constants of a matrix")
    p.add_argument("--domain", required=True)
    p.add_argument("--codomain")
    p.add_argument("--matrix", required=True, help="rows split by ';', e.g. '1,0;0,2'")
    p.add_argument("--relation")
    p.add_argument("--local-at", help="pin the first member of each pair")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.set_defaults(func=_cmd_analyze_op)

    p = sub.add_parser("auerbach", help="maximal-determinant basis with property (*)")
    p.add_argument("--space", required=True)
    p.add_argument("--sweeps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_auerbach)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--config", help="JSON file with scenario fields")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--domain")
    p.add_argument("--codomain")
    p.add_argument("--matrix")
    p.add_argument("--relation")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return args.func(args)
    except ArgumentError as exc:
        print(f"ortho: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OrthoError, np.linalg.LinAlgError, FloatingPointError) as exc:
        _dump({"error": type(exc).__name__, "message": str(exc), "command": args.command},
              sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"ortho: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
