"""Command-line entry point.

Exit status: 0 when every check passes, 1 when a mathematical check fails
(counterexamples go to a JSON sidecar), 2 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .classify_sweep import (
    SweepConfig, classification_roundtrip, faithful_sweep, length_bound_scan, sl2_crosscheck,
)
from .exact_linalg import Matrix, Q, render_q
from .module_analysis import isomorphism_search, kernel_and_flags
from .phi_toolkit import lidep_bruteforce, lidep_predict, reduccion_scan, sample_reduccion_X
from .rep_builder import (
    NotNormalizable, NotStandard, ParamViolation, RepParams, RepresentationCheckFailed, build_R,
    normalize, rep_from_json, rep_to_json,
)
from .reporting import FORMATS, render_report
from .sampling import default_seed, rng_for

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_rep(path: str):
    payload = _read_json(path)
    if not isinstance(payload, dict):
        raise InputError("representation file must hold a JSON object")
    if "abc" in payload:
        payload = {"params": payload}
    return rep_from_json(payload)


def _int_range(text: str) -> tuple[int, ...]:
    """'2..4' or '2,3,5'."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from exc


def _rationals(text: str) -> tuple:
    try:
        return tuple(Q(t) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational list {text!r}") from exc


def _mat_text(m: Matrix) -> list:
    return [[render_q(v) for v in r] for r in m.tolist()]


def _matrix_arg(text: str) -> Matrix:
    try:
        return Matrix(json.loads(text))
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad matrix {text!r}; use JSON like [[1,0],[\"1/2\",3]]") from exc


# ---------------------------------------------------------------------------
# verbs: each returns (report, passed, counterexamples)
# ---------------------------------------------------------------------------

def _cmd_build(args):
    payload = _read_json(args.input)
    params = RepParams.from_json(payload.get("params", payload))
    rep = build_R(params)
    return rep_to_json(rep), rep.verified, []


def _cmd_analyze(args):
    rep = _load_rep(args.input)
    if not rep.verified:
        return {"schema": "v1", "verified": False, "reason": rep.label}, False, [{"reason": rep.label}]
    report = kernel_and_flags(rep)
    payload = report.to_json()
    cex = []
    if args.compare:
        other = _load_rep(args.compare)
        res = isomorphism_search(rep, other, seed=args.seed)
        payload.update(isomorphic=res.isomorphic, negative_certified=res.negative_certified,
                       solution_dim=res.solution_dim)
    if report.lemma_funk_consistent is False:
        cex.append({"reason": "kernel meets V contrary to the block-size criterion",
                    "rep": rep_to_json(rep)})
    return payload, not cex, cex


def _cmd_normalize(args):
    rep = _load_rep(args.input)
    normed, T = normalize(rep)
    out = rep_to_json(normed)
    out["conjugator"] = _mat_text(T)
    return out, True, []


def _sweep_cfg(args) -> SweepConfig:
    return SweepConfig(n_range=args.n, alpha_set=args.alpha, lambda_set=args.lam,
                       samples_per_cell=args.samples, seed=args.seed)


def _cmd_sweep_faithful(args):
    rpt = faithful_sweep(_sweep_cfg(args))
    return rpt, rpt.passed, rpt.counterexamples


def _cmd_roundtrip(args):
    rpt = classification_roundtrip(_sweep_cfg(args), trials=args.trials, dense_trials=args.dense_trials)
    return rpt, rpt.passed, rpt.counterexamples


def _cmd_lidep(args):
    if args.input:
        payload = _read_json(args.input)
        a, b, c = int(payload["a"]), int(payload["b"]), int(payload["c"])
        P, Qm = Matrix(payload["P"]), Matrix(payload["Q"])
    else:
        if None in (args.a, args.b, args.c, args.P, args.Q):
            raise InputError("lidep needs --a --b --c --P --Q or an input file")
        a, b, c, P, Qm = args.a, args.b, args.c, args.P, args.Q
    pred = lidep_predict(a, b, c, P, Qm)
    brute = lidep_bruteforce(a, b, c, P, Qm)
    out = {"schema": "v1", "predict": pred, "bruteforce": brute, "agree": pred == brute}
    cex = [] if pred == brute else [{"a": a, "b": b, "c": c, "P": _mat_text(P), "Q": _mat_text(Qm)}]
    return out, pred == brute, cex


def _cmd_reduccion(args):
    if args.sizes is None:
        rpt = length_bound_scan(args.dmax, args.lam, args.samples, args.seed, args.alpha)
        return rpt, rpt.passed, rpt.counterexamples
    if len(args.sizes) != 4:
        raise InputError("--sizes needs four block sizes")
    lam, alpha = args.lam[0], args.alpha[0]
    X = sample_reduccion_X(args.sizes, rng_for(args.seed, "cli-reduccion", args.sizes))
    res = reduccion_scan(args.sizes, lam, alpha, X=X)
    expected = tuple(args.sizes) == (1, 1, 1, 1)
    out = {"schema": "v1", "sizes": list(res.sizes), "lambda": render_q(lam), "alpha": render_q(alpha),
           "all_14_blocks_zero": res.all_14_blocks_zero, "closure_dim": res.closure_dim,
           "expected": expected}
    if res.witness is not None:
        out["witness"] = _mat_text(res.witness)
    ok = res.all_14_blocks_zero == expected
    return out, ok, [] if ok else [out]


def _cmd_crosscheck_sl2(args):
    res = sl2_crosscheck(seed=args.seed)
    return res.to_json(), res.passed, [] if res.passed else [res.to_json()]


VERBS = {
    "build": _cmd_build,
    "analyze": _cmd_analyze,
    "normalize": _cmd_normalize,
    "sweep-faithful": _cmd_sweep_faithful,
    "roundtrip": _cmd_roundtrip,
    "lidep": _cmd_lidep,
    "reduccion": _cmd_reduccion,
    "crosscheck-sl2": _cmd_crosscheck_sl2,
}
TABLE_VERBS = {"sweep-faithful", "roundtrip"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="urlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"urlab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, help="output format (default json; md for sweeps)")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--sidecar", help="counterexample JSON path (default: <output>.counterexamples.json)")
    common.add_argument("--seed", type=int, default=None, help="sampling seed (default: URLAB_SEED or the built-in constant)")
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb in ("build", "normalize"):
        p = sub.add_parser(verb, parents=[common])
        p.add_argument("input", help="JSON file, or - for stdin")
    p = sub.add_parser("analyze", parents=[common])
    p.add_argument("input")
    p.add_argument("--compare", help="second representation to test for isomorphism")

    for verb in ("sweep-faithful", "roundtrip"):
        p = sub.add_parser(verb, parents=[common])
        p.add_argument("--n", type=_int_range, default=(2, 3, 4))
        p.add_argument("--alpha", type=_rationals, default=(Q(0), Q(1), Q("-1/2")))
        p.add_argument("--lambda", dest="lam", type=_rationals, default=(Q(1), Q(2), Q("-1/3")))
        p.add_argument("--samples", type=int, default=5)
        if verb == "roundtrip":
            p.add_argument("--trials", type=int, default=50)
            p.add_argument("--dense-trials", type=int, default=10)

    p = sub.add_parser("lidep", parents=[common])
    p.add_argument("input", nargs="?", help='payload {"a","b","c","P","Q"}')
    for k in ("a", "b", "c"):
        p.add_argument(f"--{k}", type=int)
    p.add_argument("--P", type=_matrix_arg)
    p.add_argument("--Q", type=_matrix_arg)

    p = sub.add_parser("reduccion", parents=[common])
    p.add_argument("--sizes", type=_int_range, help="single scan of d1,d2,d3,d4; omit for the full scan")
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--lambda", dest="lam", type=_rationals, default=(Q(1), Q(-2), Q("1/3")))
    p.add_argument("--alpha", type=_rationals, default=(Q(0),))
    p.add_argument("--samples", type=int, default=3)

    sub.add_parser("crosscheck-sl2", parents=[common])
    return parser


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.seed is None:
        args.seed = default_seed()
    fmt = args.format or ("md" if args.verb in TABLE_VERBS or (args.verb == "reduccion" and args.sizes is None) else "json")
    try:
        report, passed, cex = VERBS[args.verb](args)
    except (InputError, ParamViolation, NotStandard, NotNormalizable, KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(f"urlab: invalid input: {exc}\n")
        return EXIT_INPUT
    except RepresentationCheckFailed as exc:
        sys.stderr.write(f"urlab: check failed: {exc}\n")
        return EXIT_FAIL
    _write(render_report(report, fmt), args.output)
    if not passed:
        side = args.sidecar or (f"{args.output}.counterexamples.json" if args.output else None)
        text = json.dumps({"schema": "v1", "verb": args.verb, "counterexamples": cex}, sort_keys=True, indent=2) + "\n"
        if side:
            Path(side).write_text(text)
        else:
            sys.stderr.write(text)
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
