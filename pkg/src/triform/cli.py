"""Command-line front end.

Every command prints one JSON document on stdout of the form
``{"config": {...}, "result": {...}}`` (or ``{"config": ..., "error": ...}``),
so a run can be reproduced from its own output. Diagnostics go to stderr.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 domain error (pole, divergence, dimension).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__
from .bidiff import build_system, nullspace
from .errors import DomainError, FormulaMismatch, ParseError, TriformError
from .exact_arith import QComplex
from .params import ParamPoint, classify_pole, from_alpha, from_lambda, in_Zk, in_zero_set, is_irreducible
from .quadrature import mc_invariance, mc_kernel
from .trilinear import (
    MultiIndex,
    eval_normalized,
    find_witness,
    is_exact_zero,
    normalization_gamma,
    unnormalized_br,
)
from .verify import DEFAULT_SEED, MC_SAMPLES, SUITES, run_suite

__all__ = ["main", "run", "build_parser", "SNAP_TOL"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
SNAP_TOL = 1e-9
SEED_ENV = "TRIFORM_SEED"

# options whose value may legitimately start with "-" (e.g. "--alpha -3,-3,5")
_VALUE_OPTIONS = {"--alpha", "--lambda", "--lambda1", "--lambda2", "--a", "--invariance-t", "--seed"}


class UsageError(TriformError):
    kind = "UsageError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("--"):
                out.extend([tok, nxt])
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


# -- value parsing -------------------------------------------------------------


def _parse_scalar(text: str, use_float: bool) -> tuple[QComplex, str | None]:
    """Exact value plus, for ``--float`` input, the original text."""
    if not use_float:
        return QComplex.parse(text), None
    try:
        z = complex(text.strip().replace("−", "-").replace("i", "j"))
    except ValueError:
        raise ParseError(f"not a number: {text!r}") from None
    return QComplex.snap(z, SNAP_TOL), text


def _parse_list(text: str, count: int, use_float: bool, what: str):
    parts = [p for p in text.split(",")]
    if len(parts) != count:
        raise ParseError(f"{what} needs {count} comma-separated values, got {text!r}")
    return [_parse_scalar(p, use_float) for p in parts]


def _parse_index(text: str) -> MultiIndex:
    parts = text.split(",")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"multi-index must be three natural numbers, got {text!r}") from None
    if len(values) != 3:
        raise ParseError(f"multi-index must be three natural numbers, got {text!r}")
    try:
        return MultiIndex.of(values)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _resolve_seed(value: str | None) -> int:
    text = value if value is not None else os.environ.get(SEED_ENV)
    if text is None:
        return DEFAULT_SEED
    try:
        seed = int(text, 0)
    except ValueError:
        raise ParseError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= seed < 2**64:
        raise ParseError("seed must fit in 64 bits unsigned")
    return seed


def _cjson(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _point(args, config: dict) -> ParamPoint:
    if (args.alpha is None) == (getattr(args, "lam", None) is None):
        raise UsageError("give exactly one of --alpha or --lambda")
    kind = "alpha" if args.alpha is not None else "lambda"
    raw = args.alpha if kind == "alpha" else args.lam
    parsed = _parse_list(raw, 3, args.float, kind)
    values = [q for q, _ in parsed]
    config[kind] = [str(q) for q in values]
    if args.float:
        config["float_input"] = {"values": [t for _, t in parsed], "snap_tol": SNAP_TOL}
    return from_alpha(args.n, values) if kind == "alpha" else from_lambda(args.n, values)


# -- commands --------------------------------------------------------------------


def _cmd_classify(args, config):
    p = _point(args, config)
    return {
        "point": p.to_json(),
        "pole": classify_pole(p).to_json(),
        "in_zero_set": in_zero_set(p),
        "irreducible": [is_irreducible(p.n, v) for v in p.lam],
    }


def _cmd_eval(args, config):
    p = _point(args, config)
    a = _parse_index(args.a)
    config["a"] = str(a)
    return {
        "point": p.to_json(),
        "a": str(a),
        "value": _cjson(eval_normalized(p, a)),
        "is_exact_zero": is_exact_zero(p, a),
    }


def _cmd_brint(args, config):
    p = _point(args, config)
    return {"point": p.to_json(), "value": _cjson(unnormalized_br(p))}


def _cmd_witness(args, config):
    p = _point(args, config)
    config["max_order"] = args.max_order
    w = find_witness(p, args.max_order)
    return {
        "point": p.to_json(),
        "in_zero_set": in_zero_set(p),
        "witness": None if w is None else str(w),
        "value": None if w is None else _cjson(eval_normalized(p, w)),
    }


def _cmd_mc(args, config):
    p = _point(args, config)
    a = _parse_index(args.a)
    seed = _resolve_seed(args.seed)
    config.update({"a": str(a), "samples": args.samples, "seed": seed, "workers": args.workers})
    if args.invariance_t is not None:
        try:
            t = float(args.invariance_t)
        except ValueError:
            raise ParseError(f"--invariance-t must be a number, got {args.invariance_t!r}") from None
        config["invariance_t"] = t
        lhs, rhs, z = mc_invariance(p, a, t, args.samples, seed, workers=args.workers)
        return {"point": p.to_json(), "lhs": lhs.to_json(), "rhs": rhs.to_json(), "zscore": z}
    est = mc_kernel(p, a, args.samples, seed, workers=args.workers)
    out = {"point": p.to_json(), "mc": est.to_json()}
    if not classify_pole(p).is_pole:
        closed = eval_normalized(p, a) * normalization_gamma(p)
        out["closed_form"] = _cjson(closed)
        out["ratio_closed_over_mc"] = float(closed.real / est.estimate)
    return out


def _cmd_bidiff(args, config):
    if args.k < 0:
        raise UsageError("--k must be a natural number")
    (l1, t1), = _parse_list(args.lambda1, 1, args.float, "--lambda1")
    (l2, t2), = _parse_list(args.lambda2, 1, args.float, "--lambda2")
    config.update({"k": args.k, "lambda1": str(l1), "lambda2": str(l2), "method": args.method})
    if args.float:
        config["float_input"] = {"values": [t1, t2], "snap_tol": SNAP_TOL}
    sys_ = build_system(args.n, args.k, l1, l2)
    if args.method == "svd":
        res = nullspace(build_system(args.n, args.k, complex(l1), complex(l2)), "svd")
    else:
        res = nullspace(sys_, "exact")
    out = res.to_json(args.k)
    out["unknowns"] = len(sys_.unknowns)
    out["rows"] = len(sys_.rows)
    out["Zk"] = in_Zk(args.n, args.k, l1, l2).to_json()
    return out


def _cmd_verify(args, config):
    seed = _resolve_seed(args.seed)
    config.update({"suite": args.suite, "seed": seed, "samples": args.samples, "workers": args.workers})
    checks = run_suite(args.suite, seed, args.samples, args.workers)
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}", file=sys.stderr)
    return {"passed": all(c.passed for c in checks), "checks": [c.to_json() for c in checks]}


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="triform", description="Invariant trilinear forms on spheres: exact analysis and checks.")
    parser.add_argument("--version", action="version", version=f"triform {__version__}")
    parser.add_argument("--output", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, point=True):
        p.add_argument("--n", type=int, required=True, help="ambient dimension (sphere in R^n), n >= 4")
        p.add_argument("--float", action="store_true", help=f"read values as decimals and snap to rationals within {SNAP_TOL}")
        p.add_argument("--output", choices=("json", "text"), default=argparse.SUPPRESS)
        if point:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--alpha", help="geometric parameter a1,a2,a3 (rationals such as -3/2, or 1/2+1i)")
            g.add_argument("--lambda", dest="lam", help="spectral parameter l1,l2,l3")

    p = sub.add_parser("classify", help="pole type and zero-set membership")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("eval", help="normalized form on one K-invariant polynomial")
    common(p)
    p.add_argument("--a", default="0,0,0", help="multi-index a1,a2,a3")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("brint", help="closed form of the unnormalized integral against 1")
    common(p)
    p.set_defaults(func=_cmd_brint)

    p = sub.add_parser("witness", help="lowest-order polynomial not killed by the normalized form")
    common(p)
    p.add_argument("--max-order", type=int, default=12)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("mc", help="Monte Carlo estimate in the convergence region")
    common(p)
    p.add_argument("--a", default="0,0,0")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", default=None, help=f"64-bit seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    p.add_argument("--invariance-t", default=None, help="compare against the a_t-translated integrand")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("bidiff", help="nullspace of the covariance system for bi-differential operators")
    common(p, point=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda1", required=True)
    p.add_argument("--lambda2", required=True)
    p.add_argument("--method", choices=("exact", "svd"), default="exact")
    p.set_defaults(func=_cmd_bidiff)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--seed", default=None)
    p.add_argument("--samples", type=int, default=MC_SAMPLES)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", choices=("json", "text"), default=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_verify)
    return parser


# -- rendering ------------------------------------------------------------------------


def _flatten(value, prefix=""):
    if isinstance(value, dict):
        for key, v in value.items():
            yield from _flatten(v, f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(value)


def _emit(doc: dict, output: str) -> None:
    if output == "text":
        for key, val in _flatten(doc):
            print(f"{key}: {val}")
    else:
        print(json.dumps(doc, indent=2))


def _requested_output(argv: Sequence[str]) -> str:
    # Used only when argument parsing itself fails.
    for i, tok in enumerate(argv):
        if tok == "--output=text" or (tok == "--output" and argv[i + 1 : i + 2] == ["text"]):
            return "text"
    return "json"


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    config: dict = {}
    output = _requested_output(argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
        output = args.output
        config.update({"command": args.command, "version": __version__})
        if hasattr(args, "n"):
            config["n"] = args.n
        result = args.func(args, config)
    except (UsageError, ParseError) as exc:
        return _fail(config, exc, EXIT_USAGE, output)
    except DomainError as exc:
        return _fail(config, exc, EXIT_DOMAIN, output)
    except FormulaMismatch as exc:
        return _fail(config, exc, EXIT_FAIL, output)
    except (ValueError, TypeError) as exc:
        return _fail(config, exc, EXIT_USAGE, output)
    _emit({"config": config, "result": result}, output)
    if args.command == "verify" and not result["passed"]:
        return EXIT_FAIL
    return EXIT_OK


def _fail(config: dict, exc: Exception, code: int, output: str) -> int:
    kind = getattr(exc, "kind", type(exc).__name__)
    detail = str(exc)
    print(f"triform: {kind}: {detail}", file=sys.stderr)
    _emit({"config": config, "error": {"kind": kind, "detail": detail}}, output)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
