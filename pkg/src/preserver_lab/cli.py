"""Command line front end.

Exit codes: 0 pass/success, 1 input error, 2 verification/oracle fail,
3 recovery structural failure.  Reports go to stdout (or ``--out``);
diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

import numpy as np

from .domains import MatrixClass, dual_witness, mix_seed, sample
from .errors import RECOVERY_ERRORS, PreserverLabError
from .jsonio import dumps_stable
from .mapspec import realize_map, recovery_to_json
from .preservers import remark1_map, pinching
from .recovery import recover
from .verifiers import (
    check_homogeneity_additivity,
    check_jacobi,
    check_kadison_choi,
    check_minkowski,
    verify_det_identity,
    verify_trace_identity,
)

_IDENTITY_TAGS = (
    "det-sum",
    "det-convex",
    "det-pencil",
    "trace-inverse",
    "trace-product",
    "trace-power-k",
    "trace-square",
    "homogeneity-additivity",
)

_CLASSES = {cls.value: cls for cls in MatrixClass}


def _default_seed() -> int:
    return int(os.environ.get("PRESERVER_LAB_SEED", "0"))


def _parse_scalar(text: str) -> complex:
    text = text.strip().replace("i", "j")
    try:
        z = complex(text)
    except ValueError as exc:
        raise ValueError(f"cannot parse scalar {text!r}") from exc
    return z


def _parse_weights(text: str) -> list[tuple[complex, complex]]:
    """Semicolon-separated list of 's,t' pairs; components may be complex."""
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"weight pair {chunk!r} is not of the form s,t")
        pairs.append((_parse_scalar(parts[0]), _parse_scalar(parts[1])))
    if not pairs:
        raise ValueError("empty weight list")
    return pairs


def _pencil_grid(n: int) -> list[complex]:
    grid = [1.0 + 0.0j, -1.0 + 0.0j, 1j, 2.0 + 1.0j]
    v = 2.0
    while len(grid) < max(4, n + 1):  # degree-n polynomial identity needs n+1 points
        grid.append(complex(v))
        v += 1.0
    return grid


def _default_weights(identity: str, n: int):
    if identity == "det-sum":
        return [(1.0 + 0.0j, 1.0 + 0.0j)]
    if identity == "det-convex":
        return [(complex(t), complex(1.0 - t)) for t in (0.0, 0.25, 0.5, 0.75, 1.0)]
    if identity == "det-pencil":
        return [(1.0 + 0.0j, lam) for lam in _pencil_grid(n)]
    raise ValueError(f"identity {identity} takes no weights")


def _load_map_spec(source: str) -> dict:
    text = source.strip()
    if not text.startswith("{"):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    spec = json.loads(text)
    if not isinstance(spec, dict):
        raise ValueError("map spec must be a JSON object")
    return spec


def _validate_common(args) -> None:
    if args.n < 1:
        raise ValueError("--n must be >= 1")
    if getattr(args, "samples", 1) < 1:
        raise ValueError("--samples must be >= 1")
    if getattr(args, "tol", 1.0) <= 0.0:
        raise ValueError("--tol must be > 0")


def _emit(report: dict, out_path: str | None) -> None:
    text = dumps_stable(report) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_verify(args) -> int:
    _validate_common(args)
    cls = _CLASSES[args.klass]
    map_fn = realize_map(_load_map_spec(args.map), args.n)
    identity = args.identity
    power_match = re.fullmatch(r"trace-power-(\d+)", identity)
    if identity.startswith("det-"):
        weights = _parse_weights(args.weights) if args.weights else _default_weights(identity, args.n)
        report = verify_det_identity(map_fn, cls, args.n, weights, args.samples,
                                     args.seed, args.tol, identity=identity)
    elif identity == "trace-inverse":
        report = verify_trace_identity(map_fn, cls, args.n, "inverse", args.samples, args.seed, args.tol)
    elif identity == "trace-product":
        report = verify_trace_identity(map_fn, cls, args.n, "product", args.samples, args.seed, args.tol)
    elif identity == "trace-square":
        report = verify_trace_identity(map_fn, cls, args.n, "square", args.samples, args.seed, args.tol)
    elif identity == "trace-power-k" or power_match:
        k = int(power_match.group(1)) if power_match else args.k
        report = verify_trace_identity(map_fn, cls, args.n, "power", args.samples,
                                       args.seed, args.tol, power=k)
    elif identity == "homogeneity-additivity":
        report = check_homogeneity_additivity(map_fn, cls, args.n, args.samples, args.seed, args.tol)
    else:
        raise ValueError(f"unknown identity tag {identity!r}")
    _emit(report.to_dict(), args.out)
    return 0 if report.passed else 2


def _cmd_recover(args) -> int:
    _validate_common(args)
    cls = _CLASSES[args.klass]
    map_fn = realize_map(_load_map_spec(args.map), args.n)
    try:
        p, residual = recover(map_fn, cls, args.n, tol=args.tol)
    except RECOVERY_ERRORS as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.out)
        print(f"recovery failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    _emit(recovery_to_json(p, residual), args.out)
    return 0


def _oracle_minkowski(args) -> tuple[dict, bool]:
    worst_violation = 0.0
    false_equalities = 0
    for t in range(args.samples):
        a = sample(MatrixClass.PD, args.n, mix_seed(args.seed, t, 0))
        b = sample(MatrixClass.PD, args.n, mix_seed(args.seed, t, 1))
        res = check_minkowski(a, b)
        worst_violation = max(worst_violation, res.rhs - res.lhs)
        if res.equality and not res.proportional:
            false_equalities += 1
    eq_pairs = max(1, args.samples // 10)
    worst_gap = 0.0
    for t in range(eq_pairs):
        a = sample(MatrixClass.PD, args.n, mix_seed(args.seed, t, 2))
        lam = 0.25 + 3.0 * (t % 7) / 7.0
        res = check_minkowski(a, lam * a)
        if not (res.equality and res.proportional):
            false_equalities += 1
        worst_gap = max(worst_gap, abs(res.lhs - res.rhs) / max(res.lhs, 1e-30))
    ok = worst_violation <= 1e-10 and false_equalities == 0 and worst_gap <= 1e-8
    report = {
        "oracle": "minkowski",
        "n": args.n,
        "samples": args.samples,
        "proportional_pairs": eq_pairs,
        "max_direction_violation": float(worst_violation),
        "max_equality_gap": float(worst_gap),
        "false_equalities": int(false_equalities),
        "pass": ok,
    }
    return report, ok


def _oracle_jacobi(args) -> tuple[dict, bool]:
    h = 1e-4
    worst = 0.0
    total = 0.0
    for t in range(args.samples):
        a0 = sample(MatrixClass.FULL, args.n, mix_seed(args.seed, t, 0))
        adir = sample(MatrixClass.FULL, args.n, mix_seed(args.seed, t, 1))
        adir = adir / np.linalg.norm(adir)
        rng = np.random.default_rng(mix_seed(args.seed, t, 2))
        t0 = float(rng.uniform(0.0, 1.0))
        res = check_jacobi(a0, adir, t0, h)
        worst = max(worst, res.residual)
        total += res.residual
    ok = worst <= 1e-6
    report = {
        "oracle": "jacobi",
        "n": args.n,
        "samples": args.samples,
        "h": h,
        "max_residual": float(worst),
        "mean_residual": float(total / max(args.samples, 1)),
        "pass": ok,
    }
    return report, ok


def _oracle_kadison_choi(args) -> tuple[dict, bool]:
    rng = np.random.default_rng(mix_seed(args.seed, 0xF1A9))
    g = (rng.standard_normal((args.n, args.n)) + 1j * rng.standard_normal((args.n, args.n)))
    u, _ = np.linalg.qr(g)
    maps = {
        "unitary-congruence": lambda a: u.conj().T @ a @ u,
        "pinching": pinching,
    }
    sub = {}
    ok = True
    for name, fn in maps.items():
        rep = check_kadison_choi(fn, args.n, args.samples, args.seed, tol=args.tol)
        sub[name] = rep.to_dict()
        ok = ok and rep.passed
    return {"oracle": "kadison-choi", "n": args.n, "samples": args.samples, "maps": sub, "pass": ok}, ok


def _oracle_dual_witness(args) -> tuple[dict, bool]:
    cls = _CLASSES[args.klass]
    found = 0
    min_margin = float("inf")
    for t in range(args.samples):
        a = sample(cls, args.n, mix_seed(args.seed, t))
        b = dual_witness(a, cls)
        margin = abs(np.trace(np.asarray(a) @ b)) / float(np.linalg.norm(a))
        min_margin = min(min_margin, margin)
        found += 1
    ok = found == args.samples and min_margin >= 1e-6
    report = {
        "oracle": "dual-witness",
        "class": cls.value,
        "n": args.n,
        "samples": args.samples,
        "found": found,
        "min_margin": float(min_margin),
        "pass": ok,
    }
    return report, ok


def _cmd_oracle(args) -> int:
    _validate_common(args)
    runner = {
        "minkowski": _oracle_minkowski,
        "jacobi": _oracle_jacobi,
        "kadison-choi": _oracle_kadison_choi,
        "dual-witness": _oracle_dual_witness,
    }[args.oracle]
    report, ok = runner(args)
    _emit(report, args.out)
    return 0 if ok else 2


def _cmd_counterexample(args) -> int:
    scale = 0.0 if args.generator == "zero" else 1.0
    map_fn = lambda a: remark1_map(a, generator_scale=scale)  # noqa: E731
    square = verify_trace_identity(map_fn, MatrixClass.PD, args.n, "square",
                                   args.samples, args.seed, 1e-9)
    add = check_homogeneity_additivity(map_fn, MatrixClass.PD, args.n,
                                       args.samples, args.seed, 1e-8)
    det = verify_det_identity(map_fn, MatrixClass.PD, args.n,
                              [(1.0 + 0.0j, 1.0 + 0.0j)], args.samples,
                              args.seed, 1e-8, identity="det-sum")
    signature = {
        "trace-square": "pass" if square.passed else "fail",
        "additivity": "fail" if not add.passed else "pass",
        "det-sum": "fail" if not det.passed else "pass",
    }
    expected = (square.passed
                and not add.passed and add.max_residual >= 1e-3
                and not det.passed and det.max_residual >= 1e-3)
    report = {
        "command": "counterexample",
        "n": args.n,
        "samples": args.samples,
        "generator": args.generator,
        "signature": signature,
        "trace_square_max_residual": square.max_residual,
        "additivity_max_residual": add.max_residual,
        "det_sum_max_residual": det.max_residual,
        "pass": bool(expected),
    }
    _emit(report, args.out)
    return 0 if expected else 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="preserver-lab",
                                     description="verify, recover and probe determinant/trace preserving matrix maps")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_class=True, with_map=False):
        if with_class:
            p.add_argument("--class", dest="klass", choices=sorted(_CLASSES), required=with_class)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--seed", type=int, default=_default_seed())
        p.add_argument("--tol", type=float, default=1e-8)
        if with_map:
            p.add_argument("--map", required=True, help="map spec file path or inline JSON")
        p.add_argument("--out", default=None)

    pv = sub.add_parser("verify", help="run one identity battery against a map spec")
    pv.add_argument("--identity", required=True)
    common(pv, with_map=True)
    pv.add_argument("--weights", default=None, help="semicolon list of s,t pairs (components may be complex)")
    pv.add_argument("--k", type=int, default=2, help="exponent for trace-power-k")
    pv.set_defaults(fn=_cmd_verify)

    pr = sub.add_parser("recover", help="recover canonical parameters of a map spec")
    common(pr, with_map=True)
    pr.set_defaults(fn=_cmd_recover)

    po = sub.add_parser("oracle", help="run a named oracle battery")
    po.add_argument("oracle", choices=("minkowski", "jacobi", "kadison-choi", "dual-witness"))
    po.add_argument("--class", dest="klass", choices=sorted(_CLASSES), default="full")
    po.add_argument("--n", type=int, required=True)
    po.add_argument("--samples", type=int, default=100)
    po.add_argument("--seed", type=int, default=_default_seed())
    po.add_argument("--tol", type=float, default=1e-8)
    po.add_argument("--out", default=None)
    po.set_defaults(fn=_cmd_oracle)

    pc = sub.add_parser("counterexample", help="check the norm-dependent conjugation signature")
    pc.add_argument("--n", type=int, default=2)
    pc.add_argument("--samples", type=int, default=100)
    pc.add_argument("--seed", type=int, default=_default_seed())
    pc.add_argument("--generator", choices=("standard", "zero"), default="standard")
    pc.add_argument("--out", default=None)
    pc.set_defaults(fn=_cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports to stderr already
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except RECOVERY_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3 if args.command == "recover" else 2
    except (PreserverLabError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
