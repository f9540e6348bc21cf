"""Command-line entry point ``qkloop``.

Exit codes: 0 success, 1 a FAIL verdict (or input not on the cone),
2 usage, parse or config errors, 3 internal or I/O errors.
"""

import argparse
import dataclasses
import json
import sys

from .coeff_ring import RingConfig, RingError, format_mono
from .config import ConfigError, SuiteConfig, load_config
from .cyclotomic import classify_poles
from .loop_algebra import LoopError, format_loop, omega, project_split
from .parser import ExprError, parse_lambda, parse_loop
from .point_theory import ConeError, DegenerateInput, TheoryParams, cone_membership, j_function
from .report import emit_report
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_ring(spec):
    """``"D=4,N=4,Q=1"`` (any subset, any order) to a :class:`RingConfig`."""
    fields = {"D": 4, "N": None, "Q": 1}
    if spec:
        for part in spec.split(","):
            key, sep, value = part.partition("=")
            key = key.strip()
            if not sep or key not in fields:
                raise UsageError(f"bad --ring entry {part!r}; expected D=..,N=..,Q=..")
            try:
                fields[key] = int(value)
            except ValueError:
                raise UsageError(f"--ring {key} must be an integer") from None
    try:
        return RingConfig(novikov_count=fields["Q"], sym_cutoff=fields["N"], truncation_degree=fields["D"])
    except ValueError as exc:
        raise UsageError(f"--ring: {exc}") from None


def _dump(obj):
    return json.dumps(obj, ensure_ascii=False)


def _cmd_eval(args, ring, out):
    out.write(format_loop(parse_loop(args.expr, ring)) + "\n")
    return EXIT_OK


def _cmd_project(args, ring, out):
    plus, minus = project_split(parse_loop(args.expr, ring))
    out.write(_dump({"plus": format_loop(plus), "minus": format_loop(minus)}) + "\n")
    return EXIT_OK


def _cmd_omega(args, ring, out):
    value = omega(parse_loop(args.f, ring), parse_loop(args.g, ring))
    out.write(_dump(str(value)) + "\n")
    return EXIT_OK


def _theory(args, ring):
    try:
        return TheoryParams(parse_lambda(args.tau, ring), parse_lambda(args.t, ring))
    except RingError as exc:
        raise UsageError(str(exc)) from None


def _cmd_j(args, ring, out):
    p = _theory(args, ring)
    out.write(_dump({"tau": str(p.tau), "t": str(p.t), "J": format_loop(j_function(p))}) + "\n")
    return EXIT_OK


def _certificate_json(cert, on_cone):
    if cert is None:
        return {"on_cone": on_cone}
    return {
        "on_cone": on_cone,
        "tau": str(cert.tau),
        "y": format_loop(cert.y),
        "residual": format_loop(cert.residual),
        "iterations": cert.iterations,
    }


def _cmd_cone_check(args, ring, out):
    f = parse_loop(args.expr, ring)
    t = parse_lambda(args.t, ring)
    try:
        cert = cone_membership(f, t)
    except DegenerateInput as exc:
        raise UsageError(str(exc)) from None
    except ConeError as exc:
        payload = _certificate_json(exc.certificate, False)
        payload["error"] = str(exc)
        out.write(_dump(payload) + "\n")
        return EXIT_FAIL
    out.write(_dump(_certificate_json(cert, True)) + "\n")
    return EXIT_OK


def _parse_ms(text):
    try:
        ms = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--m expects a comma-separated list of integers, got {text!r}") from None
    if any(m < 1 for m in ms):
        raise UsageError("--m entries must be positive")
    return ms


def _window_terms(ring, coeffs):
    """``{(component, monomial): number}`` as ``{"N1": "1/2+zeta", ...}``."""
    return {format_mono(ring, m) or "1": str(v) for (_, m), v in sorted(coeffs.items())}


def _cmd_adelic(args, ring, out):
    f = parse_loop(args.expr, ring)
    ms = _parse_ms(args.m)
    prof = classify_poles(f, ms, window=args.window)
    payload = {
        "poles": [{"m": m, "order": k} for m, k in prof.poles],
        "passes_regularity": prof.passes_regularity,
        "offending_factor": None if prof.offending_factor is None else [str(c) for c in prof.offending_factor.c],
        "localized": [
            {
                "m": w.m,
                "root_index": w.root_index,
                "orders": {str(w.lo + i): _window_terms(ring, c) for i, c in enumerate(w.coeffs)},
            }
            for w in prof.localized
        ],
    }
    if prof.expansion_at_one is not None:
        payload["expansion_at_one"] = {str(e): str(v[0]) for e, v in prof.expansion_at_one.items()}
    out.write(_dump(payload) + "\n")
    return EXIT_OK if prof.passes_regularity else EXIT_FAIL


def _cmd_verify(args, ring, out):
    cfg = load_config(args.config) if args.config else SuiteConfig()
    if args.workers is not None:
        cfg = dataclasses.replace(cfg, workers=args.workers)
    reports = run_suite(cfg)
    path = args.output or cfg.output
    text = emit_report(reports, path)
    if path is None:
        out.write(text + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def build_parser():
    ap = _ArgumentParser(prog="qkloop", description="Exact loop-space computations for quantum K-theory of a point.")
    ap.add_argument("--ring", default=None, help="ring as D=..,N=..,Q=.. (truncation degree, N-generators, Novikov variables)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("eval", help="print the canonical form of an expression")
    p.add_argument("expr")
    p.set_defaults(run=_cmd_eval)

    p = sub.add_parser("project", help="split a loop into K+ and K- parts")
    p.add_argument("expr")
    p.set_defaults(run=_cmd_project)

    p = sub.add_parser("omega", help="symplectic pairing of two loops")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(run=_cmd_omega)

    p = sub.add_parser("j", help="the J-function at (tau, t)")
    p.add_argument("--tau", default="0")
    p.add_argument("--t", default="0")
    p.set_defaults(run=_cmd_j)

    p = sub.add_parser("cone-check", help="locate a loop on the cone at parameter t")
    p.add_argument("expr")
    p.add_argument("--t", default="0")
    p.set_defaults(run=_cmd_cone_check)

    p = sub.add_parser("adelic", help="pole profile at roots of unity")
    p.add_argument("expr")
    p.add_argument("--m", default="", help="comma-separated conductors for localized expansions")
    p.add_argument("--window", type=int, default=2)
    p.set_defaults(run=_cmd_adelic)

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--config", default=None, help="suite config JSON (default grid when omitted)")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(run=_cmd_verify)
    return ap


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    # options may appear before or after the subcommand
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_hoist_ring(argv))
        ring = parse_ring(args.ring)
        return args.run(args, ring, out)
    except (UsageError, ExprError, ConfigError) as exc:
        err.write(f"qkloop: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"qkloop: I/O error: {exc}\n")
        return EXIT_INTERNAL
    except (LoopError, RingError, ArithmeticError) as exc:
        err.write(f"qkloop: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        err.write(f"qkloop: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


def _hoist_ring(argv):
    """Move ``--ring X`` / ``--ring=X`` in front of the subcommand."""
    front, rest = [], []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--ring" and i + 1 < len(argv):
            front += argv[i : i + 2]
            i += 2
            continue
        if a.startswith("--ring="):
            front.append(a)
        else:
            rest.append(a)
        i += 1
    return front + rest


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
