"""Command-line interface: ``higgs validate|convert|act|verify|twistor``.

All input and output is JSON. Exit codes: 0 success, 1 domain failure
(invalid period matrix, genus mismatch, failed check), 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import hyperkahler as hk
from . import jsonio
from . import moduli as md
from . import twistor as tw
from . import verify
from .errors import CoordinateMismatch, HiggsError
from .period_matrix import LATTICE_TOL, validate

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad arguments or unreadable input; maps to exit code 2."""


def parse_complex(text: str) -> complex:
    """Parse ``2``, ``-1.5``, ``i``, ``1+2i`` or ``3j``."""
    s = text.strip().replace(" ", "").replace("i", "j")
    if s in ("j", "+j", "-j"):
        s = s.replace("j", "1j")
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def _load_json(source: str):
    """Inline JSON if ``source`` parses as such, otherwise a path to a JSON file."""
    try:
        return json.loads(source)
    except json.JSONDecodeError:
        pass
    try:
        with open(source) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {source}: {exc}") from None


def _structural(fn, *args):
    """Run a JSON decoder; structural problems are usage errors, domain errors pass through."""
    try:
        return fn(*args)
    except HiggsError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _load_pi(source):
    if source is None:
        return None
    raw = _structural(jsonio.period_matrix_from_json, _load_json(source))
    return validate(raw)


def _require_pi(P, what):
    if P is None:
        raise UsageError(f"{what} needs --pi")
    return P


def _emit(obj):
    sys.stdout.write(jsonio.dumps(obj) + "\n")


# --- subcommands ---------------------------------------------------------------------

def cmd_validate(args) -> int:
    raw = _structural(jsonio.period_matrix_from_json, _load_json(args.path))
    try:
        P = validate(raw)
    except HiggsError as exc:
        _emit({"valid": False, "error": type(exc).__name__, "message": str(exc)})
        return EXIT_DOMAIN
    _emit({"valid": True, "k": P.k})
    return EXIT_OK


def cmd_convert(args) -> int:
    x = _structural(jsonio.point_from_json, _load_json(args.point))
    if x.system != args.from_system:
        raise UsageError(f"point is in {x.system} coordinates, not {args.from_system}")
    P = _load_pi(args.pi)
    if "dolbeault" in (args.from_system, args.to_system):
        _require_pi(P, "conversion to or from Dolbeault coordinates")
    y = md.convert(x, args.to_system, P, args.tol)
    out = jsonio.point_to_json(y)
    if args.roundtrip:
        back = md.convert(y, args.from_system, P, args.tol)
        out["roundtrip_residual"] = md.distance(back, md.convert(x, args.from_system, P, args.tol), P)
    _emit(out)
    return EXIT_OK


def _alphabeta_from_json(obj):
    alpha = np.asarray(obj["alpha"], dtype=float)
    beta = np.asarray(obj["beta"], dtype=float)
    if alpha.shape != beta.shape or alpha.ndim != 1:
        raise ValueError("alpha and beta must be real vectors of equal length")
    return alpha, beta


def _act_on_alphabeta(args, obj) -> int:
    P = _require_pi(_load_pi(args.pi), "acting on Higgs-field periods")
    alpha, beta = _structural(_alphabeta_from_json, obj)
    if alpha.size != P.k:
        raise HiggsError(f"genus mismatch: periods of length {alpha.size} with k={P.k}")
    if args.cstar is None:
        raise UsageError("Higgs-field periods support only --cstar")
    out = hk.cstar_act_periods(P, parse_complex(args.cstar), np.concatenate([alpha, beta]))
    _emit({"system": "higgs_periods", "k": P.k, "alpha": out[:P.k].tolist(), "beta": out[P.k:].tolist()})
    return EXIT_OK


def cmd_act(args) -> int:
    obj = _load_json(args.point)
    if isinstance(obj, dict) and obj.get("system") == "higgs_periods":
        return _act_on_alphabeta(args, obj)
    x = _structural(jsonio.point_from_json, obj)
    P = _load_pi(args.pi)
    if P is not None and P.k != x.k:
        raise CoordinateMismatch(f"genus mismatch: point has k={x.k}, Pi has k={P.k}")
    system = x.system
    if args.iota is not None:
        if system == "dolbeault":
            _require_pi(P, "a Dolbeault real structure")
        y = md.real_structure(x, args.iota, P, args.tol)
    elif args.flow is not None:
        try:
            n_text, t_text = args.flow.split(",")
            n, t = int(n_text), float(t_text)
        except ValueError:
            raise UsageError("--flow expects n,t") from None
        d = md.convert(x, "derham", _require_pi(P, "--flow") if system == "dolbeault" else P, args.tol)
        y = md.convert(md.hamiltonian_flow(d, n, t), system, P, args.tol)
    else:
        P = _require_pi(P, "--cstar and --gradient")
        if args.cstar is not None:
            lam = parse_complex(args.cstar)
            if lam == 0:
                raise HiggsError("lambda must be nonzero")
        else:
            lam = np.exp(-float(args.gradient))
        dol = md.convert(x, "dolbeault", P, args.tol)
        y = md.convert(md.DolbeaultPoint(dol.q, lam * dol.p), system, P, args.tol)
    _emit(jsonio.point_to_json(y))
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = args.seed
    if seed is None:
        env = os.environ.get("HIGGS_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError(f"HIGGS_SEED must be an integer, got {env!r}") from None
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(verify.SUITES)}")
    P = _load_pi(args.pi)
    rep = verify.report(args.suite, seed, args.samples, P, args.tol)
    _emit(rep)
    return EXIT_OK if rep["passed"] else EXIT_DOMAIN


def _line_from_json(obj):
    if isinstance(obj, dict):
        obj = obj["v0"]
    return tw.TwistorLine(jsonio.parse_cvec(obj))


def cmd_twistor(args) -> int:
    if args.line is not None:
        line = _structural(_line_from_json, _load_json(args.line))
        if args.at is not None:
            bases = [parse_complex(args.at)]
        elif args.sample is not None:
            if args.sample < 1:
                raise UsageError("--sample needs a positive count")
            bases = [complex(np.exp(2j * np.pi * j / args.sample)) for j in range(args.sample)]
        else:
            raise UsageError("--line needs --sample N or --at ZETA")
        points = [jsonio.twistor_point_to_json(tw.line_eval(line, 1, z)) for z in bases]
        _emit({"line": jsonio.twistor_line_to_json(line), "points": points})
        return EXIT_OK
    source = args.transition if args.transition is not None else args.realstruct
    pt = _structural(jsonio.twistor_point_from_json, _load_json(source))
    if args.transition is not None:
        out = tw.to_chart(pt, 2 if pt.chart == 1 else 1)
    else:
        out = tw.real_structure(pt)
    _emit(jsonio.twistor_point_to_json(out))
    return EXIT_OK


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="higgs", description="Rank-one Higgs bundle moduli toolkit.")
    parser.add_argument("--tol", type=float, default=None,
                        help="override check tolerances in verify and the lattice tolerance elsewhere")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a period matrix")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    systems = ("betti", "derham", "dolbeault")
    p = sub.add_parser("convert", help="change coordinate system")
    p.add_argument("--from", dest="from_system", choices=systems, required=True)
    p.add_argument("--to", dest="to_system", choices=systems, required=True)
    p.add_argument("--pi")
    p.add_argument("--point", required=True)
    p.add_argument("--roundtrip", action="store_true")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("act", help="apply an action, flow or real structure")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cstar", metavar="LAMBDA")
    g.add_argument("--flow", metavar="N,T")
    g.add_argument("--gradient", metavar="T", type=float)
    g.add_argument("--iota", choices=("U", "R"))
    p.add_argument("--pi")
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--pi")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--suite", default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("twistor", help="twistor lines, chart transitions, real structure")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--line", metavar="V0")
    g.add_argument("--transition", metavar="POINT")
    g.add_argument("--realstruct", metavar="POINT")
    p.add_argument("--sample", type=int)
    p.add_argument("--at", metavar="ZETA")
    p.set_defaults(func=cmd_twistor)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.tol is None and args.command != "verify":
        args.tol = LATTICE_TOL
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"higgs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HiggsError, ValueError) as exc:
        print(f"higgs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
