"""Command-line interface.

Cubics are given by their raw coefficients ``p0,p1,p2,p3`` meaning
p0 x^3 + p1 x^2 y + p2 x y^2 + p3 y^3.  Output is JSON unless ``--pretty``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import factor as factor_mod
from . import orbits, verify
from .cubics import BinaryCubic, qn
from .errors import CubixError, InvalidField, ParseError
from .fields import parse_field


def _classify_json(P: BinaryCubic) -> dict:
    s = orbits.classify(P)
    out = {
        "stratum": s.kind,
        "qn": str(s.qn),
        "q": None if s.q is None else str(s.q),
        "invariant": {"q": None, "cube_class": None},
        "reducible": None if P.is_zero() else factor_mod.is_reducible(P),
    }
    if s.extension is not None:
        out["extension"] = str(s.extension)
    if s.kind != orbits.ZERO:
        inv = orbits.invariant(P)
        out["invariant"] = {
            "q": None if inv.q is None else str(inv.q),
            "cube_class": None if inv.c is None else str(inv.c.rep),
        }
    return out


def cmd_classify(args, F) -> dict:
    return _classify_json(_cubic(args, F))


def cmd_invariant(args, F) -> dict:
    P = _cubic(args, F)
    inv = orbits.gl_invariant(P) if args.group == "gl2" else orbits.invariant(P)
    out = inv.to_json()
    if inv.extension is not None:
        out["extension"] = str(inv.extension)
    return out


def cmd_factor(args, F) -> dict:
    P = _cubic(args, F)
    fac = factor_mod.full_factor(P)
    out = fac.to_json()
    if args.check:
        out["check"] = fac.expand() == P
    return out


def cmd_same_orbit(args, F) -> dict:
    P, P2 = _cubic(args, F), _cubic(args, F, "cubic2")
    test = orbits.same_gl2_orbit if args.group == "gl2" else orbits.same_sl2_orbit
    return {"group": args.group, "same": test(P, P2)}


def cmd_compose(args, F) -> dict:
    P, P2 = _cubic(args, F), _cubic(args, F, "cubic2")
    M = F(args.disc) if args.disc is not None else qn(P)
    rep = orbits.orbit_compose(M, P, P2)
    return {"disc": str(M), "cubic": rep.to_json(), "classify": _classify_json(rep)}


def cmd_census(args, F) -> dict:
    return verify.census(F).to_json()


def cmd_verify(args, F) -> dict:
    report = verify.verify_suite(args.seed, args.trials, F)
    out = report.to_json(timing=False)
    if args.suite in ("exhaustive", "all") and F.order is not None and F.order <= 7:
        extra = {
            "moment_image": verify.moment_image_mismatches(F),
            "psi_image": verify.psi_image_mismatches(F),
        }
        out["exhaustive"] = extra
        out["passed"] = out["passed"] and not any(extra.values())
    return out


def cmd_root(args, F) -> dict:
    t = factor_mod.cardano_root(F(args.p), F(args.q))
    return {"p": str(F(args.p)), "q": str(F(args.q)), "root": None if t is None else str(t)}


COMMANDS = {
    "classify": cmd_classify,
    "invariant": cmd_invariant,
    "factor": cmd_factor,
    "same-orbit": cmd_same_orbit,
    "compose": cmd_compose,
    "census": cmd_census,
    "verify": cmd_verify,
    "root": cmd_root,
}

NEEDS_CUBIC = {"classify", "invariant", "factor", "same-orbit", "compose"}
NEEDS_CUBIC2 = {"same-orbit", "compose"}


def _cubic(args, F, attr="cubic") -> BinaryCubic:
    return BinaryCubic.parse(F, getattr(args, attr))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubix",
        description="Symplectic covariants, orbits and factorization of binary cubics.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", required=True,
                        help="rat, fp:<p>, quad:rat:<D> or quad:fp:<p>:<d>")
    common.add_argument("--cubic", help="raw coefficients p0,p1,p2,p3")
    common.add_argument("--cubic2", help="second cubic, same format")
    common.add_argument("--group", choices=("sl2", "gl2"), default="sl2")
    common.add_argument("--disc", help="common value M of Q_n for compose")
    common.add_argument("--p", help="coefficient p of t^3 + p t + q")
    common.add_argument("--q", help="coefficient q of t^3 + p t + q")
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--suite", choices=("identities", "exhaustive", "all"), default="all")
    common.add_argument("--json", metavar="PATH", help="also write the JSON result here")
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument("--check", action="store_true", help="re-expand factorizations")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=f"{name} command")
    return parser


def _pretty(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in NEEDS_CUBIC and not args.cubic:
        parser.error(f"{args.command} needs --cubic")
    if args.command in NEEDS_CUBIC2 and not args.cubic2:
        parser.error(f"{args.command} needs --cubic2")
    if args.command == "root" and (args.p is None or args.q is None):
        parser.error("root needs --p and --q")
    if args.command == "verify" and args.trials < 1:
        parser.error("--trials must be at least 1")
    code = 0
    try:
        F = parse_field(args.field)
        result = COMMANDS[args.command](args, F)
        if result.get("passed") is False or result.get("check") is False:
            code = 1
    except CubixError as exc:
        result = {"error": exc.name, "message": str(exc)}
        # a malformed field or cubic string is a usage problem, not a domain one
        code = 2 if isinstance(exc, (ParseError, InvalidField)) else 1
    text = json.dumps(result, indent=2)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    print(_pretty(result) if args.pretty else text)
    return code


if __name__ == "__main__":
    sys.exit(main())
