"""Command-line driver.

Exit codes: 0 success, 1 a check failed, 2 invalid curve or input,
3 expression parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .curve import SpectralCurve, find_ramification, locate_ramification
from .engine import (
    Engine,
    run_checks,
    symplectic_compare,
    verify_truncation,
)
from .errors import ParseError, RamrecError
from .field import FieldElement, format_rational, parse_rational
from .parser import parse_to_function
from .ratfun import RationalFunction

ENV_TRUNCATION = "RAMREC_TRUNCATION"


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in ("x", "y", "base_point", "truncation_order"):
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def _base_point(text: Optional[str]) -> Optional[FieldElement]:
    if text is None or text.strip().lower() in ("inf", "infinity", "oo"):
        return None
    return FieldElement.rational(parse_rational(text))


def build_curve(args) -> SpectralCurve:
    cfg = read_config(args.config) if args.config else {}
    x = args.x if args.x is not None else cfg.get("x")
    y = args.y if args.y is not None else cfg.get("y")
    if x is None or y is None:
        raise RamrecError("both x and y must be given (flags or config file)")
    order = cfg.get("truncation_order")
    if os.environ.get(ENV_TRUNCATION):
        order = os.environ[ENV_TRUNCATION]
    if args.truncation is not None:
        order = args.truncation
    bp = args.base_point if args.base_point is not None else cfg.get("base_point")
    curve = SpectralCurve(
        _parse("x", x),
        _parse("y", y),
        _base_point(bp),
        int(order) if order is not None else None,
    )
    return curve.swap() if args.swap else curve


def _parse(which: str, src: str) -> RationalFunction:
    try:
        return parse_to_function(src)
    except ParseError as exc:
        raise ParseError(f"in {which}: {exc.args[0].split(' at position')[0]}", exc.position, exc.expected) from None


def _marker(n: int) -> str:
    return "· " + " ".join(f"dp{i}" for i in range(n))


def _rf_json(rf: RationalFunction) -> dict:
    return rf.to_json()


def _value_text(v: FieldElement) -> str:
    if v.is_rational():
        return format_rational(v.to_rational())
    return v.to_text()


def _curve_json(curve: SpectralCurve) -> dict:
    return {
        "x": str(curve.x),
        "y": str(curve.y),
        "base_point": "inf" if curve.base_point is None else str(curve.base_point),
        "truncation_order": curve.truncation_order,
    }


# ---------------------------------------------------------------------------
# commands


def _head(series, terms: int) -> str:
    """Display form cut off after ``terms`` orders past the valuation."""
    return str(series.truncate(series.valuation + terms))


def cmd_ram(args, curve):
    points = find_ramification(curve)
    sites = locate_ramification(curve)
    result = {
        "points": [
            {
                "location": p.label,
                "index": p.index,
                "conductor": p.conductor,
                "decks": [_head(d, args.terms) for d in p.decks],
                "phi": _head(p.phi_series, args.terms),
            }
            for p in points
        ],
        "warnings": sites.excluded,
    }
    lines = []
    for p in result["points"]:
        zeta = f" (z = exp(2 pi i/{p['conductor']}))" if p["conductor"] > 2 else ""
        lines.append(f"t = {p['location']}: index {p['index']}{zeta}")
        for j, d in enumerate(p["decks"], start=1):
            lines.append(f"  theta_{j}(s) = {d}")
        lines.append(f"  Phi(s) = {p['phi']}")
    for w in sites.excluded:
        lines.append(f"warning: {w}")
    return 0, result, "\n".join(lines)


def cmd_wgn(args, curve):
    engine = Engine(curve, g_max=max(args.g, 2), n_max=args.n)
    rf = engine.w(args.g, args.n)
    text = str(rf) if rf else "0"
    marker = _marker(args.n)
    result = {"g": args.g, "n": args.n, "w": _rf_json(rf), "text": text, "marker": marker}
    if args.verify_truncation:
        verify_truncation(engine, [(args.g, args.n)])
    return 0, result, text if not rf else f"{text} {marker}"


def cmd_free(args, curve):
    if args.g < 2:
        raise RamrecError("free energies are defined for g >= 2")
    engine = Engine(curve, g_max=args.g, n_max=1)
    value = engine.free_energy(args.g)
    if args.verify_truncation:
        verify_truncation(engine, [(args.g, 0)])
    text = _value_text(value)
    return 0, {"g": args.g, "value": text}, text


def cmd_check(args, curve):
    which = set()
    for name in ("symmetry", "dilaton", "w03", "residue"):
        if getattr(args, name) or args.all:
            which.add(name)
    if args.all:
        which |= {"decks", "fast"}
    if not which:
        raise RamrecError("choose at least one of --all, --symmetry, --dilaton, --w03, --residue")
    reports = run_checks(curve, which, args.gmax, args.verify_truncation)
    ok = all(r.passed for r in reports)
    lines = [f"{r.status.upper()}  {r.name}" for r in reports]
    return (0 if ok else 1), {"passed": ok, "reports": [r.to_dict() for r in reports]}, "\n".join(lines)


def cmd_swap_compare(args, curve):
    rep = symplectic_compare(curve, args.gmax)
    d = rep.details
    lines = []
    for side, err in d.get("errors", {}).items():
        lines.append(f"{side}: error {err}")
    for row in d["rows"]:
        rel = "equal" if row["equal"] else "unequal"
        lines.append(f"g={row['g']}: F={row['F']} F_swapped={row['F_swapped']} {rel} (difference {row['difference']})")
    return 0, rep.to_dict(), "\n".join(lines)


COMMANDS = {
    "ram": cmd_ram,
    "wgn": cmd_wgn,
    "free": cmd_free,
    "check": cmd_check,
    "swap-compare": cmd_swap_compare,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--x", help="x(t) as an expression in t")
    common.add_argument("--y", help="y(t) as an expression in t")
    common.add_argument("--config", help="key=value file with x, y, base_point, truncation_order")
    common.add_argument("--base-point", dest="base_point", help="'inf' (default) or a rational number")
    common.add_argument("--truncation", type=int, help="series truncation order")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--swap", action="store_true", help="exchange x and y first")
    common.add_argument(
        "--verify-truncation",
        dest="verify_truncation",
        action="store_true",
        help="recompute at a higher truncation order and compare",
    )

    parser = argparse.ArgumentParser(prog="ramrec", description="Topological recursion on genus-0 spectral curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("ram", parents=[common], help="list ramification points")
    p.add_argument("--terms", type=int, default=6, help="series orders to display (default 6)")
    p = sub.add_parser("wgn", parents=[common], help="print W^g_n")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("free", parents=[common], help="print F_g")
    p.add_argument("--g", type=int, required=True)
    p = sub.add_parser("check", parents=[common], help="run verification batteries")
    p.add_argument("--all", action="store_true")
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--dilaton", action="store_true")
    p.add_argument("--w03", action="store_true")
    p.add_argument("--residue", action="store_true")
    p.add_argument("--gmax", type=int, default=2)
    p = sub.add_parser("swap-compare", parents=[common], help="compare F_g with the swapped curve")
    p.add_argument("--gmax", type=int, default=2)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        curve = build_curve(args)
        code, result, text = COMMANDS[args.command](args, curve)
    except ParseError as exc:
        print(f"ramrec: {exc.reason}: position={exc.position}: {exc}", file=sys.stderr)
        return 3
    except (RamrecError, ValueError) as exc:
        reason = getattr(exc, "reason", "invalid-input")
        msg = " ".join(str(exc).split())
        print(f"ramrec: {reason}: {msg}", file=sys.stderr)
        return 2
    if args.output == "json":
        payload = {"command": args.command, "curve": _curve_json(curve), "exit_code": code, "result": result}
        print(json.dumps(payload, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
