"""Command-line front end.

Subcommands: catalog | build | solve | measure | sweep | verify.
Angles are radians; "pi" fractions like "pi/4", "-pi/2", "3pi/2" parse too.
stdout carries data, stderr carries diagnostics.  Exit codes: 0 success,
1 verification failure, 2 unknown catalog name (and argument errors),
3 degenerate spectrum, 4 output I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import verify as verify_mod
from .biortho import DegenerateSpectrum, bases_from_config, basis_from_alpha, parse_config
from .constructor import (
    SAME_THETA_VARIANTS,
    UnknownName,
    build_state,
    catalog,
    catalog_entries,
    solve_weight,
)
from .entanglement import (
    SingularDenominator,
    average_entropy,
    average_entropy_closed_form,
    case_b_alpha,
    case_b_concurrence,
    concurrence,
    concurrence_closed_form,
    embed,
    normalize,
)

_PI_RE = re.compile(r"^\s*(-)?\s*(\d+(?:\.\d*)?)?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$",
                    re.IGNORECASE)


def parse_angle(text: str) -> float:
    """Parse a radian value, accepting 'pi' fractions like '3pi/2'."""
    m = _PI_RE.match(text)
    if m:
        sign = -1.0 if m.group(1) else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        return sign * num * math.pi / den
    return float(text)


def _fmt(x: float) -> str:
    return repr(float(x))


# -- per-command implementations -------------------------------------------------


def _entry_row(entry) -> dict:
    return {
        "name": entry.name,
        "group": entry.group,
        "product": str(entry.spec),
        "weight": str(entry.weight),
        "state": str(entry.expected),
        "note": entry.note,
    }


def cmd_catalog(args) -> int:
    entries = catalog_entries()
    variants = list(SAME_THETA_VARIANTS.values())
    if args.filter:
        needle = args.filter.lower()
        entries = [e for e in entries if needle in e.name.lower() or needle in e.group.lower()]
        variants = [e for e in variants if needle in e.name.lower() or needle in e.group.lower()]
    if args.format == "json":
        payload = {"entries": [_entry_row(e) for e in entries],
                   "same_theta_variants": [_entry_row(e) for e in variants]}
        print(json.dumps(payload, ensure_ascii=False, indent=2))
        return 0
    for e in entries:
        note = f"   # {e.note}" if e.note else ""
        print(f"{e.name:<8} {e.group:<12} {str(e.spec):<34} w = {str(e.weight):<22} "
              f"-> {e.expected}{note}")
    if variants:
        print("# same-generator variants (Table block with w = 1):")
        for e in variants:
            print(f"{e.name:<8} {e.group:<12} {str(e.spec):<34} w = {str(e.weight):<22} "
                  f"-> {e.expected}")
    return 0


def cmd_build(args) -> int:
    entry = catalog(args.name)
    state = build_state(entry.weight, entry.spec)
    if args.format == "json":
        print(json.dumps({"name": entry.name, "product": str(entry.spec),
                          "weight": str(entry.weight), "terms": state.to_json_terms()},
                         ensure_ascii=False, indent=2))
    elif args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["labels", "re", "im"])
        for item in state.to_json_terms():
            writer.writerow([";".join(item["labels"]), _fmt(item["re"]), _fmt(item["im"])])
    else:
        print(str(state))
    return 0


def cmd_solve(args) -> int:
    entry = catalog(args.name)
    weight = solve_weight(entry.expected, entry.spec)
    matches = weight == entry.weight
    if args.format == "json":
        print(json.dumps({"name": entry.name, "weight": str(weight),
                          "matches_catalog": matches}, ensure_ascii=False, indent=2))
    else:
        print(f"weight: {weight}")
        print(f"matches catalog weight: {'yes' if matches else 'no'}")
    return 0


def _angles_from_args(args, n_sites: int) -> list[float]:
    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
        return [b.alpha for b in bases_from_config(cfg, n_sites)]
    if args.s is not None or args.delta is not None:
        if args.s is None or args.delta is None:
            raise SystemExit2("case-b parameterization needs both --s and --delta")
        alpha = case_b_alpha(args.s, args.delta)
        return [alpha] * n_sites
    per_site = [args.alpha1, args.alpha2, args.alpha3][:n_sites]
    if args.alpha is not None:
        per_site = [args.alpha if a is None else a for a in per_site]
    if any(a is None for a in per_site):
        raise SystemExit2(
            f"need angles for {n_sites} sites: --alpha or --alpha1..--alpha{n_sites}")
    return [float(a) for a in per_site]


class SystemExit2(Exception):
    """Argument-level error surfaced with exit code 2."""


def _closed_form_for(name: str, measure: str, angles: list[float],
                     case_b: tuple[float, float] | None) -> float | None:
    try:
        if measure == "concurrence":
            bell_name = name.removesuffix("-same") + ("-" if name.endswith("-same") else "")
            if case_b is not None and bell_name in ("B2-", "B3-"):
                return case_b_concurrence(*case_b)
            return concurrence_closed_form(bell_name, angles[0], angles[1])
        key = name.replace("(", "").replace(")", "").replace(",", "")
        if key.startswith("G"):
            return average_entropy_closed_form("G", *angles)
        if key in ("W7", "W7+++", "W7---"):
            return average_entropy_closed_form("W7", *angles)
        if key in ("W6-+-", "W6+-+"):
            return average_entropy_closed_form("W6", *angles)
    except (ValueError, SingularDenominator):
        return None
    return None


def _measure_value(name: str, measure: str, angles: list[float]) -> float:
    entry = catalog(name)
    state = build_state(entry.weight, entry.spec)
    if measure == "concurrence":
        if state.n_sites != 2:
            raise SystemExit2(f"{name} is not a two-site state")
        bases = [basis_from_alpha(a) for a in angles]
        return concurrence(normalize(embed(state, bases)))
    if state.n_sites != 3:
        raise SystemExit2(f"{name} is not a three-site state")
    bases = [basis_from_alpha(a) for a in angles]
    return average_entropy(embed(state, bases))


def cmd_measure(args) -> int:
    entry = catalog(args.name)
    state_sites = entry.spec.n_sites
    angles = _angles_from_args(args, state_sites)
    case_b = (args.s, args.delta) if args.s is not None and args.delta is not None else None
    value = _measure_value(args.name, args.measure, angles)
    closed = _closed_form_for(args.name, args.measure, angles, case_b)
    inputs = {f"alpha{i + 1}": angles[i] for i in range(state_sites)}
    if case_b is not None:
        inputs.update({"s": args.s, "delta": args.delta})
    row = {"name": args.name, "measure": args.measure, "inputs": inputs, "value": value}
    if closed is not None:
        row["closed_form"] = closed
        row["abs_diff"] = abs(value - closed)
    if args.format == "json":
        print(json.dumps(row, ensure_ascii=False, indent=2))
    else:
        bits = [f"{k}={_fmt(v)}" for k, v in inputs.items()]
        line = f"{args.name} {args.measure}: value={_fmt(value)}"
        if closed is not None:
            line += f" closed_form={_fmt(closed)} abs_diff={_fmt(abs(value - closed))}"
        print(" ".join(bits))
        print(line)
    return 0


_SWEEP_VARS = ("alpha", "alpha1", "alpha2", "alpha3", "s", "delta")


def _sweep_grid(args) -> tuple[list[str], list[list[float]]]:
    names = args.var
    ranges = args.range
    steps = args.steps
    if not names:
        raise SystemExit2("sweep needs at least one --var")
    if len(names) > 2:
        raise SystemExit2("at most two sweep variables are supported")
    if len(ranges) != len(names):
        raise SystemExit2("need one --range per --var")
    if len(steps) == 1:
        steps = steps * len(names)
    if len(steps) != len(names):
        raise SystemExit2("need one --steps per --var (or a single shared value)")
    axes = []
    for (lo, hi), n in zip(ranges, steps):
        if n < 2:
            raise SystemExit2("steps must be >= 2")
        if not lo < hi:
            raise SystemExit2("range must have lo < hi")
        axes.append(list(np.linspace(lo, hi, n)))
    return names, axes


def cmd_sweep(args) -> int:
    entry = catalog(args.name)
    n_sites = entry.spec.n_sites
    names, axes = _sweep_grid(args)
    for v in names:
        if v not in _SWEEP_VARS:
            raise SystemExit2(f"unknown sweep variable {v!r}")
    case_b_mode = any(v in ("s", "delta") for v in names) or args.s is not None
    rows = []
    grid = [(a,) for a in axes[0]] if len(axes) == 1 else [
        (a, b) for a in axes[0] for b in axes[1]]
    for point in grid:
        values = dict(zip(names, point))
        if case_b_mode:
            s = values.get("s", args.s)
            delta = values.get("delta", args.delta)
            if s is None or delta is None:
                raise SystemExit2("case-b sweep needs s and delta (swept or fixed)")
            try:
                alpha = case_b_alpha(s, delta)
                angles = [alpha] * n_sites
            except ValueError:
                rows.append((values, float("nan"), None))
                continue
            case_b = (s, delta)
        else:
            fixed = {1: args.alpha1, 2: args.alpha2, 3: args.alpha3}
            angles = []
            for i in range(1, n_sites + 1):
                if f"alpha{i}" in values:
                    angles.append(values[f"alpha{i}"])
                elif "alpha" in values:
                    angles.append(values["alpha"])
                elif fixed[i] is not None:
                    angles.append(fixed[i])
                elif args.alpha is not None:
                    angles.append(args.alpha)
                else:
                    raise SystemExit2(f"no value for alpha{i} in sweep")
            case_b = None
        try:
            value = _measure_value(args.name, args.measure, angles)
        except DegenerateSpectrum:
            value = float("nan")
        closed = _closed_form_for(args.name, args.measure, angles, case_b)
        rows.append((values, value, closed))

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(names) + ["value", "closed_form", "abs_diff"])
    for values, value, closed in rows:
        rec = [_fmt(values[v]) for v in names] + [_fmt(value)]
        if closed is None:
            rec += ["", ""]
        else:
            rec += [_fmt(closed), _fmt(abs(value - closed))]
        writer.writerow(rec)
    try:
        if args.out == "-":
            sys.stdout.write(buffer.getvalue())
        else:
            with open(args.out, "w", newline="") as fh:
                fh.write(buffer.getvalue())
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 4
    return 0


def cmd_verify(args) -> int:
    return verify_mod.run_all(inject_fault=args.inject_fault)


# -- argument plumbing -----------------------------------------------------------


def _add_angle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=parse_angle, help="mixing angle for every site (radians)")
    p.add_argument("--alpha1", type=parse_angle)
    p.add_argument("--alpha2", type=parse_angle)
    p.add_argument("--alpha3", type=parse_angle)
    p.add_argument("--s", type=float, help="case-b coupling (with --delta)")
    p.add_argument("--delta", type=float, help="case-b decay rate (with --s)")
    p.add_argument("--config", help="key-value parameter file (alpha<i> or r<i>,s<i>,t<i>,beta<i>)")


def _parse_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("range must look like LO:HI")
    return parse_angle(lo), parse_angle(hi)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudobell",
        description="Pseudo-Hermitian entangled states from Grassmann coherent-state integrals")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the table of constructions")
    p.add_argument("--filter", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("build", help="integrate one catalog entry to its state")
    p.add_argument("--name", required=True)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="re-derive an entry's weight from its target state")
    p.add_argument("--name", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("measure", help="evaluate an entanglement measure at one point")
    p.add_argument("--name", required=True)
    p.add_argument("--measure", choices=("concurrence", "avg_entropy"), required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_angle_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", help="grid-evaluate a measure and write CSV figure data")
    p.add_argument("--name", required=True)
    p.add_argument("--measure", choices=("concurrence", "avg_entropy"), required=True)
    p.add_argument("--var", action="append", default=[], choices=_SWEEP_VARS)
    p.add_argument("--range", action="append", default=[], type=_parse_range,
                   metavar="LO:HI")
    p.add_argument("--steps", action="append", default=[], type=int)
    p.add_argument("--out", required=True, help="output CSV path ('-' for stdout)")
    _add_angle_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the one-shot verification suite")
    p.add_argument("--inject-fault", default=None, metavar="NAME",
                   help="testing aid: flip the stored weight sign of one entry")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "steps", None) == []:
        args.steps = [50]
    try:
        return args.func(args)
    except UnknownName as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateSpectrum as exc:
        print(f"error: degenerate spectrum: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
