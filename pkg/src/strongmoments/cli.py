"""Command-line interface.

Four subcommands, all emitting JSON (or CSV for tables) on stdout:

* ``moments``    -- two-sided moment table of a spec
* ``classify``   -- criterion report with the determinacy verdict
* ``symmetrize`` -- symmetrized moments, symmetry check, optional bound gap
* ``witness``    -- build and verify a moment-matching distinct pair

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 golden-file
mismatch, 4 witness verification failed.

An optional config file (``key = value`` lines, e.g. ``rel_tol = 1e-10``)
supplies defaults; flags override it.  With ``--golden FILE`` every emitted
numeric that has a matching key in the golden file is compared against it at
the entry's own tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .criteria import classify
from .distfn import DistributionSpec, SinPerturbation, SpecError, realize
from .logreal import LogReal
from .moments import moment_table, symmetrized_moments
from .quad import NonConvergence, QuadratureConfig
from .symmetry import krein_symmetrization_bound, symmetrize
from .witness import verify_witness, witness_spec
from .distfn import is_symmetric

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_GOLDEN = 3
EXIT_WITNESS = 4


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# spec and config plumbing
# --------------------------------------------------------------------------

def _num(x: float) -> str:
    return f"{x:g}"


def spec_key(spec: DistributionSpec) -> str:
    """Canonical golden-file key fragment for a spec."""
    p = spec.params
    if spec.family in ("lognormal-s", "lognormal-h"):
        key = f"{spec.family}/c={_num(float(p['c']))}/d={_num(float(p['d']))}"
    elif spec.family == "family9":
        key = f"family9/d={_num(float(p['d']))}"
    else:
        key = f"seed-{p.get('name')}/rate={_num(float(p.get('rate', 1.0)))}"
    for m in spec.modifiers:
        if isinstance(m, SinPerturbation):
            key += f"/sin-s={_num(m.s)}-k={m.k}"
        else:
            key += f"/{type(m).__name__.lower()}"
    return key


def _build_spec(args) -> DistributionSpec:
    if getattr(args, "spec_json", None):
        return DistributionSpec.from_json(args.spec_json)
    if not args.spec:
        raise UsageError("--spec (or --spec-json) is required")
    fam = args.spec
    if fam in ("lognormal-s", "lognormal-h"):
        if args.c is None or args.d is None:
            raise UsageError(f"{fam} needs --c and --d")
        params = {"c": args.c, "d": args.d}
    elif fam == "family9":
        if args.d is None:
            raise UsageError("family9 needs --d")
        params = {"d": args.d}
    else:
        raise UsageError(f"unknown spec {fam!r}")
    mods = []
    if getattr(args, "s", None) not in (None, 0.0) and fam != "family9":
        mods.append(SinPerturbation(args.s, args.k or 1))
    try:
        return DistributionSpec(fam, params, tuple(mods))
    except SpecError as exc:
        raise UsageError(str(exc)) from exc


def _parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}, expected A:B") from exc
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def _load_config_file(path: str) -> dict[str, float]:
    out: dict[str, float] = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line {line!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            out[key] = float(val)
    return out


def _quad_config(args) -> QuadratureConfig:
    conf = {}
    if getattr(args, "config", None):
        conf = _load_config_file(args.config)
    rel_tol = args.rel_tol if args.rel_tol is not None else conf.get("rel_tol")
    kwargs = {}
    if rel_tol is not None:
        kwargs["rel_tol"] = rel_tol
    for key in ("abs_ln_floor", "max_levels", "truncation_growth"):
        if key in conf:
            kwargs[key] = int(conf[key]) if key == "max_levels" else conf[key]
    return QuadratureConfig(**kwargs)


# --------------------------------------------------------------------------
# golden comparison
# --------------------------------------------------------------------------

def _load_golden(path: str) -> dict[str, dict]:
    with open(path) as fh:
        entries = json.load(fh)
    return {e["key"]: e for e in entries}


def check_against_golden(golden: dict[str, dict],
                         values: dict[str, LogReal]) -> list[str]:
    """Compare emitted values against golden entries with matching keys."""
    failures = []
    for key, val in values.items():
        entry = golden.get(key)
        if entry is None:
            continue
        if not entry.get("finite", True):
            if val is not None:
                failures.append(f"{key}: expected -inf flag, got {val}")
            continue
        want_sign = entry["sign"]
        want_ln = float(entry["value_ln_mag"]) if want_sign != 0 else -math.inf
        tol = float(entry.get("tol_rel", 1e-8))
        if val.sign != want_sign:
            failures.append(f"{key}: sign {val.sign} != {want_sign}")
        elif want_sign != 0 and abs(math.expm1(val.ln_mag - want_ln)) > tol:
            failures.append(
                f"{key}: ln_mag {val.ln_mag!r} vs {want_ln!r} beyond tol {tol}")
    return failures


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_moments(args) -> int:
    spec = _build_spec(args)
    lo, hi = _parse_range(args.n_range)
    cfg = _quad_config(args)
    table = moment_table(spec, lo, hi, args.method, cfg)
    doc = table.to_json_dict()

    if args.output == "csv":
        print("n,sign,ln_mag,value,method,err_est")
        for e in doc["entries"]:
            if e["method"] == "failed":
                print(f"{e['n']},,,,failed,")
                continue
            ln = "" if e["ln_mag"] is None else repr(e["ln_mag"])
            val = repr(e["value"]) if "value" in e else ""
            print(f"{e['n']},{e['sign']},{ln},{val},{e['method']},{e['err_est']!r}")
    else:
        print(json.dumps(doc, indent=2))

    if any(e["method"] == "failed" for e in doc["entries"]):
        return EXIT_NUMERICAL
    if args.golden:
        key = spec_key(spec)
        values = {f"moment/{key}/n={n}": table.value(n)
                  for n in range(lo, hi + 1) if table.entries[n].ok()}
        failures = check_against_golden(_load_golden(args.golden), values)
        if failures:
            print("\n".join("golden mismatch: " + f for f in failures),
                  file=sys.stderr)
            return EXIT_GOLDEN
    return EXIT_OK


def cmd_classify(args) -> int:
    spec = _build_spec(args)
    cfg = _quad_config(args)
    try:
        report = classify(spec, cfg, n_max=args.n_max)
    except NonConvergence as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(json.dumps(report.to_json_dict(), indent=2))
    if args.golden:
        key = spec_key(spec)
        values = {}
        for res in (report.krein, report.berg):
            if res is not None and res.finite:
                values[f"{res.kind}/{key}"] = LogReal.from_float(res.value)
        failures = check_against_golden(_load_golden(args.golden), values)
        if failures:
            print("\n".join("golden mismatch: " + f for f in failures),
                  file=sys.stderr)
            return EXIT_GOLDEN
    return EXIT_OK


def cmd_symmetrize(args) -> int:
    spec = _build_spec(args)
    lo, hi = _parse_range(args.n_range)
    if lo != -hi:
        raise UsageError("symmetrize needs a range symmetric about 0")
    cfg = _quad_config(args)
    table = moment_table(spec, lo, hi, args.method, cfg)
    sym_table = symmetrized_moments(table)
    dens = realize(spec)
    sym_ok, max_dev = is_symmetric(symmetrize(dens))
    doc = {
        "spec": spec.to_json_dict(),
        "symmetrized_moments": sym_table.to_json_dict(),
        "symmetry_after": {"symmetric": bool(sym_ok), "max_deviation": max_dev},
        "fixed_point": bool(is_symmetric(dens)[0]),
    }
    if args.krein_compare:
        if dens.domain.value != "real_line":
            raise UsageError("--krein-compare needs a real-line spec")
        comp = krein_symmetrization_bound(dens, cfg)
        doc["krein_comparison"] = comp.to_json_dict()
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_witness(args) -> int:
    if args.d is None:
        raise UsageError("witness needs --d")
    if args.s is None or not -1.0 <= args.s <= 1.0:
        raise UsageError("witness needs --s in [-1, 1]")
    k = args.k or 1
    cfg = _quad_config(args)
    try:
        report = verify_witness(args.d, args.s, k, n_max=args.n_max, cfg=cfg)
    except NonConvergence as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(json.dumps(report.to_json_dict(), indent=2))
    if args.golden:
        # the witness moments must equal the unperturbed closed forms, so
        # they are compared against the base spec's golden entries
        from .moments import moment
        pert = realize(witness_spec(args.d, args.s, k))
        base_key = spec_key(DistributionSpec("lognormal-s", {"c": 1.0, "d": args.d}))
        values = {}
        for n in range(-args.n_max, args.n_max + 1):
            values[f"moment/{base_key}/n={n}"] = moment(pert, n, cfg)[0]
        failures = check_against_golden(_load_golden(args.golden), values)
        if failures:
            print("\n".join("golden mismatch: " + f for f in failures),
                  file=sys.stderr)
            return EXIT_GOLDEN
    return EXIT_OK if report.passed else EXIT_WITNESS


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", choices=["lognormal-s", "lognormal-h", "family9"])
    p.add_argument("--spec-json", help="full spec as a JSON object")
    p.add_argument("--c", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--method", choices=["auto", "closed-form", "quadrature"],
                   default="auto")
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--golden", help="golden reference file to compare against")
    p.add_argument("--config", help="key = value config file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strongmoments",
                                 description="two-sided moment sequences and "
                                             "determinacy criteria")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="moment table of a spec")
    _add_common(p)
    p.add_argument("--n-range", default="-8:8")
    p.set_defaults(fn=cmd_moments)

    p = sub.add_parser("classify", help="determinacy criterion report")
    _add_common(p)
    p.add_argument("--n-max", type=int)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("symmetrize", help="symmetrized moments and checks")
    _add_common(p)
    p.add_argument("--n-range", default="-6:6")
    p.add_argument("--krein-compare", action="store_true",
                   help="also compare the symmetrized log-density integral "
                        "against its no-averaging upper bound")
    p.set_defaults(fn=cmd_symmetrize)

    p = sub.add_parser("witness", help="verify a moment-matching distinct pair")
    _add_common(p)
    p.add_argument("--n-max", type=int, default=8)
    p.set_defaults(fn=cmd_witness)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    merged = []
    i = 0
    while i < len(argv):
        # keep values like -4:4 out of argparse's option matching
        if argv[i] == "--n-range" and i + 1 < len(argv):
            merged.append(f"--n-range={argv[i + 1]}")
            i += 2
        else:
            merged.append(argv[i])
            i += 1
    try:
        args = ap.parse_args(merged)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (UsageError, SpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergence as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
