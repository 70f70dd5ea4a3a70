"""Command line: build matrices, run verification suites, print reports."""
from __future__ import annotations

import argparse
import json
import sys

FAMILIES = ("yang", "lax", "verma", "sl2c", "q_yang", "trig_lax", "r4_trig", "modular")


def _spins(text: str | None):
    """'1' → [(1,)], '1,0;2,1' → [(1,0),(2,1)]."""
    if not text:
        return []
    return [tuple(int(x) for x in part.split(",")) for part in text.split(";")]


def _spectral(text: str, numeric: bool):
    if numeric:
        return complex(text.replace(" ", ""))
    from .ring import poly
    return poly(text)


def build(family: str, spins, spectral: str):
    from .rational import braid_r, lax_rational, reduce_sl2c, reduce_verma, yang_r
    numeric = family in ("r4_trig", "modular")
    u = _spectral(spectral, numeric) if spectral else None
    if family == "yang":
        return yang_r(u if u is not None else "u")
    if family == "lax":
        return lax_rational(u if u is not None else "u", spins[0][0] if spins else 1)
    if family == "verma":
        return reduce_verma(u if u is not None else "u", spins[0][0] if spins else 1)
    if family == "sl2c":
        a, b = (spins + [(1, 0), (1, 0)])[:2]
        return reduce_sl2c(u if u is not None else "u", a, b)
    if family == "q_yang":
        from .trig import q_yang_r
        return q_yang_r(None)
    if family == "trig_lax":
        from .trig import trig_lax
        return trig_lax(None, spins[0][0] if spins else 1)
    if family == "r4_trig":
        from .modular.shiftop import r4_trig
        return r4_trig(u if u is not None else 0.3 + 0.1j)
    if family == "modular":
        from .modular.reduce import reduce_modular
        a, b = (spins + [(0, 1), (0, 1)])[:2]
        return reduce_modular(u if u is not None else 0.3 + 0.1j, a, b).matrix
    raise ValueError(family)


def _print_report(d: dict, out=sys.stdout):
    print(f"suite {d['suite']}  seed {d['seed']}  {'PASS' if d['passed'] else 'FAIL'}", file=out)
    for c in d["cases"]:
        tag = "PASS" if c["passed"] else "FAIL"
        res = "exact" if c["exact"] and c["passed"] else f"{c['residual']:.2e}"
        extra = f"  scalar={c['scalar']}" if c.get("scalar") else ""
        print(f"  {tag}  {c['case']:<48} {res:>9}  {c['seconds']:.2f}s{extra}", file=out)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="ybred", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", help="build an R-matrix or Lax matrix and export it as JSON")
    b.add_argument("--family", required=True, choices=FAMILIES)
    b.add_argument("--spins", help="e.g. '2' or '1,0;2,1' or '0,1;1,1'")
    b.add_argument("--spectral", help="u (symbolic or numeric; 'u,v' accepted, v ignored)")
    b.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all", choices=("rational", "trig", "modular", "all"))
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--json", help="write the machine-readable report here")

    r = sub.add_parser("report", help="print a saved report")
    r.add_argument("--in", dest="inp", required=True)

    s = sub.add_parser("selftest", help="run every case that recovers a printed identity")
    s.add_argument("--seed", type=int, default=0)

    args = ap.parse_args(argv)
    if args.cmd == "build":
        from .harness.io import export_matrix
        spec = (args.spectral or "").split(",")[0] or None
        M = build(args.family, _spins(args.spins), spec)
        export_matrix(M, args.out, family=args.family, spins=_spins(args.spins))
        print(f"wrote {args.out}")
        return 0
    if args.cmd == "verify":
        from .harness.suites import run_suite
        rep = run_suite(args.suite, args.seed, args.tol, jobs=args.jobs)
        d = rep.as_dict()
        if args.json:
            with open(args.json, "w") as fh:
                json.dump(d, fh, indent=1)
        _print_report(d)
        return 0 if rep.passed else 1
    if args.cmd == "report":
        with open(args.inp) as fh:
            d = json.load(fh)
        _print_report(d)
        return 0 if d.get("passed") else 1
    if args.cmd == "selftest":
        from .harness.suites import run_suite
        rep = run_suite("all", args.seed, printed_only=True)
        _print_report(rep.as_dict())
        return 0 if rep.passed else 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
