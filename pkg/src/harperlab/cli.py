"""harperlab command line: every module as a subcommand with reproducible
CSV/JSON outputs and a config-echo sidecar per run."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .contfrac import QuadraticSurd, expand, golden_mean, silver_mean
from .cocycles import ids_from_rotation, profile_batch, rotation_number
from .errors import HarperlabError
from .esproducts import liminf_track
from .fourier import limsup_lower_bound_test
from .model import Coupling, classify, criticality
from .spectra import density_of_states
from .verify import format_table, run_all


def parse_alpha(text: str):
    """Named constants, decimal strings, or surds 'sqrt:D:a:b:c' meaning
    (a + b sqrt(D))/c. Returns the exact backing value for expansion."""
    t = text.strip().lower()
    if t == "golden":
        return golden_mean()
    if t == "silver":
        return silver_mean()
    if t.startswith("sqrt:"):
        parts = t.split(":")
        if len(parts) != 5:
            raise ValueError("surd spelling is sqrt:D:a:b:c for (a + b sqrt(D))/c")
        d, a, b, c = int(parts[1]), int(parts[2]), int(parts[3]), int(parts[4])
        return QuadraticSurd(Fraction(a, c), Fraction(b, c), d)
    return text  # decimal string with its own precision budget


def parse_coupling(text: str) -> Coupling:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise ValueError("coupling must be 'l1,l2,l3'")
    return Coupling(*parts)


def parse_range(text: str) -> np.ndarray:
    """'a:b:step' inclusive grid, or a comma list, or one number."""
    if ":" in text:
        a, b, step = (float(x) for x in text.split(":"))
        n = int(round((b - a) / step))
        return a + step * np.arange(n + 1)
    return np.array([float(x) for x in text.split(",")])


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_sidecar(out_path: Path, args: argparse.Namespace):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    cfg["version"] = __version__
    side = out_path.with_suffix(out_path.suffix + ".config.json")
    with open(side, "w") as fh:
        json.dump(cfg, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def cmd_cf(args) -> int:
    cf = expand(parse_alpha(args.alpha), args.terms)
    out = Path(args.out)
    with open(out, "w") as fh:
        json.dump(cf.to_json_dict(), fh, indent=2)
        fh.write("\n")
    write_sidecar(out, args)
    return 0


def cmd_esprod(args) -> int:
    cf = expand(parse_alpha(args.alpha), args.nmax + 2)
    series = liminf_track(cf, args.nmax)
    out = Path(args.out)
    write_csv(out, ["n", "q_n", "sup_value", "argmax_angle", "running_min"],
              series.csv_rows())
    write_sidecar(out, args)
    return 0


def cmd_phase_diagram(args) -> int:
    key, val = args.plane.split("=")
    if key.strip() != "l2":
        raise ValueError("only planes 'l2=<value>' are supported")
    l2 = float(val)
    axis = np.linspace(0.0, args.max, args.grid)
    rows = []
    for l1 in axis:
        for l3 in axis:
            if l1 == 0 and l3 == 0 and l2 == 0:
                continue
            lam = Coupling(l1, l2, l3)
            rows.append((float(l1), float(l3), classify(lam).region.value,
                         criticality(lam).value))
    out = Path(args.out)
    write_csv(out, ["lambda1", "lambda3", "region", "criticality"], rows)
    write_sidecar(out, args)
    return 0


def cmd_lyapunov(args) -> int:
    lam = parse_coupling(args.coupling)
    alpha_val = expand(parse_alpha(args.alpha), 24).alpha_float
    energies = parse_range(args.E)
    eps = parse_range(args.eps)
    profs = profile_batch(lam, alpha_val, energies, eps, n_iter=args.n_iter,
                          n_phases=args.phases, seed=args.seed)
    rows = []
    for prof in profs:
        for i, (e, L) in enumerate(zip(prof.eps_grid, prof.L_values)):
            slope = prof.slopes[i] if i < len(prof.slopes) else math.nan
            rows.append((prof.energy, float(e), float(L), float(slope)))
    out = Path(args.out)
    write_csv(out, ["E", "eps", "L", "slope"], rows)
    write_sidecar(out, args)
    return 0


def cmd_dos(args) -> int:
    lam = parse_coupling(args.coupling)
    alpha_val = expand(parse_alpha(args.alpha), 24).alpha_float
    sample = density_of_states(lam, alpha_val, n=args.n, n_phases=args.phases,
                               seed=args.seed)
    out = Path(args.out)
    per_phase = args.n
    rows = [(i // per_phase, i % per_phase, float(e))
            for i, e in enumerate(sample.eigenvalues)]
    write_csv(out.with_name(out.stem + "_eigs.csv"), ["phase", "index", "E"], rows)
    hist_rows = [(float(a), float(b), float(m)) for a, b, m in
                 zip(sample.bin_edges[:-1], sample.bin_edges[1:], sample.masses)]
    write_csv(out.with_name(out.stem + "_hist.csv"), ["bin_lo", "bin_hi", "mass"], hist_rows)
    es = np.linspace(sample.eigenvalues[0] - 0.1, sample.eigenvalues[-1] + 0.1, 512)
    ids_rows = [(float(e), float(sample.ids(float(e)))) for e in es]
    write_csv(out.with_name(out.stem + "_ids.csv"), ["E", "N"], ids_rows)
    write_sidecar(out.with_name(out.stem + "_eigs.csv"), args)
    return 0


def cmd_fourier(args) -> int:
    lam = parse_coupling(args.coupling)
    cf = expand(parse_alpha(args.alpha), max(24, args.levels + 12))
    series, verdict = limsup_lower_bound_test(lam, cf, args.theta,
                                              levels=args.levels)
    out = Path(args.out)
    write_csv(out, ["l", "m_l", "re", "im", "normalized", "upper_proxy"],
              series.csv_rows())
    write_sidecar(out, args)
    print(f"verdict: limsup proxy positive = {verdict}")
    return 0


def cmd_rotation(args) -> int:
    lam = parse_coupling(args.coupling)
    alpha_val = expand(parse_alpha(args.alpha), 24).alpha_float
    energies = parse_range(args.E)
    rows = []
    for e in energies:
        est = rotation_number(lam, alpha_val, float(e), n_iter=args.n_iter)
        rows.append((float(e), est.value, est.half_turns,
                     ids_from_rotation(est), est.drift))
    out = Path(args.out)
    write_csv(out, ["E", "rho", "half_turns", "N_pred", "drift"], rows)
    write_sidecar(out, args)
    return 0


def cmd_verify(args) -> int:
    results = run_all(quick=args.quick)
    print(format_table(results))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="harperlab",
                                description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_default):
        sp.add_argument("--out", default=out_default)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int,
                        default=int(os.environ.get("HARPERLAB_THREADS", "0")))

    sp = sub.add_parser("cf", help="continued fraction expansion as JSON")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--terms", type=int, default=30)
    common(sp, "cf.json")
    sp.set_defaults(func=cmd_cf)

    sp = sub.add_parser("esprod", help="circle sups of the trigonometric sums")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--nmax", type=int, default=12)
    common(sp, "sup.csv")
    sp.set_defaults(func=cmd_esprod)

    sp = sub.add_parser("phase-diagram", help="region/criticality grid")
    sp.add_argument("--grid", type=int, default=200)
    sp.add_argument("--plane", default="l2=1")
    sp.add_argument("--max", type=float, default=2.0)
    common(sp, "regions.csv")
    sp.set_defaults(func=cmd_phase_diagram)

    sp = sub.add_parser("lyapunov", help="complexified Lyapunov profiles")
    sp.add_argument("--coupling", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--E", required=True)
    sp.add_argument("--eps", default="-1:1:0.025")
    sp.add_argument("--n-iter", type=int, default=50_000)
    sp.add_argument("--phases", type=int, default=64)
    common(sp, "le.csv")
    sp.set_defaults(func=cmd_lyapunov)

    sp = sub.add_parser("dos", help="density of states / IDS")
    sp.add_argument("--coupling", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--n", type=int, default=512)
    sp.add_argument("--phases", type=int, default=64)
    common(sp, "dos.csv")
    sp.set_defaults(func=cmd_dos)

    sp = sub.add_parser("fourier", help="boundary-coefficient series")
    sp.add_argument("--coupling", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--levels", type=int, default=8)
    common(sp, "fourier.csv")
    sp.set_defaults(func=cmd_fourier)

    sp = sub.add_parser("rotation", help="fibered rotation numbers")
    sp.add_argument("--coupling", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--E", required=True)
    sp.add_argument("--n-iter", type=int, default=100_000)
    common(sp, "rotation.csv")
    sp.set_defaults(func=cmd_rotation)

    sp = sub.add_parser("verify", help="run the acceptance criteria")
    sp.add_argument("--quick", action="store_true")
    common(sp, "verify.txt")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads > 0:
        os.environ["NUMBA_NUM_THREADS"] = str(args.threads)
    try:
        return args.func(args)
    except HarperlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
