#!/usr/bin/env python3
"""Figure pipeline for harperlab CSV outputs.

Reads the CLI's CSV files and renders deterministic PNG figures:

    python3 plots/render.py --kind phase --in regions.csv --out fig.png
    python3 plots/render.py --kind le    --in le.csv      --out le.png
    python3 plots/render.py --kind sup   --in sup.csv     --out sup.png
    python3 plots/render.py --kind dos   --in dos_hist.csv --out dos.png
    python3 plots/render.py --kind dos   --in dos_ids.csv  --out ids.png

Column names are validated against the documented schemas before anything
is drawn; a renamed column fails fast. Rendering is a pure file-to-file
operation: rerunning with identical inputs produces identical bytes.

Colors: red = critical (self-dual), light blue = subcritical, cream =
supercritical, grey = the lambda2 = 0 axis class; the NNN-isotropic
diagonal of a phase diagram is overlaid as a grey dashed line where the
sampling function c acquires real zeros.
"""

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

DPI = 120
PNG_METADATA = {"Software": "harperlab-plots"}

COLORS = {
    "critical": "#d62728",  # red: self-dual / critical
    "subcritical": "#9ecae1",  # light blue
    "supercritical": "#fff7bc",  # cream (default background class)
    "axis": "#bdbdbd",  # grey: lambda2 = 0
}

SCHEMAS = {
    "phase": ["lambda1", "lambda3", "region", "criticality"],
    "le": ["E", "eps", "L", "slope"],
    "sup": ["n", "q_n", "sup_value", "argmax_angle", "running_min"],
    "dos_hist": ["bin_lo", "bin_hi", "mass"],
    "dos_ids": ["E", "N"],
}


class SchemaMismatch(Exception):
    pass


class MissingInput(Exception):
    pass


def read_csv(path: Path, schema_names):
    """Rows as a list of dicts after validating the header against one of
    the allowed schemas; returns (schema_name, rows)."""
    if not path.exists():
        raise MissingInput(f"input file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaMismatch(f"{path}: empty file")
        for name in schema_names:
            if header == SCHEMAS[name]:
                rows = [dict(zip(header, row)) for row in reader]
                return name, rows
    raise SchemaMismatch(
        f"{path}: header {header} matches none of "
        f"{[SCHEMAS[n] for n in schema_names]}"
    )


def render_phase(path: Path, out: Path, l2: float = 1.0):
    _, rows = read_csv(path, ["phase"])
    l1 = np.array([float(r["lambda1"]) for r in rows])
    l3 = np.array([float(r["lambda3"]) for r in rows])
    crit = [r["criticality"] for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    for cls, color in COLORS.items():
        sel = [i for i, c in enumerate(crit) if c == cls]
        if sel:
            ax.scatter(l1[sel], l3[sel], c=color, s=9, marker="s",
                       label=cls, linewidths=0)
    # singular models: isotropic diagonal with 2*l3 >= l2
    top = max(l1.max(), l3.max())
    start = l2 / 2.0
    if start <= top:
        ax.plot([start, top], [start, top], "--", color="#636363", lw=1.2,
                label="singular c (iso)")
    ax.set_xlabel("lambda1")
    ax.set_ylabel("lambda3")
    ax.set_title("criticality classes")
    ax.legend(loc="upper left", fontsize=7)
    fig.savefig(out, dpi=DPI, metadata=PNG_METADATA)
    plt.close(fig)


def render_le(path: Path, out: Path):
    _, rows = read_csv(path, ["le"])
    by_e = {}
    for r in rows:
        by_e.setdefault(float(r["E"]), []).append((float(r["eps"]), float(r["L"])))
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    for e_val in sorted(by_e):
        pts = sorted(by_e[e_val])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], lw=1.0,
                label=f"E={e_val:+.3f}")
    ax.set_xlabel("eps")
    ax.set_ylabel("L(E; eps)")
    ax.set_title("complexified Lyapunov profiles")
    if len(by_e) <= 8:
        ax.legend(fontsize=7)
    fig.savefig(out, dpi=DPI, metadata=PNG_METADATA)
    plt.close(fig)


def render_sup(path: Path, out: Path):
    _, rows = read_csv(path, ["sup"])
    n = [int(r["n"]) for r in rows]
    sup = [float(r["sup_value"]) for r in rows]
    rmin = [float(r["running_min"]) for r in rows]
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    ax.plot(n, sup, "o-", lw=1.0, ms=4, label="sup_z S(q_n, z)")
    ax.step(n, rmin, where="post", color="#d62728", lw=1.2, label="running min")
    ax.set_xlabel("n")
    ax.set_ylabel("sup")
    ax.set_title("circle sups along denominators")
    ax.legend(fontsize=8)
    fig.savefig(out, dpi=DPI, metadata=PNG_METADATA)
    plt.close(fig)


def render_dos(path: Path, out: Path):
    name, rows = read_csv(path, ["dos_hist", "dos_ids"])
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    if name == "dos_hist":
        lo = np.array([float(r["bin_lo"]) for r in rows])
        hi = np.array([float(r["bin_hi"]) for r in rows])
        mass = np.array([float(r["mass"]) for r in rows])
        ax.bar(lo, mass, width=hi - lo, align="edge", color="#9ecae1",
               edgecolor="#3182bd", linewidth=0.4)
        ax.set_ylabel("mass")
        ax.set_title("density of states")
    else:
        e_vals = [float(r["E"]) for r in rows]
        n_vals = [float(r["N"]) for r in rows]
        ax.plot(e_vals, n_vals, lw=1.2, color="#3182bd")
        ax.set_ylabel("N(E)")
        ax.set_title("integrated density of states")
    ax.set_xlabel("E")
    fig.savefig(out, dpi=DPI, metadata=PNG_METADATA)
    plt.close(fig)


RENDERERS = {
    "phase": render_phase,
    "le": render_le,
    "sup": render_sup,
    "dos": render_dos,
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="render harperlab CSVs to figures")
    ap.add_argument("--kind", required=True, choices=sorted(RENDERERS))
    ap.add_argument("--in", dest="infile", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--l2", type=float, default=1.0,
                    help="plane value for the phase kind's singular overlay")
    args = ap.parse_args(argv)
    try:
        if args.kind == "phase":
            render_phase(Path(args.infile), Path(args.out), l2=args.l2)
        else:
            RENDERERS[args.kind](Path(args.infile), Path(args.out))
    except (SchemaMismatch, MissingInput) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
