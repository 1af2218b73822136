"""CSV tables and matplotlib figures summarising signatures, tame constants and norms."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .affine import AffineKacMoody  # noqa: E402
from .geometry import TruncationWindow, metric_index  # noqa: E402
from .group import geodesic  # noqa: E402
from .heisenberg import heisenberg_real_form  # noqa: E402
from .laurent import lp_annulus_norm, parse_laurent  # noqa: E402
from .tame import tame_fit  # noqa: E402


def write_csv(path: Path, header: list[str], rows: list) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def signature_table(N: int) -> list:
    km = AffineKacMoody("abelian:1")
    rows = []
    for form, eps in (("compact", "i"), ("noncompact", "one")):
        res = metric_index(km, TruncationWindow(N), heisenberg_real_form(km, N, eps, include_cd=False))
        rows += [[form, j, repr(v)] for j, v in enumerate(res.eigenvalues)]
    return rows


def tame_table(window: int, trials: int, seed: int) -> list:
    rows = []
    cases = [("abelian:1", "d-action"), ("abelian:1", "multiply:z+z^-1"), ("sl2", "ad:0=z+z^-1")]
    for base, map_name in cases:
        fit = tame_fit(AffineKacMoody(base, "float"), map_name, window, range(5), trials, seed)
        sym = (fit.symbolic or {}).get("C", {})
        for n, c in fit.C.items():
            s = sym.get(str(n))
            rows.append([base, map_name, fit.r, n, repr(c), "" if s is None else repr(s)])
    return rows


def norm_table(polys=("z+z^-1", "1+z^3", "z^-2+1/2*z")) -> list:
    rows = []
    for text in polys:
        f = parse_laurent(text)
        for n in range(6):
            est, upper = lp_annulus_norm(f, n)
            rows.append([text, n, repr(est), repr(upper)])
    return rows


def geodesic_table(steps: int = 41) -> list:
    km = AffineKacMoody("abelian:1", "float")
    X = km.element([{1: 1.0, -1: 1.0}], 0.0, 0.3j)
    rows = []
    for j in range(steps):
        t = -2 + 4 * j / (steps - 1)
        g = geodesic(km, X, t)
        rows.append([repr(t), repr(abs(g.q)), repr(math.atan2(g.q.imag, g.q.real)), repr(g.central.real),
                     repr(g.central.imag)])
    return rows


def _plot_signature(rows, path: Path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for form, marker in (("compact", "o"), ("noncompact", "s")):
        vals = [float(r[2]) for r in rows if r[0] == form]
        ax.plot(range(len(vals)), vals, marker, label=form)
    ax.axhline(0, color="grey", lw=0.8)
    ax.set_xlabel("eigenvalue rank")
    ax.set_ylabel("Gram eigenvalue")
    ax.set_title("metric on real Heisenberg forms with c, d")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_tame(rows, path: Path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for map_name in dict.fromkeys(r[1] for r in rows):
        sel = [r for r in rows if r[1] == map_name]
        ax.semilogy([r[3] for r in sel], [max(float(r[4]), 1e-300) for r in sel], "o-", label=f"{map_name} (r={sel[0][2]})")
        if sel[0][5]:
            ax.semilogy([r[3] for r in sel], [float(r[5]) for r in sel], "k:", lw=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel("C(n)")
    ax.set_title("fitted tame constants (dotted: symbolic bounds)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_norms(rows, path: Path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for text in dict.fromkeys(r[0] for r in rows):
        sel = [r for r in rows if r[0] == text]
        line, = ax.semilogy([r[1] for r in sel], [float(r[2]) for r in sel], "o-", label=f"{text} sampled")
        ax.semilogy([r[1] for r in sel], [float(r[3]) for r in sel], "--", color=line.get_color())
    ax.set_xlabel("n")
    ax.set_ylabel("sup norm on annulus")
    ax.set_title("annulus norms (dashed: coefficient bound)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_geodesic(rows, path: Path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    t = [float(r[0]) for r in rows]
    ax.plot(t, [float(r[2]) for r in rows], label="arg q")
    ax.plot(t, [float(r[3]) for r in rows], label="Re central")
    ax.plot(t, [float(r[4]) for r in rows], label="Im central")
    ax.set_xlabel("t")
    ax.set_title("geodesic exp(t X), X = (z + 1/z) e + 0.3i d")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def build_report(out: Path | str, seed: int, window: int = 5, trials: int = 200) -> dict:
    """Write every table as CSV and every figure as PNG into ``out``; returns the file list."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    sig = signature_table(window)
    files["signature_csv"] = write_csv(out / "signature_eigenvalues.csv", ["realform", "rank", "eigenvalue"], sig)
    _plot_signature(sig, out / "signature_eigenvalues.png")
    files["signature_png"] = out / "signature_eigenvalues.png"
    tame = tame_table(8, trials, seed)
    files["tame_csv"] = write_csv(out / "tame_constants.csv", ["base", "map", "r", "n", "C_fit", "C_symbolic"], tame)
    _plot_tame(tame, out / "tame_constants.png")
    files["tame_png"] = out / "tame_constants.png"
    norms = norm_table()
    files["norms_csv"] = write_csv(out / "annulus_norms.csv", ["poly", "n", "estimate", "certified_upper"], norms)
    _plot_norms(norms, out / "annulus_norms.png")
    files["norms_png"] = out / "annulus_norms.png"
    geo = geodesic_table()
    files["geodesic_csv"] = write_csv(out / "geodesic.csv", ["t", "abs_q", "arg_q", "central_re", "central_im"], geo)
    _plot_geodesic(geo, out / "geodesic.png")
    files["geodesic_png"] = out / "geodesic.png"
    return {k: str(v) for k, v in files.items()}
