"""Command-line front end.

Subcommands: ``gen`` (graph generators), ``decompose`` (polar / Schur /
symmetrization factor files), ``gft`` (spectrum of a signal in a chosen
basis), and ``experiment`` (the block-cyclic diffusion pipeline with CSV and
figure reports).  Exit codes: 0 ok, 1 I/O failure, 2 usage, 3 numerical or
data validation failure.  All commands are deterministic for fixed flags and
seeds.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import analysis
from .errors import NumericalError, ValidationError
from .graphs import (
    MBlockSpec,
    gen_directed_cycle,
    gen_directed_path,
    gen_directed_torus,
    gen_mblock_cyclic,
    gen_random_digraph,
)
from .gst import gst_build
from .io import (
    mm_write,
    read_matrix_market,
    read_signal_csv,
    write_basis_csv,
    write_matrix_market,
    write_spectrum_csv,
    write_values_csv,
)
from .linalg import sym_eig
from .polar import (
    common_inlink_basis,
    common_outlink_basis,
    inflow_basis,
    polar_decompose,
)
from .symmetrize import bibliographic_coupling, bibliometric, co_citation


class UsageError(Exception):
    """Incomplete or unparseable flag set; maps to exit code 2 like argparse."""


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by CLI-level checks."""

    normality: float = 1e-10
    parseval: float = 1e-10
    structure: float = 1e-8

    @classmethod
    def from_profile(cls, profile: str) -> "Tolerances":
        base = cls()
        if profile == "default":
            return base
        if profile == "strict":
            return cls(**{f.name: getattr(base, f.name) / 2 for f in fields(cls)})
        raise ValidationError(f"unknown tolerance profile {profile!r}")


def _common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="base RNG seed")
    sub.add_argument("--out-dir", default=".", help="directory for output files")
    sub.add_argument(
        "--tolerance-profile",
        choices=("default", "strict"),
        default="default",
        help="strict halves all numerical check tolerances",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="digsp",
        description="Spectral analysis toolkit for directed graphs.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    gen = subs.add_parser(
        "gen",
        help="generate a graph family and write it as Matrix Market",
        formatter_class=fmt,
    )
    gen.add_argument(
        "--family",
        required=True,
        choices=("cycle", "path", "torus", "mbcg", "random"),
        help="graph family",
    )
    gen.add_argument("--n", type=int, help="node count (cycle, path, random)")
    gen.add_argument("--rows", type=int, help="torus rows")
    gen.add_argument("--cols", type=int, help="torus cols")
    gen.add_argument("--blocks", type=int, help="mbcg block count")
    gen.add_argument("--per-block", type=int, help="mbcg nodes per block")
    gen.add_argument(
        "--normalize",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="row-normalize the mbcg adjacency",
    )
    gen.add_argument("--density", type=float, default=0.3, help="random edge density")
    gen.add_argument("--out", help="output file (default <out-dir>/graph.mtx)")
    _common_flags(gen)
    gen.set_defaults(func=cmd_gen)

    dec = subs.add_parser(
        "decompose",
        help="write polar, Schur, or symmetrization factor files",
        formatter_class=fmt,
    )
    dec.add_argument("--in", dest="infile", required=True, help="graph file")
    dec.add_argument(
        "--what",
        required=True,
        choices=("polar", "schur", "symmetrize"),
        help="which factorization to write",
    )
    dec.add_argument(
        "--ordering",
        choices=("by-frequency", "by-modulus-desc", "none"),
        default="by-frequency",
        help="Schur eigenvalue ordering",
    )
    _common_flags(dec)
    dec.set_defaults(func=cmd_decompose)

    gft = subs.add_parser(
        "gft",
        help="project a signal onto a graph Fourier basis",
        formatter_class=fmt,
    )
    gft.add_argument("--in", dest="infile", required=True, help="graph file")
    gft.add_argument(
        "--basis",
        required=True,
        choices=("p", "f", "q", "schur"),
        help="basis: common-in-link (p), common-out-link (f), in-flow (q), or Schur",
    )
    gft.add_argument("--signal", required=True, help="signal CSV (node_id,value)")
    gft.add_argument("--out", help="spectrum CSV (default <out-dir>/spectrum.csv)")
    _common_flags(gft)
    gft.set_defaults(func=cmd_gft)

    exp = subs.add_parser(
        "experiment",
        help="block-cyclic diffusion experiment with localization reports",
        formatter_class=fmt,
    )
    exp.add_argument("--blocks", type=int, default=4, help="block count")
    exp.add_argument("--per-block", type=int, default=25, help="nodes per block")
    exp.add_argument("--weight-seed", type=int, default=0, help="edge-weight seed")
    exp.add_argument(
        "--normalize",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="row-normalize so diffusion averages in-neighbors",
    )
    exp.add_argument(
        "--ks",
        default=",".join(str(k) for k in analysis.DEFAULT_STEPS),
        help="comma-separated diffusion steps, ascending from 0",
    )
    exp.add_argument("--n-seeds", type=int, default=20, help="signal seeds to average")
    exp.add_argument(
        "--figures",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="render PNG figures next to the CSVs",
    )
    _common_flags(exp)
    exp.set_defaults(func=cmd_experiment)

    return parser


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gen(args) -> int:
    fam = args.family
    if fam in ("cycle", "path", "random") and args.n is None:
        raise UsageError(f"--family {fam} requires --n")
    if fam == "cycle":
        g = gen_directed_cycle(args.n)
    elif fam == "path":
        g = gen_directed_path(args.n)
    elif fam == "torus":
        if args.rows is None or args.cols is None:
            raise UsageError("--family torus requires --rows and --cols")
        g = gen_directed_torus(args.rows, args.cols)
    elif fam == "mbcg":
        if args.blocks is None or args.per_block is None:
            raise UsageError("--family mbcg requires --blocks and --per-block")
        g = gen_mblock_cyclic(
            MBlockSpec(
                blocks=args.blocks,
                nodes_per_block=args.per_block,
                weight_seed=args.seed,
                normalize=args.normalize,
            )
        )
    else:
        g = gen_random_digraph(args.n, density=args.density, seed=args.seed)

    out = Path(args.out) if args.out else _out_dir(args) / "graph.mtx"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_matrix_market(g, out)
    tol = Tolerances.from_profile(args.tolerance_profile)
    a = g.adjacency
    residual = np.abs(a @ a.T - a.T @ a).max()
    normal = residual <= tol.normality * max(1.0, np.linalg.norm(a) ** 2)
    print(
        f"family={fam} n={g.n} nnz={g.nnz} normal={'yes' if normal else 'no'} "
        f"file={out}"
    )
    return 0


def cmd_decompose(args) -> int:
    g = read_matrix_market(args.infile)
    out = _out_dir(args)
    if args.what == "polar":
        pf = polar_decompose(g)
        mm_write(pf.p, out / "p.mtx")
        mm_write(pf.q, out / "q.mtx")
        mm_write(pf.f, out / "f.mtx")
        write_values_csv(pf.svd.singular_values, out / "singular_values.csv", "sigma")
        print(f"polar factors written to {out} (n={g.n})")
    elif args.what == "schur":
        t = gst_build(g, ordering=args.ordering)
        mm_write(t.factors.unitary, out / "u.mtx")
        mm_write(t.factors.triangular, out / "t.mtx")
        write_values_csv(t.factors.eigenvalues, out / "eigenvalues.csv", "eig")
        write_basis_csv(t.basis, out / "basis.csv")
        note = " (unnormalized TV: zero spectral radius)" if t.tv_unnormalized else ""
        print(f"Schur factors written to {out} (n={g.n}){note}")
    else:
        b = bibliographic_coupling(g)
        c = co_citation(g)
        s = bibliometric(g)
        mm_write(b.matrix, out / "b_in.mtx")
        mm_write(c.matrix, out / "c_out.mtx")
        mm_write(s.matrix, out / "bibliometric.mtx")
        write_values_csv(sym_eig(b.matrix).values, out / "b_in_eigenvalues.csv", "eig")
        write_values_csv(sym_eig(c.matrix).values, out / "c_out_eigenvalues.csv", "eig")
        print(f"symmetrizations written to {out} (n={g.n})")
    return 0


def cmd_gft(args) -> int:
    g = read_matrix_market(args.infile)
    x = read_signal_csv(args.signal, g.n)
    if args.basis == "schur":
        basis = gst_build(g).basis
    else:
        pf = polar_decompose(g)
        basis = {
            "p": common_inlink_basis,
            "f": common_outlink_basis,
            "q": inflow_basis,
        }[args.basis](pf)
    coeffs = basis.transform(x)
    tol = Tolerances.from_profile(args.tolerance_profile)
    sig_norm = float(np.linalg.norm(x))
    residual = abs(float(np.linalg.norm(coeffs)) - sig_norm)
    print(f"parseval: | ||coeffs|| - ||x|| | = {residual:.3e}")
    if residual > tol.parseval * max(1.0, sig_norm):
        raise NumericalError(
            f"Parseval violated: residual {residual:.3e} exceeds "
            f"{tol.parseval * max(1.0, sig_norm):.3e}"
        )
    out = Path(args.out) if args.out else _out_dir(args) / "spectrum.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_spectrum_csv(coeffs, basis, out)
    print(f"spectrum written to {out} (basis={basis.kind.value}, n={g.n})")
    return 0


def cmd_experiment(args) -> int:
    try:
        ks = tuple(int(tok) for tok in args.ks.split(","))
    except ValueError:
        raise UsageError(f"cannot parse --ks {args.ks!r}") from None
    spec = MBlockSpec(
        blocks=args.blocks,
        nodes_per_block=args.per_block,
        weight_seed=args.weight_seed,
        normalize=args.normalize,
    )
    tol = Tolerances.from_profile(args.tolerance_profile)
    out = _out_dir(args)
    runs, summary = analysis.summarize_mbcg(
        spec, seed=args.seed, ks=ks, n_seeds=args.n_seeds
    )
    for run in runs:
        run.write(out / f"seed_{run.seed:04d}")
    summary.write_csv(out / "localization.csv")
    summary.structure.write_csv(out / "structure.csv")
    if args.figures:
        from . import plots  # deferred: matplotlib is slow to import

        plots.plot_trace(runs[0].trace, out / "trace.png")
        plots.plot_spectra(runs[0].spectra, runs[0].trace.steps, out / "spectra.png")
        plots.plot_localization(summary, out / "localization.png")

    print(
        f"experiment: blocks={spec.blocks} per_block={spec.nodes_per_block} "
        f"n={spec.n} seeds={len(summary.seeds)} ks={','.join(map(str, summary.ks))}"
    )
    for name, passed in summary.checks.items():
        print(f"check {name}: {'PASS' if passed else 'FAIL'}")
    st = summary.structure
    for factor, residual in (
        ("q", st.q_residual),
        ("p", st.p_residual),
        ("f", st.f_residual),
    ):
        passed = residual <= tol.structure
        print(
            f"structure {factor}: {'PASS' if passed else 'FAIL'} "
            f"(residual {residual:.3e} <= {tol.structure:g})"
        )
    print(f"reports written to {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
