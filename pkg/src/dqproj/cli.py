"""Command-line interface.

Subcommands:

* ``synth``   -- write a seeded synthetic batch as a dual quaternion CSV
* ``project`` -- project every row of a dual quaternion CSV
* ``bench``   -- batch statistics, CDF tables, and CDF figures
* ``ingest``  -- convert a TUM-style trajectory into a dual quaternion CSV

File formats. The dual quaternion CSV has header
``qs0,qs1,qs2,qs3,qd0,qd1,qd2,qd3`` and may carry '#' comment lines;
numbers are written as the shortest decimal that round-trips binary64,
so equal seeds give byte-identical files. The projected CSV appends
``case,e_r,e_o,dist_2r,mu,lambda`` columns. Bench writes one stats row
(``n,method,mean_er,mean_eo,mean_dist2r,max_er,max_eo,max_dist2r,
wall_time``) plus two ``value,cum_fraction`` CDF tables and the
matching figures.

Exit status: 0 on success, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .bench import compute_cdf, run_batch
from .synthetic import SyntheticConfig, make_batch
from .trajectory import EmptyFile, parse_trajectory, trajectory_to_inputs

DQ_HEADER = "qs0,qs1,qs2,qs3,qd0,qd1,qd2,qd3"
PROJ_HEADER = DQ_HEADER + ",case,e_r,e_o,dist_2r,mu,lambda"
STATS_HEADER = ("n,method,mean_er,mean_eo,mean_dist2r,"
                "max_er,max_eo,max_dist2r,wall_time")


class CliError(Exception):
    """Input or usage problem reported to stderr with exit status 2."""


def _fmt(x: float) -> str:
    return repr(float(x))


def _read_dq_csv(path: str) -> np.ndarray:
    rows = []
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot open {path}: {exc}") from exc
    with handle:
        saw_header = False
        for lineno, line in enumerate(handle, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if not saw_header:
                if text != DQ_HEADER:
                    raise CliError(
                        f"{path}:{lineno}: expected header '{DQ_HEADER}', got '{text}'")
                saw_header = True
                continue
            fields = text.split(",")
            if len(fields) != 8:
                raise CliError(f"{path}:{lineno}: expected 8 fields, got {len(fields)}")
            try:
                vals = [float(f) for f in fields]
            except ValueError as exc:
                raise CliError(f"{path}:{lineno}: {exc}") from exc
            if not all(np.isfinite(vals)):
                raise CliError(f"{path}:{lineno}: non-finite value")
            rows.append(vals)
    if not rows:
        raise CliError(f"{path}: no data rows")
    return np.array(rows)


def _write_dq_csv(path: str, rows: np.ndarray, comments: list[str]) -> None:
    with open(path, "w", encoding="utf-8") as out:
        for c in comments:
            out.write(f"# {c}\n")
        out.write(DQ_HEADER + "\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")


def _cmd_synth(args) -> int:
    try:
        cfg = SyntheticConfig(n=args.n, kappa=args.kappa, r=args.r,
                              zero_fraction=args.zero_fraction,
                              translation_bound=args.translation_bound,
                              seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    batch = make_batch(cfg)
    meta = (f"synthetic batch: n={cfg.n} r={cfg.r} kappa={_fmt(cfg.kappa)} "
            f"zero_fraction={_fmt(cfg.zero_fraction)} "
            f"translation_bound={_fmt(cfg.translation_bound)} seed={cfg.seed}")
    _write_dq_csv(args.out, batch.rows(), [meta])
    return 0


def _cmd_project(args) -> int:
    rows = _read_dq_csv(getattr(args, "in"))
    results, _ = run_batch(rows, method="algorithm")
    with open(args.out, "w", encoding="utf-8") as out:
        out.write(PROJ_HEADER + "\n")
        for r in results:
            vals = [*r.qs, *r.qd, r.case, _fmt(r.e_r), _fmt(r.e_o),
                    _fmt(r.dist_2r), _fmt(r.mu), _fmt(r.lam)]
            out.write(",".join(_fmt(v) if isinstance(v, float) else str(v)
                               for v in vals) + "\n")
    return 0


def _cmd_bench(args) -> int:
    from .plots import save_cdf_figure

    rows = _read_dq_csv(getattr(args, "in"))
    results, stats = run_batch(rows, method=args.method)
    with open(args.stats_out, "w", encoding="utf-8") as out:
        out.write(STATS_HEADER + "\n")
        out.write(",".join([
            str(stats.n), stats.method,
            _fmt(stats.mean_er), _fmt(stats.mean_eo), _fmt(stats.mean_dist2r),
            _fmt(stats.max_er), _fmt(stats.max_eo), _fmt(stats.max_dist2r),
            _fmt(stats.wall_time),
        ]) + "\n")

    series = {
        "er": compute_cdf([r.e_r for r in results if r.ok]),
        "eo": compute_cdf([r.e_o for r in results if r.ok]),
    }
    labels = {"er": "unit-norm error", "eo": "orthogonality error"}
    for tag, cdf in series.items():
        csv_path = f"{args.cdf_out}_{tag}.csv"
        with open(csv_path, "w", encoding="utf-8") as out:
            out.write("value,cum_fraction\n")
            for v, f in zip(cdf.sorted_values, cdf.cumulative_fraction):
                out.write(f"{_fmt(v)},{_fmt(f)}\n")
        save_cdf_figure(cdf, labels[tag], f"{args.cdf_out}_{tag}.png",
                        title=f"{args.method}, n={stats.n}")
    return 0


def _cmd_ingest(args) -> int:
    try:
        with open(args.traj, "r", encoding="utf-8") as handle:
            tf = parse_trajectory(handle, source_path=args.traj,
                                  quat_order=args.quat_order)
    except OSError as exc:
        raise CliError(f"cannot open {args.traj}: {exc}") from exc
    except EmptyFile as exc:
        raise CliError(str(exc)) from exc
    pairs = trajectory_to_inputs(tf, perturb_sigma=args.sigma, seed=args.seed)
    rows = np.array([np.concatenate(p) for p in pairs])
    meta = (f"ingested from {args.traj}: poses={len(pairs)} "
            f"skipped_lines={tf.skipped_lines} sigma={_fmt(args.sigma)} "
            f"seed={args.seed}")
    _write_dq_csv(args.out, rows, [meta])
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dqproj",
        description="Exact projection onto the unit dual quaternion set.")
    p.add_argument("--version", action="version", version=f"dqproj {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("synth", help="generate a seeded synthetic batch")
    ps.add_argument("--n", type=int, required=True, help="number of rows")
    ps.add_argument("--r", type=int, default=4, help="factor rank (1..4)")
    ps.add_argument("--kappa", type=float, required=True,
                    help="singular value spread (> 1)")
    ps.add_argument("--zero-fraction", type=float, default=0.10,
                    help="fraction of columns zeroed per part")
    ps.add_argument("--translation-bound", type=float, default=5.0,
                    help="half-width of the translation cube")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", required=True, help="output dual quaternion CSV")
    ps.set_defaults(func=_cmd_synth)

    pp = sub.add_parser("project", help="project every row of a CSV")
    pp.add_argument("--in", required=True, help="input dual quaternion CSV")
    pp.add_argument("--out", required=True, help="projected CSV with diagnostics")
    pp.set_defaults(func=_cmd_project)

    pb = sub.add_parser("bench", help="batch statistics, CDF tables, figures")
    pb.add_argument("--in", required=True, help="input dual quaternion CSV")
    pb.add_argument("--method", choices=["algorithm", "baseline"],
                    default="algorithm")
    pb.add_argument("--stats-out", required=True, help="stats CSV path")
    pb.add_argument("--cdf-out", required=True,
                    help="base path; writes <base>_{er,eo}.csv and .png")
    pb.set_defaults(func=_cmd_bench)

    pi = sub.add_parser("ingest", help="convert a TUM-style trajectory")
    pi.add_argument("--traj", required=True, help="trajectory text file")
    pi.add_argument("--sigma", type=float, default=0.0,
                    help="Gaussian perturbation of all 8 components")
    pi.add_argument("--seed", type=int, default=0)
    pi.add_argument("--quat-order", choices=["xyzw", "wxyz"], default="xyzw")
    pi.add_argument("--out", required=True, help="output dual quaternion CSV")
    pi.set_defaults(func=_cmd_ingest)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"dqproj: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"dqproj: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
