"""Command line interface: ingest, barcode, entropy, compare, synth.

Exit codes: 0 success, 1 some input failed, 2 bad usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import alpha, ingest, persistence, stats, synth
from .persistence import format_float
from .pipeline import PipelineConfig, load_cloud, process_file

ENTROPY_HEADER = ["image", "group", "n_cells", "pe0", "pe1", "pe_all"]


class UsageError(ValueError):
    pass


def _config(**kw) -> PipelineConfig:
    try:
        return PipelineConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_common(p, *, cells=True):
    if cells:
        p.add_argument("--cells", type=int, default=400, help="cells selected per label matrix (default 400)")
    p.add_argument("--log-base", type=float, default=2.0)
    p.add_argument("--infinite", choices=["drop", "cap"], default="drop", help="infinite-bar policy")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tessentropy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="label matrix -> centroid point cloud of the spiral-selected cells")
    p.add_argument("input")
    p.add_argument("--cells", type=int, default=400)
    p.add_argument("--start", type=int, nargs=2, metavar=("ROW", "COL"))
    p.add_argument("--out", help="output CSV (default: stdout)")

    p = sub.add_parser("barcode", help="point cloud (or label matrix) -> barcode CSV")
    p.add_argument("input")
    p.add_argument("--cells", type=int, default=400)
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.add_argument("--dump-complex", metavar="FILE", help="also write the filtered complex")

    p = sub.add_parser("entropy", help="persistent entropy summary for a batch of inputs")
    p.add_argument("inputs", nargs="+")
    _add_common(p)
    p.add_argument("--group", help="group label for every input (default: parent directory name)")
    p.add_argument("--out", metavar="DIR", help="write entropy.csv and entropy.json here (default: CSV to stdout)")
    p.add_argument("--dump-barcodes", action="store_true", help="write DIR/barcodes/<input>.csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("compare", help="Kruskal-Wallis + Dunn tests on an entropy summary CSV")
    p.add_argument("summary")
    p.add_argument("--adjust", choices=stats.ADJUSTMENTS, default=stats.DEFAULT_ADJUSTMENT)
    p.add_argument("--alpha", type=float, default=stats.DEFAULT_ALPHA, help="significance threshold")
    p.add_argument(
        "--calibrate",
        metavar="REFERENCE",
        help="reference Dunn table (variable,group_a,group_b,p_adjusted); picks --adjust from it",
    )
    p.add_argument("--out", metavar="DIR", help="write stats.json, scatter.csv, boxstats.csv here")

    p = sub.add_parser("synth", help="synthetic point clouds")
    p.add_argument("--kind", choices=["uniform", "hexjitter"], default="hexjitter")
    p.add_argument("--sigma", type=float, default=0.0, help="jitter, in lattice spacings")
    p.add_argument("--n", type=int, default=400, dest="n_points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, help="write COUNT clouds (seeds SEED, SEED+1, ...) into --out DIR")
    p.add_argument("--out", help="output CSV, or directory with --count (default: stdout)")
    return parser


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_ingest(args) -> int:
    data = Path(args.input).read_bytes()
    fmt = "pgm16" if args.input.lower().endswith(".pgm") else "csv"
    m = ingest.load_label_matrix(data, fmt)
    cells = ingest.spiral_select(m, args.cells, tuple(args.start) if args.start else None)
    pc = ingest.compute_centroids(m, cells)
    fh = _open_out(args.out)
    ingest.write_point_cloud(pc, fh)
    if args.out:
        fh.close()
    return 0


def cmd_barcode(args) -> int:
    pc = load_cloud(Path(args.input), _config(n_cells=args.cells))
    fc = alpha.alpha_complex(pc)
    bc = persistence.compute_persistence(fc)
    if args.dump_complex:
        with open(args.dump_complex, "w") as fh:
            alpha.write_complex_dump(fc, fh)
    fh = _open_out(args.out)
    persistence.write_barcode(bc, fh)
    if args.out:
        fh.close()
    return 0


def _entropy_job(job):
    path, cfg = job
    try:
        return True, process_file(path, cfg)
    except Exception as exc:  # reported per file, batch continues
        return False, f"{path}: {type(exc).__name__}: {exc}"


def entropy_rows(results, groups) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ENTROPY_HEADER)
    for r, g in zip(results, groups):
        s = r.summary
        w.writerow([r.image, g, r.n_cells, format_float(s.pe0), format_float(s.pe1), format_float(s.pe_all)])
    return buf.getvalue()


def cmd_entropy(args) -> int:
    cfg = _config(n_cells=args.cells, log_base=args.log_base, infinite_policy=args.infinite)
    jobs = [(p, cfg) for p in args.inputs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            outcomes = list(ex.map(_entropy_job, jobs))
    else:
        outcomes = [_entropy_job(j) for j in jobs]

    results, groups, failed = [], [], 0
    for path, (ok, payload) in zip(args.inputs, outcomes):
        if ok:
            results.append(payload)
            groups.append(args.group or Path(path).resolve().parent.name)
        else:
            failed += 1
            print(f"error: {payload}", file=sys.stderr)

    table = entropy_rows(results, groups)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "entropy.csv").write_text(table)
        records = [
            {"image": r.image, "group": g, "n_cells": r.n_cells, **r.summary.as_dict()}
            for r, g in zip(results, groups)
        ]
        meta = {
            "n_cells": cfg.n_cells,
            "log_base": cfg.log_base,
            "infinite_policy": cfg.infinite_policy,
            "failed": failed,
        }
        (out / "entropy.json").write_text(json.dumps({"config": meta, "samples": records}, indent=2) + "\n")
        if args.dump_barcodes:
            (out / "barcodes").mkdir(exist_ok=True)
            for r in results:
                with open(out / "barcodes" / f"{Path(r.image).stem}.csv", "w") as fh:
                    persistence.write_barcode(r.barcode, fh)
    else:
        sys.stdout.write(table)
    return 1 if failed else 0


def boxstats_rows(samples) -> list[list]:
    rows = []
    for var, g in samples.items():
        for name, vals in g.groups:
            q = np.percentile(vals, [0, 25, 50, 75, 100])
            rows.append([name, var, *(format_float(x) for x in q)])
    return rows


def cmd_compare(args) -> int:
    if not 0 < args.alpha < 1:
        raise UsageError(f"--alpha must lie in (0, 1), got {args.alpha}")
    samples = stats.read_group_table(args.summary)
    adjustment = args.adjust
    report = None
    if args.calibrate:
        report = stats.calibrate_adjustment(samples, stats.read_dunn_reference(args.calibrate))
        adjustment = report.chosen
        print(report.format(), file=sys.stderr)
    result = stats.compare_groups(samples, adjustment, args.alpha)
    if report is not None:
        result["calibration"] = {
            "chosen": report.chosen,
            "rtol": report.rtol,
            "scores": {m: {"matched": a, "total": b, "worst_rel_error": c} for m, (a, b, c) in report.scores.items()},
        }
    text = json.dumps(result, indent=2) + "\n"
    if not args.out:
        sys.stdout.write(text)
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "stats.json").write_text(text)
    with open(args.summary, newline="") as fh, open(out / "scatter.csv", "w", newline="") as sc:
        w = csv.writer(sc, lineterminator="\n")
        w.writerow(["group", *stats.VARIABLES])
        for row in csv.DictReader(fh):
            w.writerow([row["group"], *(row[v] for v in stats.VARIABLES)])
    with open(out / "boxstats.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["group", "variable", "min", "q1", "median", "q3", "max"])
        w.writerows(boxstats_rows(samples))
    return 0


def cmd_synth(args) -> int:
    if args.n_points < 3 or args.sigma < 0:
        raise UsageError("synth needs --n >= 3 and --sigma >= 0")
    if args.count is not None:
        if not args.out:
            raise UsageError("--count requires --out DIR")
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for k in range(args.count):
            pc = synth.synth_points(args.kind, args.n_points, args.seed + k, args.sigma)
            with open(out / f"{args.kind}_{args.seed + k:04d}.csv", "w") as fh:
                ingest.write_point_cloud(pc, fh)
        return 0
    pc = synth.synth_points(args.kind, args.n_points, args.seed, args.sigma)
    fh = _open_out(args.out)
    ingest.write_point_cloud(pc, fh)
    if args.out:
        fh.close()
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "barcode": cmd_barcode,
    "entropy": cmd_entropy,
    "compare": cmd_compare,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
