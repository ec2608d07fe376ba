"""Command-line entry point for campaigns, studies, exports, and the
judgment service."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (CampaignError, build_report, campaign_from_dict,
                      export_plot_data, load_campaign, ndcg_study, preset,
                      run_campaign)

PRESET_NAMES = ("smoke", "working-example", "ndcg-study", "sensitivity-tau",
                "sensitivity-mu", "sensitivity-eta", "noise-study",
                "main-comparison")


def _add_common(p) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help="override the campaign master seed")
    p.add_argument("--reps", type=int, default=None,
                   help="override the replication count")
    p.add_argument("--parallel", type=int, default=None,
                   help="worker processes (default: campaign setting)")
    p.add_argument("--out", default=None, help="override the output directory")


def _finish(result) -> int:
    print(f"wrote {result.output_dir}")
    if result.failures:
        for failure in result.failures:
            print(f"FAILED {failure['cell']} rep {failure['rep']}: "
                  f"{failure['error']}", file=sys.stderr)
        return 2
    return 0


def _cmd_run(args) -> int:
    campaign = load_campaign(args.campaign_file)
    if args.seed is not None:
        campaign.master_seed = args.seed
    if args.reps is not None:
        campaign.replications = args.reps
    if args.out is not None:
        campaign.output_dir = args.out
    return _finish(run_campaign(campaign, parallel=args.parallel))


def _cmd_preset(args) -> int:
    campaign = preset(args.name, replications=args.reps,
                      master_seed=args.seed, output_dir=args.out)
    if args.show:
        print(json.dumps(campaign.to_dict(), indent=1, sort_keys=True))
        return 0
    return _finish(run_campaign(campaign, parallel=args.parallel))


def _cmd_ndcg(args) -> int:
    rows, summary = ndcg_study(m_list=args.m, pairs=args.pairs,
                               replications=args.reps or 31,
                               seed=args.seed if args.seed is not None else 1)
    for row in summary:
        print(f"m={row['m']}: median NDCG@20 = {row['median']:.4f} "
              f"(IQR {row['iqr']:.4f})")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "ndcg_summary.json").write_text(
            json.dumps(summary, indent=1) + "\n")
        print(f"wrote {out / 'ndcg_summary.json'}")
    return 0


def _cmd_export(args) -> int:
    paths = export_plot_data(args.campaign_dir, args.kind, cell=args.cell,
                             rep=args.rep, out_dir=args.out)
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_report(args) -> int:
    root = Path(args.campaign_dir)
    marker = root / "campaign.json"
    if not marker.exists():
        raise CampaignError(f"{root} is not a campaign directory")
    campaign = campaign_from_dict(json.loads(marker.read_text())["campaign"])
    metrics = root / "tables" / "metrics.csv"
    if not metrics.exists():
        raise CampaignError(f"no metrics table under {root}; run first")
    rows = []
    header, *lines = metrics.read_text().splitlines()
    cols = header.split(",")
    for line in lines:
        raw = dict(zip(cols, line.split(",")))
        raw["rep"] = int(raw["rep"])
        raw["approx_error"] = float(raw["approx_error"])
        rows.append(raw)
    report = build_report(campaign.cells, rows)
    print(json.dumps(report, indent=1, sort_keys=True))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(state_dir=args.state_dir, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iemo",
        description="preference-guided evolutionary optimization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a campaign file")
    p.add_argument("campaign_file")
    _add_common(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("preset", help="execute a builtin campaign")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--show", action="store_true",
                   help="print the campaign instead of running it")
    _add_common(p)
    p.set_defaults(func=_cmd_preset)

    p = sub.add_parser("ndcg", help="ranking-quality study")
    p.add_argument("--m", type=int, nargs="+", default=[2, 3, 5, 8, 10])
    p.add_argument("--pairs", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=_cmd_ndcg)

    p = sub.add_parser("export", help="plot-data CSV bundles")
    p.add_argument("campaign_dir")
    p.add_argument("kind", choices=["population", "ranks"])
    p.add_argument("--cell", default=None)
    p.add_argument("--rep", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("report", help="recompute the statistics report")
    p.add_argument("campaign_dir")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="start the judgment service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--state-dir", default="sessions")
    p.add_argument("--static-dir", default=None,
                   help="directory with the built web UI, mounted at /")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CampaignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
