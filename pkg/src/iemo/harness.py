"""Experiment campaigns: configuration, execution, persistence, reporting.

A campaign is a YAML key/value tree (schema below) naming cells of
algorithm x problem x oracle and a replication count.  Replication seeds
are a pure function of (master_seed, cell index, replication index), traces
land as JSON-lines under the output directory, and the aggregate tables are
byte-stable so a re-run, a resumed run, and a parallel run all produce
identical files.  Reports chain the statistics module: pairwise Wilcoxon
and A12 plus Scott-Knott ranks per comparison group.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import yaml

try:
    import jsonschema
except ImportError:  # validated manually only when jsonschema is absent
    jsonschema = None

from .algorithms import RunConfig, default_population_size, run
from .dm import DMOracle, biased_weight
from .evo import sort_objective_rows
from .problems import FAMILIES, golden_point, make_problem, sample_pf
from .ranknet import ComparisonRecord, TrainConfig, train
from .stats import MetricSample, a12, approx_error, ndcg_at_k, scott_knott, \
    wilcoxon_signed_rank

FLOAT_FMT = "%.12g"

_CELL_SCHEMA = {
    "type": "object",
    "required": ["name", "algorithm", "problem"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "algorithm": {"enum": ["insga2", "imoead", "ir2ibea"]},
        "problem": {
            "type": "object",
            "required": ["family", "m"],
            "additionalProperties": False,
            "properties": {
                "family": {"enum": list(FAMILIES)},
                "m": {"type": "integer", "minimum": 2},
                "n": {"type": "integer", "minimum": 2},
            },
        },
        "oracle": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "weights": {"enum": ["equal", "biased"]},
                "preferred": {"type": "integer", "minimum": 0},
                "kappa": {"type": ["number", "null"], "exclusiveMinimum": 0},
            },
        },
        "group": {"type": "string"},
        "interactive": {"type": "boolean"},
        "N": {"type": "integer", "minimum": 2},
        "max_fe": {"type": "integer", "minimum": 2},
        "tau": {"type": "integer", "minimum": 2},
        "warmup_gens": {"type": "integer", "minimum": 1},
        "mu": {"type": "integer", "minimum": 2},
        "eta_step": {"type": "number", "minimum": 0},
        "hidden_dim": {"type": "integer", "minimum": 0},
        "sigma": {"type": "number", "exclusiveMinimum": 0},
        "neighborhood_size": {"type": "integer", "minimum": 2},
        "delta_nb": {"type": "number", "minimum": 0, "maximum": 1},
        "nr": {"type": "integer", "minimum": 1},
    },
}

CAMPAIGN_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["name", "master_seed", "replications", "output_dir"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "kind": {"enum": ["runs", "ndcg", "working-example"]},
        "master_seed": {"type": "integer", "minimum": 0},
        "replications": {"type": "integer", "minimum": 1},
        "output_dir": {"type": "string", "minLength": 1},
        "parallelism": {"type": "integer", "minimum": 1},
        "cells": {"type": "array", "items": _CELL_SCHEMA, "minItems": 1},
        "ndcg": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "m_list": {"type": "array",
                           "items": {"type": "integer", "minimum": 2},
                           "minItems": 1},
                "pairs": {"type": "integer", "minimum": 1},
                "k": {"type": "integer", "minimum": 1},
                "pool_size": {"type": "integer", "minimum": 2},
                "held_size": {"type": "integer", "minimum": 2},
            },
        },
    },
}


class CampaignError(ValueError):
    """Invalid campaign configuration or an output directory that belongs
    to a different campaign."""


@dataclass
class Campaign:
    name: str
    master_seed: int
    replications: int
    output_dir: str
    cells: list = field(default_factory=list)
    kind: str = "runs"
    ndcg: dict = field(default_factory=dict)
    parallelism: int = 1

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind,
             "master_seed": self.master_seed,
             "replications": self.replications,
             "output_dir": self.output_dir, "cells": self.cells}
        if self.ndcg:
            d["ndcg"] = self.ndcg
        return d


def campaign_from_dict(raw: dict) -> Campaign:
    if jsonschema is not None:
        try:
            jsonschema.validate(raw, CAMPAIGN_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise CampaignError(f"campaign config invalid: {exc.message}") from exc
    kind = raw.get("kind", "runs")
    cells = raw.get("cells", [])
    if kind == "runs" and not cells:
        raise CampaignError("campaign of kind 'runs' needs at least one cell")
    names = [c["name"] for c in cells]
    if len(set(names)) != len(names):
        raise CampaignError("cell names must be unique")
    return Campaign(name=raw["name"], master_seed=raw["master_seed"],
                    replications=raw["replications"],
                    output_dir=raw["output_dir"], cells=cells, kind=kind,
                    ndcg=raw.get("ndcg", {}),
                    parallelism=raw.get("parallelism", 1))


def load_campaign(path) -> Campaign:
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise CampaignError(f"{path} does not hold a campaign mapping")
    return campaign_from_dict(raw)


def campaign_hash(campaign: Campaign) -> str:
    # identity excludes the output location: moving results is not a change
    d = campaign.to_dict()
    d.pop("output_dir", None)
    blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _oracle_for(cell: dict, m: int, seed) -> DMOracle:
    spec = cell.get("oracle", {})
    if spec.get("weights", "equal") == "biased":
        w = biased_weight(m, spec.get("preferred", 0))
    else:
        w = np.ones(m)
    return DMOracle(w_star=w, kappa=spec.get("kappa"), seed=seed)


def cell_run_config(cell: dict, master_seed: int, cell_index: int,
                    rep: int) -> tuple[RunConfig, DMOracle]:
    """Materialize one replication: seeds are (master, cell, rep) tuples."""
    prob = cell["problem"]
    spec = make_problem(prob["family"], m=prob["m"], n=prob.get("n"))
    passthrough = ("max_fe", "tau", "warmup_gens", "mu", "eta_step",
                   "hidden_dim", "sigma", "neighborhood_size", "delta_nb",
                   "nr")
    kwargs = {k: cell[k] for k in passthrough if k in cell}
    cfg = RunConfig(algorithm=cell["algorithm"], problem=spec,
                    N=cell.get("N", default_population_size(spec.m)),
                    interactive=cell.get("interactive", True),
                    seed=[master_seed, cell_index, rep], **kwargs)
    oracle = _oracle_for(cell, spec.m, seed=[master_seed, cell_index, rep, 1])
    return cfg, oracle


def _execute_job(args):
    cell, master_seed, ci, rep = args
    cfg, oracle = cell_run_config(cell, master_seed, ci, rep)
    res = run(cfg, oracle)
    err = approx_error(res.final_population,
                       golden_point(cfg.problem, oracle.w_star))
    last = res.trajectory[-1]
    row = {
        "cell": cell["name"],
        "algorithm": cell["algorithm"],
        "problem": cell["problem"]["family"],
        "m": cell["problem"]["m"],
        "N": cfg.N,
        "rep": rep,
        "seed": f"{master_seed}-{ci}-{rep}",
        "fe_used": res.fe_used,
        "consultations": len(res.consultation_log),
        "approx_error": float(err),
        "best_psi": last.best_golden,
    }
    trace = [{"gen": t.generation, "fe": t.fe_used, "best_psi": t.best_golden,
              "approx_error": t.approx_error, "consulted": t.consulted}
             for t in res.trajectory]
    population = [[float(v) for v in s.f] for s in res.final_population]
    return ci, rep, row, trace, population


def _final_record(trace_path: Path):
    try:
        with open(trace_path) as fh:
            last = None
            for line in fh:
                if line.strip():
                    last = line
        if last is None:
            return None
        rec = json.loads(last)
        return rec if "final" in rec else None
    except (OSError, json.JSONDecodeError):
        return None


def _write_trace(path: Path, trace, row, population) -> None:
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        for rec in trace:
            fh.write(json.dumps(rec) + "\n")
        fh.write(json.dumps({"final": {"row": row,
                                       "population": population}}) + "\n")
    os.replace(tmp, path)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return FLOAT_FMT % value
    return str(value)


METRIC_COLUMNS = ("cell", "algorithm", "problem", "m", "N", "rep", "seed",
                  "fe_used", "consultations", "approx_error", "best_psi")


def _write_metrics_csv(path: Path, rows) -> None:
    lines = [",".join(METRIC_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in METRIC_COLUMNS))
    path.write_text("\n".join(lines) + "\n")


def _cell_groups(cells) -> dict:
    groups: dict[str, list] = {}
    for cell in cells:
        label = cell.get("group",
                         f"{cell['problem']['family']}-m{cell['problem']['m']}")
        groups.setdefault(label, []).append(cell["name"])
    return groups


def build_report(cells, rows) -> dict:
    """Pairwise Wilcoxon/A12 matrices and Scott-Knott ranks per group."""
    by_cell: dict[str, dict[int, float]] = {}
    for row in rows:
        by_cell.setdefault(row["cell"], {})[row["rep"]] = row["approx_error"]
    report = {"groups": {}}
    for label, names in _cell_groups(cells).items():
        present = [n for n in names if by_cell.get(n)]
        samples = {n: by_cell[n] for n in present}
        pairwise = []
        for a in present:
            for b in present:
                if a == b:
                    pairwise.append({"a": a, "b": b, "p": 1.0, "a12": 0.5,
                                     "magnitude": "negligible"})
                    continue
                common = sorted(set(samples[a]) & set(samples[b]))
                entry = {"a": a, "b": b, "p": None, "a12": None,
                         "magnitude": None}
                if common:
                    va = [samples[a][r] for r in common]
                    vb = [samples[b][r] for r in common]
                    eff = a12(va, vb)
                    entry["a12"] = eff.value
                    entry["magnitude"] = eff.magnitude
                    try:
                        entry["p"] = wilcoxon_signed_rank(va, vb)
                    except ValueError:  # fewer than 5 nonzero differences
                        pass
                pairwise.append(entry)
        ranks = {}
        metric_samples = [
            MetricSample(np.sort(np.asarray(list(samples[n].values()))), n)
            for n in present if samples[n]]
        if metric_samples:
            for cluster in scott_knott(metric_samples):
                for name in cluster.labels:
                    ranks[name] = cluster.rank
        medians = {n: float(np.median(list(samples[n].values())))
                   for n in present}
        report["groups"][label] = {"cells": present, "medians": medians,
                                   "scott_knott": ranks, "pairwise": pairwise}
    return report


def _write_report_files(out: Path, report: dict) -> None:
    (out / "report.json").write_text(
        json.dumps(report, indent=1, sort_keys=True) + "\n")
    lines = ["campaign report", "==============="]
    pw_lines = ["group,a,b,p,a12,magnitude"]
    for label, grp in report["groups"].items():
        lines.append("")
        lines.append(f"[{label}]")
        for name in grp["cells"]:
            rank = grp["scott_knott"].get(name)
            lines.append(f"  {name}: median={_fmt(grp['medians'][name])} "
                         f"rank={rank}")
        for entry in grp["pairwise"]:
            pw_lines.append(",".join([label, entry["a"], entry["b"],
                                      _fmt(entry["p"]), _fmt(entry["a12"]),
                                      entry["magnitude"] or ""]))
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    tables = out / "tables"
    tables.mkdir(exist_ok=True)
    (tables / "pairwise.csv").write_text("\n".join(pw_lines) + "\n")


@dataclass
class CampaignResult:
    output_dir: Path
    rows: list
    failures: list
    report: dict


def run_campaign(campaign: Campaign, parallel: int | None = None,
                 resume: bool = True) -> CampaignResult:
    """Execute every cell x replication, then aggregate tables and report.

    Completed replications (a trace file with a final record) are not
    re-run; a different campaign in the same directory is refused by config
    hash.  Failed replications are collected, not fatal.
    """
    out = Path(os.environ.get("IEMO_OUT") or campaign.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    h = campaign_hash(campaign)
    marker = out / "campaign.json"
    if marker.exists():
        prev = json.loads(marker.read_text())
        if prev.get("config_hash") != h:
            raise CampaignError(
                f"{out} already holds campaign "
                f"{prev.get('campaign', {}).get('name')!r} with a different "
                "configuration; refusing to mix results")
    else:
        marker.write_text(json.dumps(
            {"config_hash": h, "campaign": campaign.to_dict()},
            indent=1, sort_keys=True) + "\n")
    (out / "provenance.json").write_text(json.dumps(
        {"config_hash": h, "master_seed": campaign.master_seed,
         "written_at": datetime.now(timezone.utc).isoformat()},
        indent=1) + "\n")

    if campaign.kind == "ndcg":
        return _run_ndcg_campaign(campaign, out)
    if campaign.kind == "working-example":
        return _run_working_example_campaign(campaign, out)

    rows_by_key: dict[tuple, dict] = {}
    failures = []
    pending = []
    for ci, cell in enumerate(campaign.cells):
        tdir = out / "traces" / cell["name"]
        tdir.mkdir(parents=True, exist_ok=True)
        for rep in range(campaign.replications):
            tpath = tdir / f"rep{rep:03d}.jsonl"
            if resume:
                final = _final_record(tpath)
                if final is not None:
                    rows_by_key[(ci, rep)] = final["final"]["row"]
                    continue
            pending.append((ci, rep, tpath))

    workers = parallel or campaign.parallelism
    jobs = [(campaign.cells[ci], campaign.master_seed, ci, rep)
            for ci, rep, _ in pending]
    paths = {(ci, rep): tpath for ci, rep, tpath in pending}

    def consume(result):
        ci, rep, row, trace, population = result
        _write_trace(paths[(ci, rep)], trace, row, population)
        rows_by_key[(ci, rep)] = row

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_execute_job, job): job for job in jobs}
            for future in futures:
                job = futures[future]
                try:
                    consume(future.result())
                except Exception as exc:
                    failures.append({"cell": job[0]["name"], "rep": job[3],
                                     "error": repr(exc)})
    else:
        for job in jobs:
            try:
                consume(_execute_job(job))
            except Exception as exc:
                failures.append({"cell": job[0]["name"], "rep": job[3],
                                 "error": repr(exc)})

    rows = [rows_by_key[key] for key in sorted(rows_by_key)]
    tables = out / "tables"
    tables.mkdir(exist_ok=True)
    _write_metrics_csv(tables / "metrics.csv", rows)
    report = build_report(campaign.cells, rows)
    _write_report_files(out, report)
    if failures:
        failures.sort(key=lambda f: (f["cell"], f["rep"]))
        (out / "failures.json").write_text(
            json.dumps(failures, indent=1) + "\n")
    return CampaignResult(output_dir=out, rows=rows, failures=failures,
                          report=report)


# --- NDCG ranking-quality study ---

def ndcg_study(m_list=(2, 3, 5, 8, 10), pairs: int = 50,
               replications: int = 31, seed: int = 1, k: int = 20,
               pool_size: int = 50, held_size: int = 20):
    """Rank a held-out uniform sample with a model trained on `pairs`
    oracle-labeled comparisons; returns per-m NDCG@k rows and a summary.

    Candidate vectors are uniform on [0,1]^m, the oracle is the noiseless
    equal-weight Chebyshev value, and relevance grades are L - true_rank
    over the L held-out items (so held_size must be at least k).
    """
    if held_size < k:
        raise ValueError("held-out set smaller than the NDCG cutoff")
    rows = []
    summary = []
    for m in m_list:
        oracle = DMOracle(w_star=np.ones(m))
        values = []
        for rep in range(replications):
            rng = np.random.default_rng([seed, m, rep])
            pool = rng.uniform(size=(pool_size, m))
            held = rng.uniform(size=(held_size, m))
            records = []
            for _ in range(pairs):
                i, j = rng.choice(pool_size, 2, replace=False)
                judgment = oracle.answer(pool[i], pool[j])
                records.append(ComparisonRecord(fi=pool[i], fj=pool[j],
                                                c=judgment.c))
            model = train(records, input_dim=m,
                          cfg=TrainConfig(init_seed=[seed, m, rep, 1]),
                          norm_bounds=(pool.min(axis=0), pool.max(axis=0)))
            scores = model.score_batch(held)
            predicted = np.argsort(-scores, kind="stable")
            psi = np.array([oracle.golden_value(t) for t in held])
            true_order = np.argsort(psi, kind="stable")
            rel = np.empty(held_size)
            rel[true_order] = held_size - 1 - np.arange(held_size)
            value = ndcg_at_k(predicted, rel, k)
            values.append(value)
            rows.append({"m": m, "rep": rep, "ndcg": value})
        q1, q3 = np.percentile(values, [25, 75])
        summary.append({"m": m, "median": float(np.median(values)),
                        "q1": float(q1), "q3": float(q3),
                        "iqr": float(q3 - q1)})
    return rows, summary


def _run_ndcg_campaign(campaign: Campaign, out: Path) -> CampaignResult:
    params = campaign.ndcg
    rows, summary = ndcg_study(m_list=params.get("m_list", [2, 3, 5, 8, 10]),
                               pairs=params.get("pairs", 50),
                               replications=campaign.replications,
                               seed=campaign.master_seed,
                               k=params.get("k", 20),
                               pool_size=params.get("pool_size", 50),
                               held_size=params.get("held_size", 20))
    tables = out / "tables"
    tables.mkdir(exist_ok=True)
    lines = ["m,rep,ndcg"]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in ("m", "rep", "ndcg")))
    (tables / "ndcg.csv").write_text("\n".join(lines) + "\n")
    lines = ["m,median,q1,q3,iqr"]
    for row in summary:
        lines.append(",".join(
            _fmt(row[c]) for c in ("m", "median", "q1", "q3", "iqr")))
    (tables / "ndcg_summary.csv").write_text("\n".join(lines) + "\n")
    report = {"ndcg": summary}
    (out / "report.json").write_text(
        json.dumps(report, indent=1, sort_keys=True) + "\n")
    text = ["NDCG@20 study", "============="]
    for row in summary:
        text.append(f"  m={row['m']}: median={_fmt(row['median'])} "
                    f"IQR={_fmt(row['iqr'])}")
    (out / "report.txt").write_text("\n".join(text) + "\n")
    return CampaignResult(output_dir=out, rows=rows, failures=[],
                          report=report)


# --- the four-solution training walkthrough as a campaign ---

# DTLZ1 m=3 objective vectors with ground-truth preference rank 1..4 under
# the equal-weight Chebyshev value; only three of the twelve possible pairs
# are used for training, so the 3rd-vs-4th order must come out of the model.
EXAMPLE_OBJECTIVES = np.array([
    [0.167, 0.167, 0.167],
    [0.2, 0.15, 0.15],
    [0.3, 0.1, 0.1],
    [0.4, 0.05, 0.05],
])
EXAMPLE_PAIRS = ((0, 1), (0, 2), (1, 3))


def working_example_trial(seed=0, hidden_dim: int = 0,
                          epochs: int = 200) -> tuple[np.ndarray, bool]:
    """Train on the three canonical pairs from one random initialization.

    Returns the four predicted utilities and whether they come out in the
    ground-truth order u1 > u2 > u3 > u4.  The default model is linear.
    """
    records = [ComparisonRecord(fi=EXAMPLE_OBJECTIVES[i],
                                fj=EXAMPLE_OBJECTIVES[j], c=1)
               for i, j in EXAMPLE_PAIRS]
    model = train(records, input_dim=3,
                  cfg=TrainConfig(epochs=epochs, learning_rate=0.05,
                                  init_seed=seed),
                  hidden_dim=hidden_dim)
    u = model.score_batch(EXAMPLE_OBJECTIVES)
    return u, bool(np.all(np.diff(u) < 0))


def _run_working_example_campaign(campaign: Campaign, out: Path) -> CampaignResult:
    reps = campaign.replications
    rows = []
    ok_count = 0
    for rep in range(reps):
        utilities, ordered = working_example_trial(
            seed=[campaign.master_seed, rep])
        ok_count += ordered
        rows.append({"rep": rep, "ordered": int(ordered),
                     "u1": utilities[0], "u2": utilities[1],
                     "u3": utilities[2], "u4": utilities[3]})
    tables = out / "tables"
    tables.mkdir(exist_ok=True)
    lines = ["rep,ordered,u1,u2,u3,u4"]
    for row in rows:
        lines.append(",".join(_fmt(row[c])
                              for c in ("rep", "ordered", "u1", "u2", "u3",
                                        "u4")))
    (tables / "working_example.csv").write_text("\n".join(lines) + "\n")
    report = {"working_example": {"replications": reps,
                                  "ordered_runs": ok_count}}
    (out / "report.json").write_text(
        json.dumps(report, indent=1, sort_keys=True) + "\n")
    (out / "report.txt").write_text(
        f"working example: u1>u2>u3>u4 in {ok_count}/{reps} trainings\n")
    return CampaignResult(output_dir=out, rows=rows, failures=[],
                          report=report)


# --- presets ---

_SENSITIVITY_BASE = {"family": "dtlz2", "m": 3}
_DESK_N = 60
_DESK_FE = 9000


def _desk_cell(name, algorithm, group, **over):
    cell = {"name": name, "algorithm": algorithm,
            "problem": dict(_SENSITIVITY_BASE), "group": group,
            "N": _DESK_N, "max_fe": _DESK_FE,
            "oracle": {"weights": "equal", "kappa": None}}
    cell.update(over)
    return cell


def _sensitivity_preset(param: str, values, algorithm: str) -> list:
    short = param.split("_")[0]
    cells = []
    for value in values:
        tag = f"{short}{value}".replace(".", "p")
        cells.append(_desk_cell(f"{algorithm}-{tag}", algorithm, group=short,
                                **{param: value}))
    return cells


def preset(name: str, replications: int | None = None,
           master_seed: int | None = None,
           output_dir: str | None = None) -> Campaign:
    """Builtin campaign mirroring one of the studies at desk scale."""
    builders = {
        "smoke": _preset_smoke,
        "working-example": _preset_working_example,
        "ndcg-study": _preset_ndcg,
        "sensitivity-tau": lambda: _preset_sensitivity("tau", [5, 10, 20]),
        "sensitivity-mu": lambda: _preset_sensitivity("mu", [5, 10, 20]),
        "sensitivity-eta": lambda: _preset_sensitivity(
            "eta_step", [0.1, 0.2, 0.4], algorithm="imoead"),
        "noise-study": _preset_noise,
        "main-comparison": _preset_main,
    }
    if name not in builders:
        raise CampaignError(
            f"unknown preset {name!r}; choose from {sorted(builders)}")
    campaign = builders[name]()
    if replications is not None:
        campaign.replications = replications
    if master_seed is not None:
        campaign.master_seed = master_seed
    if output_dir is not None:
        campaign.output_dir = output_dir
    return campaign


def _preset_smoke() -> Campaign:
    cells = [_desk_cell("smoke-insga2", "insga2", group="smoke",
                        N=40, max_fe=2400)]
    return Campaign(name="smoke", master_seed=52100, replications=1,
                    output_dir="results/smoke", cells=cells)


def _preset_working_example() -> Campaign:
    return Campaign(name="working-example", master_seed=52101,
                    replications=100, output_dir="results/working-example",
                    kind="working-example")


def _preset_ndcg() -> Campaign:
    return Campaign(name="ndcg-study", master_seed=52102, replications=31,
                    output_dir="results/ndcg-study", kind="ndcg",
                    ndcg={"m_list": [2, 3, 5, 8, 10], "pairs": 50, "k": 20})


def _preset_sensitivity(param, values, algorithm="insga2") -> Campaign:
    if param == "eta_step":
        label = "sensitivity-eta"
    else:
        label = f"sensitivity-{param}"
    cells = _sensitivity_preset(param, values, algorithm)
    return Campaign(name=label, master_seed=52103, replications=11,
                    output_dir=f"results/{label}", cells=cells)


def _preset_noise() -> Campaign:
    cells = []
    kappas = [1, 10, 30, 50, 100, 200, None]
    for algo in ("insga2", "imoead", "ir2ibea"):
        for family in ("dtlz2", "mdtlz2"):
            for kappa in kappas:
                tag = "oracle" if kappa is None else f"kappa{kappa}"
                cells.append({
                    "name": f"{algo}-{family}-{tag}",
                    "algorithm": algo,
                    "problem": {"family": family, "m": 3},
                    "group": f"{algo}-{family}",
                    "N": _DESK_N, "max_fe": _DESK_FE,
                    "oracle": {"weights": "equal", "kappa": kappa},
                })
    return Campaign(name="noise-study", master_seed=52104, replications=11,
                    output_dir="results/noise-study", cells=cells)


def _preset_main() -> Campaign:
    # reduced instance list standing in for the unavailable full table
    families = ("dtlz1", "dtlz2", "dtlz4", "dtlz2inv", "mdtlz2", "wfg3")
    cells = []
    for family in families:
        for m in (3, 5):
            for algo in ("insga2", "imoead", "ir2ibea"):
                cells.append({
                    "name": f"{algo}-{family}-m{m}",
                    "algorithm": algo,
                    "problem": {"family": family, "m": m},
                    "group": f"{family}-m{m}",
                    "oracle": {"weights": "equal", "kappa": None},
                })
    return Campaign(name="main-comparison", master_seed=52105,
                    replications=11, output_dir="results/main-comparison",
                    cells=cells)


# --- plot-data export ---

def export_plot_data(output_dir, kind: str, cell: str | None = None,
                     rep: int = 0, out_dir=None) -> list:
    """Write plot-ready CSV bundles from a completed campaign directory.

    kind="population": final objective vectors of one cell x rep with a
    role column, the oracle's golden point, and a true-front sample.
    kind="ranks": one row per (group, cell) Scott-Knott rank.
    Re-export overwrites the same bytes.
    """
    out_root = Path(output_dir)
    dest = Path(out_dir) if out_dir is not None else out_root / "plots"
    dest.mkdir(parents=True, exist_ok=True)
    marker = out_root / "campaign.json"
    if not marker.exists():
        raise CampaignError(f"{out_root} is not a campaign directory")
    campaign = campaign_from_dict(
        json.loads(marker.read_text())["campaign"])
    written = []
    if kind == "population":
        if cell is None:
            if not campaign.cells:
                raise CampaignError("campaign has no run cells to export")
            cell = campaign.cells[0]["name"]
        spec_cells = [c for c in campaign.cells if c["name"] == cell]
        if not spec_cells:
            raise CampaignError(f"unknown cell {cell!r}")
        cell_spec = spec_cells[0]
        trace = out_root / "traces" / cell / f"rep{rep:03d}.jsonl"
        final = _final_record(trace)
        if final is None:
            raise CampaignError(f"no completed trace at {trace}")
        prob = cell_spec["problem"]
        spec = make_problem(prob["family"], m=prob["m"], n=prob.get("n"))
        oracle = _oracle_for(cell_spec, spec.m, seed=0)
        golden = golden_point(spec, oracle.w_star)
        front = sample_pf(spec, 200, seed=0)
        F = np.asarray(final["final"]["population"])
        nondom = set(int(i) for i in sort_objective_rows(F)[0])
        header = ",".join([f"f{j + 1}" for j in range(spec.m)] + ["role"])
        lines = [header]
        for i, row in enumerate(F):
            role = "nondominated" if i in nondom else "dominated"
            lines.append(",".join([_fmt(float(v)) for v in row] + [role]))
        lines.append(",".join([_fmt(float(v)) for v in golden] + ["golden"]))
        for row in front:
            lines.append(",".join([_fmt(float(v)) for v in row] + ["front"]))
        path = dest / f"population-{cell}-rep{rep:03d}.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    elif kind == "ranks":
        report_path = out_root / "report.json"
        if not report_path.exists():
            raise CampaignError(f"no report.json under {out_root}")
        report = json.loads(report_path.read_text())
        lines = ["group,cell,rank"]
        for label in sorted(report.get("groups", {})):
            grp = report["groups"][label]
            for name in grp["cells"]:
                rank = grp["scott_knott"].get(name)
                lines.append(f"{label},{name},{_fmt(rank)}")
        path = dest / "ranks.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    else:
        raise CampaignError(f"unknown export kind {kind!r}")
    return written
