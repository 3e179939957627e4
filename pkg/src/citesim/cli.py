"""Command-line driver: generate networks, run simulations and experiments.

Exit codes: 0 success, 1 runtime/IO failure, 2 usage or validation failure.
All outputs are UTF-8 with LF line endings and %.10g float formatting, so
identical configurations reproduce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from importlib import resources

import numpy as np

from . import __version__
from .errors import CitesimError, ConfigurationError, IngestionError
from .graph import Gender, generate_synthetic, load_edge_list, save_graph
from .simulation import run_simulation, sim_config_from_json, config_fingerprint
from .stats import (CdsBenchmark, cds_overcitation, one_sample_t_test,
                    ols_trend, per_agent_mean_overcitation,
                    per_year_mean_overcitation, yearly_overcitation)
from .experiments import (run_sweep, sweep_spec_from_json, write_summary_csv,
                          write_run_artifacts)


class CliError(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _fmt(x: float) -> str:
    return "%.10g" % x


def _fnum(x: float) -> float:
    """Round-trip a float through %.10g for stable JSON output."""
    return float(_fmt(x))


# -- output directory and manifest helpers -----------------------------------


def _prepare_out_dir(path: str, force: bool) -> None:
    if os.path.isdir(path) and os.listdir(path) and not force:
        raise CliError(1, "output directory %s is not empty (use --force)" % path)
    os.makedirs(path, exist_ok=True)


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: str, config_hash: str, master_seed, started: float) -> None:
    files = {}
    for name in sorted(os.listdir(out_dir)):
        full = os.path.join(out_dir, name)
        if name != "manifest.json" and os.path.isfile(full):
            files[name] = _sha256(full)
    doc = {
        "tool_version": __version__,
        "config_hash": config_hash,
        "master_seed": master_seed,
        "started": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "finished": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "files": files,
    }
    tmp = os.path.join(out_dir, "manifest.json.tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, os.path.join(out_dir, "manifest.json"))


def _resolve_seed(flag_seed, config_seed):
    """Precedence: --seed flag, then CITESIM_SEED, then the config value."""
    if flag_seed is not None:
        return flag_seed
    env = os.environ.get("CITESIM_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(2, "CITESIM_SEED must be an integer, got %r" % env) from None
    return config_seed


# -- generate -----------------------------------------------------------------


def cmd_generate(args) -> int:
    for flag, value, lo, hi in (("--woman-fraction", args.woman_fraction, 0.0, 1.0),
                                ("--assortativity", args.assortativity, 0.0, 1.0),
                                ("--hub-bias", args.hub_bias, 0.0, 1.0)):
        if not lo <= value <= hi:
            raise CliError(2, "%s must be in [%g, %g], got %g" % (flag, lo, hi, value))
    if args.n < 2:
        raise CliError(2, "--n must be >= 2")
    if not 0 < args.mean_degree < args.n:
        raise CliError(2, "--mean-degree must be positive and below --n")
    seed = _resolve_seed(args.seed, 1)
    started = time.time()
    _prepare_out_dir(args.out, args.force)
    graph = generate_synthetic(args.n, args.woman_fraction, args.mean_degree,
                               args.assortativity, seed=seed, hub_bias=args.hub_bias)
    save_graph(graph, os.path.join(args.out, "edges.txt"),
               os.path.join(args.out, "genders.txt"))
    params = {"n": args.n, "woman_fraction": args.woman_fraction,
              "mean_degree": args.mean_degree, "assortativity": args.assortativity,
              "hub_bias": args.hub_bias, "seed": seed}
    chash = hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()
    _write_manifest(args.out, chash, seed, started)
    return 0


# -- simulate -----------------------------------------------------------------


def _load_config_file(path):
    if path is None:
        return resources.files("citesim.data").joinpath("default_config.json").read_text("utf-8")
    if not os.path.isfile(path):
        raise CliError(1, "config file not found: %s" % path)
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_graph_dir(path):
    edges = os.path.join(path, "edges.txt")
    genders = os.path.join(path, "genders.txt")
    for p in (edges, genders):
        if not os.path.isfile(p):
            raise CliError(1, "graph file not found: %s" % p)
    graph, _ = load_edge_list(edges, genders)
    return graph


def _test_result_doc(res) -> dict:
    return {"statistic": _fnum(res.statistic), "df": _fnum(res.df),
            "p_value": _fnum(res.p_value), "estimate": _fnum(res.estimate)}


def cmd_simulate(args) -> int:
    text = _load_config_file(args.config)
    config = sim_config_from_json(text)
    seed = _resolve_seed(args.seed, config.master_seed)
    if seed != config.master_seed:
        import dataclasses
        config = dataclasses.replace(config, master_seed=seed)
        config.validate()
    if args.dry_run:
        return 0
    graph = _load_graph_dir(args.graph)
    started = time.time()
    _prepare_out_dir(args.out, args.force)
    records = run_simulation(graph, config, out_dir=args.out)
    oc = yearly_overcitation(records)

    path = os.path.join(args.out, "overcitation.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("agent_id,agent_gender,year,cited_gender,obs,exp,overcitation\n")
        for r in oc:
            fh.write("%d,%s,%d,%s,%s,%s,%s\n"
                     % (r.agent_id, r.agent_gender.value, r.year,
                        r.cited_gender.value, _fmt(r.obs), _fmt(r.exp),
                        _fmt(r.overcitation)))

    tests = {}
    for gender, tag in ((None, "all"), (Gender.WOMAN, "women"), (Gender.MAN, "men")):
        values = list(per_agent_mean_overcitation(oc, Gender.WOMAN, gender).values())
        tests["%s_mean_overcitation_w" % tag] = _test_result_doc(
            one_sample_t_test(values, 0.0))
        series = per_year_mean_overcitation(oc, Gender.WOMAN, gender)
        tests["%s_trend_overcitation_w" % tag] = _test_result_doc(ols_trend(series))
    with open(os.path.join(args.out, "tests.json"), "w", encoding="utf-8",
              newline="\n") as fh:
        json.dump(tests, fh, indent=1, sort_keys=True)
        fh.write("\n")

    _write_manifest(args.out, config_fingerprint(config), config.master_seed, started)
    return 0


# -- experiment ----------------------------------------------------------------


def cmd_experiment(args) -> int:
    if not os.path.isfile(args.spec):
        raise CliError(1, "spec file not found: %s" % args.spec)
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = sweep_spec_from_json(fh.read())
    seed = _resolve_seed(args.seed, spec.base.master_seed)
    if seed != spec.base.master_seed:
        import dataclasses
        spec = dataclasses.replace(
            spec, base=dataclasses.replace(spec.base, master_seed=seed))
    started = time.time()
    out_dir = os.path.join(args.out, spec.name)
    _prepare_out_dir(out_dir, args.force)
    result = run_sweep(spec, n_jobs=args.jobs)
    write_summary_csv(result, os.path.join(out_dir, "summary.csv"))
    write_run_artifacts(result, os.path.join(out_dir, "runs"))
    spec_hash = hashlib.sha256(
        json.dumps({"parameter": spec.parameter, "values": list(spec.values),
                    "replicates": spec.replicates, "name": spec.name},
                   sort_keys=True).encode()).hexdigest()
    _write_manifest(out_dir, spec_hash, spec.base.master_seed, started)
    return 0


# -- cds ------------------------------------------------------------------------


def _load_benchmark(path) -> CdsBenchmark:
    if path is None:
        return CdsBenchmark()
    if not os.path.isfile(path):
        raise CliError(1, "benchmark file not found: %s" % path)
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CliError(2, "benchmark file is not valid JSON: %s" % exc) from None
    try:
        return CdsBenchmark(ww=float(doc["ww"]), mw=float(doc["mw"]),
                            wm=float(doc["wm"]), mm=float(doc["mm"]))
    except KeyError as exc:
        raise CliError(2, "benchmark file missing key %s" % exc) from None


def cmd_cds(args) -> int:
    if not os.path.isfile(args.input):
        raise CliError(1, "input file not found: %s" % args.input)
    benchmark = _load_benchmark(args.benchmark)
    rows = []
    with open(args.input, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != \
                ["paper_id", "rep_ww", "rep_mw", "rep_wm", "rep_mm"]:
            raise CliError(2, "%s:1: expected header "
                           "'paper_id,rep_ww,rep_mw,rep_wm,rep_mm'" % args.input)
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 5:
                raise CliError(2, "%s:%d: expected 5 fields, got %d"
                               % (args.input, lineno, len(row)))
            try:
                rates = [float(x) for x in row[1:]]
            except ValueError:
                raise CliError(2, "%s:%d: non-numeric rate" % (args.input, lineno)) from None
            if min(rates) < 0:
                raise CliError(2, "%s:%d: negative rate" % (args.input, lineno))
            if sum(rates) > 1.0 + 1e-6:
                raise CliError(2, "%s:%d: rates sum to %.6g > 1"
                               % (args.input, lineno, sum(rates)))
            rows.append((row[0], dict(zip(("ww", "mw", "wm", "mm"), rates))))
    if not rows:
        raise CliError(2, "%s: no data rows" % args.input)

    out_lines = ["paper_id,oc_ww,oc_mw,oc_wm,oc_mm"]
    per_cat = {c: [] for c in ("ww", "mw", "wm", "mm")}
    for paper_id, rates in rows:
        oc = cds_overcitation(rates, benchmark)
        for c in per_cat:
            per_cat[c].append(oc[c])
        out_lines.append("%s,%s,%s,%s,%s" % (paper_id, _fmt(oc["ww"]),
                                             _fmt(oc["mw"]), _fmt(oc["wm"]),
                                             _fmt(oc["mm"])))
    agg = ["aggregate_mean"] + [_fmt(float(np.mean(per_cat[c]))) for c in
                                ("ww", "mw", "wm", "mm")]
    out_lines.append(",".join(agg))
    if len(rows) > 1:
        sems = ["aggregate_sem"] + [_fmt(float(np.std(per_cat[c], ddof=1)
                                                / np.sqrt(len(rows))))
                                    for c in ("ww", "mw", "wm", "mm")]
        out_lines.append(",".join(sems))
    text = "\n".join(out_lines) + "\n"

    if args.out is None:
        sys.stdout.write(text)
        return 0
    started = time.time()
    _prepare_out_dir(args.out, args.force)
    with open(os.path.join(args.out, "cds_overcitation.csv"), "w",
              encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    chash = hashlib.sha256(text.encode()).hexdigest()
    _write_manifest(args.out, chash, None, started)
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citesim",
        description="Agent-based simulation of gender-biased citation dynamics.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a synthetic co-authorship network")
    g.add_argument("--n", type=int, default=2000, help="number of authors")
    g.add_argument("--woman-fraction", type=float, default=0.30)
    g.add_argument("--mean-degree", type=float, default=2.5)
    g.add_argument("--assortativity", type=float, default=0.1,
                   help="same-gender rewiring strength in [0, 1]")
    g.add_argument("--hub-bias", type=float, default=0.3,
                   help="preferential-attachment share of edge targets")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True)
    g.add_argument("--force", action="store_true")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("simulate", help="run one simulation from a config")
    s.add_argument("--config", default=None, help="config JSON (default: bundled)")
    s.add_argument("--graph", required=True, help="directory with edges.txt/genders.txt")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--dry-run", action="store_true")
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("experiment", help="run a parameter sweep from a spec")
    e.add_argument("--spec", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--force", action="store_true")
    e.set_defaults(func=cmd_experiment)

    c = sub.add_parser("cds", help="overcitation of reported CDS citation rates")
    c.add_argument("--input", required=True, help="CSV: paper_id,rep_ww,rep_mw,rep_wm,rep_mm")
    c.add_argument("--benchmark", default=None, help="JSON with ww/mw/wm/mm rates")
    c.add_argument("--out", default=None)
    c.add_argument("--force", action="store_true")
    c.set_defaults(func=cmd_cds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print("citesim: error: %s" % exc, file=sys.stderr)
        return exc.code
    except (ConfigurationError, IngestionError) as exc:
        print("citesim: error: %s" % exc, file=sys.stderr)
        return 2
    except CitesimError as exc:
        print("citesim: error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("citesim: error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
