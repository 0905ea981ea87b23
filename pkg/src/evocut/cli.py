"""``evocut`` command line: generate, analyze, sweep.

Exit codes: 0 success, 1 usage or validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .evolution import RNG_VERSION, ConfigError, EvolutionConfig, run
from .graph import GraphError, load_edge_list, store_edge_list
from .plotting import PlotError, degree_plot_spec, emit_plot
from .stats import FitError, compare_fits, degree_histogram, fit_power_law, fit_stretched_exponential, pk

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2

EDGES_FILE = "edges.txt"
TRACE_FILE = "trace.csv"
MANIFEST_FILE = "manifest.json"
CONFIG_FILE = "config.json"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _sha256(data: str | bytes) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()


def _int_list(text: str) -> list[int]:
    items = [x for x in text.replace(" ", "").split(",") if x]
    try:
        return [int(x) for x in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _kmin(text: str) -> int | str:
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--kmin must be a positive integer or 'auto'") from None
    if value < 1:
        raise argparse.ArgumentTypeError("--kmin must be >= 1")
    return value


# ---------------------------------------------------------------------------
# generate

def generate_run(config: EvolutionConfig, out_dir: Path) -> dict:
    """Run one evolution and write its edge list, trace and manifest."""
    trace = run(config)
    edges = store_edge_list(trace.graph)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / EDGES_FILE).write_text(edges, encoding="utf-8")
    (out_dir / TRACE_FILE).write_text(trace.to_csv(), encoding="utf-8")
    (out_dir / CONFIG_FILE).write_text(_dump_json(config.to_dict()), encoding="utf-8")
    manifest = {
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "rng": RNG_VERSION,
        "seed": config.seed,
        "n": trace.graph.n,
        "m": trace.graph.m,
        "n0": trace.n0,
        "m0": trace.m0,
        "files": {"edges": EDGES_FILE, "trace": TRACE_FILE, "config": CONFIG_FILE},
        "edges_sha256": _sha256(edges),
    }
    (out_dir / MANIFEST_FILE).write_text(_dump_json(manifest), encoding="utf-8")
    return {"trace": trace, "manifest": manifest}


def cmd_generate(args) -> int:
    config = EvolutionConfig.load(args.config)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    out = generate_run(config, Path(args.out))
    m = out["manifest"]
    print(f"wrote {args.out}: n={m['n']} m={m['m']} config_hash={m['config_hash'][:12]}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze

def check_manifest(edge_path: Path, edges_text: str) -> list[str]:
    """Consistency warnings for an edge list that sits next to a run manifest."""
    manifest_path = edge_path.parent / MANIFEST_FILE
    if not manifest_path.exists():
        return []
    warnings = []
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        config = EvolutionConfig.from_dict(manifest["config"])
    except (ValueError, KeyError, TypeError) as exc:
        return [f"unreadable manifest {manifest_path}: {exc}"]
    recorded = manifest.get("config_hash")
    if config.config_hash() != recorded:
        warnings.append(f"manifest config hash {recorded} does not match its config")
    sidecar = edge_path.parent / manifest.get("files", {}).get("config", CONFIG_FILE)
    if sidecar.exists():
        try:
            side = EvolutionConfig.from_dict(json.loads(sidecar.read_text(encoding="utf-8")))
            if side.config_hash() != recorded:
                warnings.append(f"sidecar {sidecar.name} hash {side.config_hash()} does not match manifest hash {recorded}")
        except ValueError as exc:
            warnings.append(f"unreadable sidecar config {sidecar}: {exc}")
    if manifest.get("files", {}).get("edges") == edge_path.name and manifest.get("edges_sha256") != _sha256(edges_text):
        warnings.append(f"{edge_path.name} differs from the edge list recorded in the manifest")
    return warnings


def analyze_text(edges_text: str, k_min: int | str = "auto", normalization: str = "by_n") -> dict:
    g, _ = load_edge_list(edges_text)
    if g.n == 0:
        raise UsageError("edge list contains no edges")
    h = degree_histogram(g)
    fits = {}
    try:
        fits["power_law"] = fit_power_law(h, k_min).report()
    except FitError as exc:
        fits["power_law"] = {"error": f"{type(exc).__name__}: {exc}"}
    try:
        fits["stretched_exponential"] = fit_stretched_exponential(h).report()
    except FitError as exc:
        fits["stretched_exponential"] = {"error": f"{type(exc).__name__}: {exc}"}
    comparison = compare_fits(h, k_min if isinstance(k_min, int) else 1)
    cmp_report = comparison.report()
    fits["comparison"] = {key: cmp_report[key] for key in ("verdict", "reason", "margin", "loglik")}
    fits["comparison"]["k_min"] = comparison.power.k_min if comparison.power else None
    fits["n"] = h.n
    fits["m"] = h.two_m // 2
    return {"graph": g, "histogram": h, "comparison": comparison, "report": fits, "normalization": normalization}


def cmd_analyze(args) -> int:
    path = Path(args.edgelist)
    text = path.read_text(encoding="utf-8")
    for w in check_manifest(path, text):
        print(f"warning: {w}", file=sys.stderr)
    result = analyze_text(text, args.kmin, args.norm)
    h = result["histogram"]
    out_dir = Path(args.out) if args.out else path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = path.stem
    (out_dir / f"{stem}.hist.csv").write_text(h.to_csv(), encoding="utf-8")
    by_n = dict(pk(h, "by_n"))
    by_2m = dict(pk(h, "by_2m"))
    pk_csv = "degree,p_by_n,p_by_2m\n" + "".join(f"{d},{by_n[d]!r},{by_2m[d]!r}\n" for d in h.counts)
    (out_dir / f"{stem}.pk.csv").write_text(pk_csv, encoding="utf-8")
    (out_dir / f"{stem}.fit.json").write_text(_dump_json(result["report"]), encoding="utf-8")
    if args.plot:
        emit_plot(degree_plot_spec(h, args.norm, result["comparison"], title=stem), args.plot)
    report = result["report"]
    pl = report["power_law"]
    se = report["stretched_exponential"]
    print(f"n={report['n']} m={report['m']}")
    print("power law: " + (f"gamma={pl['params']['gamma']:.4f} k_min={pl['k_min']} ks={pl['goodness']['ks']:.4f}" if "error" not in pl else pl["error"]))
    print("stretched exponential: " + (f"beta={se['params']['beta']:.4f} kappa={se['params']['kappa']:.4f} r2={se['goodness']['r2']:.4f}" if "error" not in se else se["error"]))
    print(f"verdict: {report['comparison']['verdict']} ({report['comparison']['reason']})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep

SUMMARY_FIELDS = ("k", "seed", "n", "m", "gamma", "k_min", "beta", "kappa", "verdict", "error")


def sweep_one(config_dict: dict, k: int, seed: int, out_dir: str) -> dict:
    row = dict.fromkeys(SUMMARY_FIELDS, "")
    row.update(k=k, seed=seed)
    try:
        config = EvolutionConfig.from_dict(config_dict).replace(k=k, seed=seed)
        result = generate_run(config, Path(out_dir) / f"k{k}_seed{seed}")
        g = result["trace"].graph
        row.update(n=g.n, m=g.m)
        h = degree_histogram(g)
        errors = []
        try:
            pl = fit_power_law(h, "auto")
            row.update(gamma=f"{pl.gamma:.6f}", k_min=pl.k_min)
        except FitError as exc:
            errors.append(type(exc).__name__)
        try:
            se = fit_stretched_exponential(h)
            row.update(beta=f"{se.beta:.6f}", kappa=f"{se.kappa:.6f}")
        except FitError as exc:
            errors.append(type(exc).__name__)
        row["verdict"] = compare_fits(h).verdict
        row["error"] = ";".join(errors)
    except Exception as exc:  # row-local by design: one bad run must not end the sweep
        row["error"] = f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
    return row


def sweep_threads() -> int:
    raw = os.environ.get("EVOCUT_THREADS", "")
    try:
        return max(1, int(raw)) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise UsageError(f"EVOCUT_THREADS must be an integer, got {raw!r}") from None


def run_sweep(config: EvolutionConfig, ks: list[int], seeds: list[int], out_dir: Path, threads: int = 1) -> list[dict]:
    if not ks:
        raise UsageError("empty k list")
    if not seeds:
        raise UsageError("empty seed list")
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(config.to_dict(), k, s, str(out_dir)) for k in ks for s in seeds]
    if threads <= 1 or len(jobs) == 1:
        rows = [sweep_one(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(sweep_one, *zip(*jobs)))
    summary = ",".join(SUMMARY_FIELDS) + "\n" + "".join(",".join(str(r[f]) for f in SUMMARY_FIELDS) + "\n" for r in rows)
    (out_dir / "summary.csv").write_text(summary, encoding="utf-8")
    return rows


def cmd_sweep(args) -> int:
    config = EvolutionConfig.load(args.config)
    seeds = args.seeds if args.seeds is not None else [config.seed]
    rows = run_sweep(config, args.k, seeds, Path(args.out), sweep_threads())
    for r in rows:
        print(f"k={r['k']} seed={r['seed']} gamma={r['gamma'] or '-'} beta={r['beta'] or '-'} verdict={r['verdict'] or '-'}" + (f" error={r['error']}" if r["error"] else ""))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evocut", description="Cut-based network growth models and degree-distribution analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="grow a network from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="degree distribution and fits for an edge list")
    p.add_argument("edgelist")
    p.add_argument("--kmin", type=_kmin, default="auto", help="power-law cutoff (integer or 'auto')")
    p.add_argument("--norm", choices=("by_n", "by_2m"), default="by_n")
    p.add_argument("--plot", help="write a log-log SVG of p(k) here")
    p.add_argument("--out", help="directory for CSV/JSON outputs (default: next to the edge list)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="run a config over several k values and seeds")
    p.add_argument("--config", required=True)
    p.add_argument("--k", type=_int_list, required=True, help="comma-separated k values")
    p.add_argument("--seeds", type=_int_list, help="comma-separated seeds (default: the config seed)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GraphError, UsageError, PlotError) as exc:
        print(f"evocut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"evocut: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
