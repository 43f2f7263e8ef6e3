"""Experiment orchestration: sweeps, optimizer comparisons, result files.

Every run derives its random stream from (master seed, method index,
repetition index) through ``SeedSequence``, so experiments reproduce
byte-for-byte regardless of execution order, and every output file embeds
the resolved configuration plus the graph fingerprint it was computed from.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BudgetExceededError, InputError
from .graph import Graph, erdos_renyi, induced_edge_count, planted_instance, read_graph
from .hafnian import hafnian_fast, min_edges_for_pm
from .optimize import (
    AnnealParams,
    charikar_greedy,
    exhaustive_best,
    random_search,
    simulated_annealing,
)
from .sampler import make_explorer, make_tweaker

METHODS = ("uniform-rs", "gbs-rs", "uniform-sa", "gbs-sa")
DEFAULT_CHECKPOINTS = (1, 2, 5, 10, 20, 50, 100, 200, 500)
DEFAULT_PROBS = tuple(round(0.1 * i, 1) for i in range(1, 11))


def derive_rng(master_seed: int, *path: int) -> np.random.Generator:
    """Child stream for (master seed, index path), e.g. (seed, method, rep)."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, path)]))


# ---------------------------------------------------------------------------
# edge/matching-count sweep


@dataclass(frozen=True)
class Fig1Row:
    p: float
    edges: int
    hafnian: int
    bound_edges: int | None  # None when the hafnian is 0 (no bound applies)


@dataclass
class Fig1Result:
    k: int
    probs: tuple[float, ...]
    graphs_per_prob: int
    seed: int
    rows: list[Fig1Row]

    @property
    def zero_hafnian_count(self) -> int:
        return sum(1 for r in self.rows if r.hafnian == 0)


def fig1_sweep(
    k: int = 16,
    probs: tuple[float, ...] = DEFAULT_PROBS,
    graphs_per_prob: int = 600,
    seed: int = 0,
) -> Fig1Result:
    """Random graphs at a ladder of edge probabilities: edge count vs hafnian.

    Each row also records the smallest edge count that the matching bound
    allows for the observed hafnian.  Rows with hafnian 0 keep a None bound;
    they are retained for counting but cannot appear on a log axis.
    """
    if k % 2:
        raise InputError(f"sweep subgraph size must be even, got {k}")
    rows: list[Fig1Row] = []
    for pi, p in enumerate(probs):
        for gi in range(graphs_per_prob):
            g = erdos_renyi(k, p, np.random.SeedSequence([int(seed), pi, gi]))
            h = hafnian_fast(g.adjacency.astype(np.int64))
            bound = min_edges_for_pm(k, h) if h >= 1 else None
            rows.append(Fig1Row(p, g.edge_count(), h, bound))
    return Fig1Result(k, tuple(probs), graphs_per_prob, seed, rows)


# ---------------------------------------------------------------------------
# optimizer comparison


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    graph: dict
    k: int
    out_dir: str
    seed: int = 0
    methods: tuple[str, ...] = METHODS
    repetitions: int = 400
    checkpoints: tuple[int, ...] = DEFAULT_CHECKPOINTS
    anneal: AnnealParams = field(default_factory=AnnealParams)

    def __post_init__(self):
        if self.repetitions < 1:
            raise InputError(f"repetitions must be at least 1, got {self.repetitions}")
        if list(self.checkpoints) != sorted(set(self.checkpoints)) or self.checkpoints[0] < 1:
            raise InputError("checkpoints must be strictly increasing positive integers")
        for m in self.methods:
            if m not in METHODS:
                raise InputError(f"unknown method {m!r}; expected one of {METHODS}")


_CONFIG_KEYS = {
    "experiment", "graph", "k", "out_dir", "seed", "methods", "repetitions",
    "checkpoints", "anneal",
}
_ANNEAL_KEYS = {"t0", "steps", "min_keep", "floor"}


def config_from_dict(raw: dict) -> ExperimentConfig:
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    missing = {"experiment", "graph", "k", "out_dir"} - set(raw)
    if missing:
        raise InputError(f"missing config keys: {sorted(missing)}")
    anneal_raw = raw.get("anneal", {})
    unknown = set(anneal_raw) - _ANNEAL_KEYS
    if unknown:
        raise InputError(f"unknown anneal keys: {sorted(unknown)}")
    kwargs = {k: v for k, v in raw.items() if k not in ("anneal", "methods", "checkpoints")}
    if "methods" in raw:
        kwargs["methods"] = tuple(raw["methods"])
    if "checkpoints" in raw:
        kwargs["checkpoints"] = tuple(raw["checkpoints"])
    return ExperimentConfig(anneal=AnnealParams(**anneal_raw), **kwargs)


def load_config(path) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"config {path} is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise InputError(f"config {path} must hold a JSON object")
    return config_from_dict(raw)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["methods"] = list(cfg.methods)
    d["checkpoints"] = list(cfg.checkpoints)
    return d


def resolve_graph(spec: dict) -> tuple[Graph, dict]:
    """Materialize the config's graph source; returns (graph, provenance)."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise InputError(
            "graph source must be exactly one of "
            '{"file": path}, {"planted": {...}}, {"erdos_renyi": {...}}'
        )
    kind, args = next(iter(spec.items()))
    if kind == "file":
        return read_graph(args), {"source": {"file": str(args)}}
    if kind == "planted":
        unknown = set(args) - {"seed", "shuffle"}
        if unknown:
            raise InputError(f"unknown planted-generator keys: {sorted(unknown)}")
        g, subset = planted_instance(args["seed"], shuffle=args.get("shuffle", False))
        return g, {"source": {"planted": dict(args)}, "planted_subset": list(subset)}
    if kind == "erdos_renyi":
        unknown = set(args) - {"n", "p", "seed"}
        if unknown:
            raise InputError(f"unknown erdos_renyi keys: {sorted(unknown)}")
        return erdos_renyi(args["n"], args["p"], args["seed"]), {
            "source": {"erdos_renyi": dict(args)}
        }
    raise InputError(f"unknown graph source kind {kind!r}")


@dataclass
class AggregateCurve:
    """Mean/stddev of best-so-far edge counts at each checkpoint."""

    checkpoints: list[int]
    mean: list[float]
    stddev: list[float]
    references: dict[str, int] = field(default_factory=dict)


@dataclass
class Fig3Result:
    config: dict
    version: str
    graph_fingerprint: str
    references: dict[str, int]
    curves: dict[str, AggregateCurve]
    fallback_events: dict[str, dict[str, int]]
    provenance: dict


def _method_parts(method: str) -> tuple[str, str]:
    source, algo = method.split("-")
    return source, algo


def fig3_compare(cfg: ExperimentConfig) -> Fig3Result:
    """Repeated optimizer runs on one graph, aggregated per method.

    Each repetition draws from its own stream derived from
    (seed, method index, repetition index).  A failure in any single run
    aborts the experiment after dumping the curves finished so far.
    """
    g, provenance = resolve_graph(cfg.graph)
    references = {"greedy": induced_edge_count(g, charikar_greedy(g, cfg.k))}
    try:
        references["optimum"] = exhaustive_best(g, cfg.k)[1]
    except BudgetExceededError:
        pass

    n_samples = max(cfg.checkpoints)
    curves: dict[str, AggregateCurve] = {}
    fallback_events: dict[str, dict[str, int]] = {}
    try:
        for mi, method in enumerate(cfg.methods):
            source, algo = _method_parts(method)
            explorer = make_explorer(source, g, cfg.k)
            tweaker = None
            if algo == "sa":
                tweaker = make_tweaker(source, g, cfg.k, cfg.anneal.min_keep)
            best = np.empty((cfg.repetitions, len(cfg.checkpoints)), dtype=np.int64)
            events: dict[str, int] = {}
            for rep in range(cfg.repetitions):
                rng = derive_rng(cfg.seed, mi, rep)
                if algo == "rs":
                    trace = random_search(g, cfg.k, n_samples, explorer, rng)
                else:
                    trace = simulated_annealing(g, cfg.k, cfg.anneal, explorer, tweaker, rng)
                for ci, cp in enumerate(cfg.checkpoints):
                    best[rep, ci] = trace.best_at(cp)
                for key, v in trace.fallback_events.items():
                    events[key] = events.get(key, 0) + v
            curves[method] = AggregateCurve(
                checkpoints=list(cfg.checkpoints),
                mean=[float(x) for x in best.mean(axis=0)],
                stddev=[float(x) for x in best.std(axis=0)],
                references=dict(references),
            )
            fallback_events[method] = events
    except Exception:
        _dump_partial(cfg, curves, references, g.fingerprint())
        raise
    return Fig3Result(
        config=config_to_dict(cfg),
        version=__version__,
        graph_fingerprint=g.fingerprint(),
        references=references,
        curves=curves,
        fallback_events=fallback_events,
        provenance=provenance,
    )


def _dump_partial(cfg, curves, references, fingerprint) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "partial": True,
        "config": config_to_dict(cfg),
        "references": references,
        "graph_fingerprint": fingerprint,
        "curves": {m: dataclasses.asdict(c) for m, c in curves.items()},
    }
    (out / f"{cfg.experiment}-partial.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# output files


def emit_outputs(result, fmt: str, path) -> list[Path]:
    """Write a result in the requested format into directory ``path``."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    if isinstance(result, Fig1Result):
        writer = {"csv": _fig1_csv, "json": _fig1_json, "svg": _fig1_svg}
    elif isinstance(result, Fig3Result):
        writer = {"csv": _fig3_csv, "json": _fig3_json, "svg": _fig3_svg}
    else:
        raise InputError(f"cannot emit a {type(result).__name__}")
    if fmt not in writer:
        raise InputError(f"unknown output format {fmt!r}; expected csv, json, or svg")
    return [writer[fmt](result, out)]


def _fig1_csv(result: Fig1Result, out: Path) -> Path:
    lines = ["p,edges,hafnian,bound_edges"]
    for r in result.rows:
        bound = "" if r.bound_edges is None else str(r.bound_edges)
        lines.append(f"{r.p!r},{r.edges},{r.hafnian},{bound}")
    path = out / "fig1.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _fig1_json(result: Fig1Result, out: Path) -> Path:
    payload = {
        "version": __version__,
        "k": result.k,
        "probs": list(result.probs),
        "graphs_per_prob": result.graphs_per_prob,
        "seed": result.seed,
        "zero_hafnian_rows": result.zero_hafnian_count,
        "rows": [dataclasses.asdict(r) for r in result.rows],
    }
    path = out / "fig1.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    return path


def _fig1_svg(result: Fig1Result, out: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [r.edges for r in result.rows if r.hafnian > 0]
    ys = [r.hafnian for r in result.rows if r.hafnian > 0]
    omitted = result.zero_hafnian_count
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter(xs, ys, s=6, alpha=0.35, linewidths=0, label="random graphs")
    from .hafnian import pm_upper_bound

    m = result.k // 2
    ledge = np.arange(m, result.k * (result.k - 1) // 2 + 1)
    bound = [pm_upper_bound(result.k, int(l)) for l in ledge]
    keep = [i for i, b in enumerate(bound) if b >= 1]
    ax.plot(ledge[keep], [bound[i] for i in keep], "k--", label="matching-count bound")
    ax.set_yscale("log")
    ax.set_xlabel("edges")
    ax.set_ylabel("perfect matchings (hafnian)")
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title(f"k={result.k}; {omitted} zero-hafnian graphs omitted")
    path = out / "fig1.svg"
    fig.savefig(path, metadata={"Description": f"omitted {omitted} zero-hafnian rows"})
    plt.close(fig)
    return path


def _fig3_csv(result: Fig3Result, out: Path) -> Path:
    lines = ["method,checkpoint,mean,stddev"]
    for method, curve in result.curves.items():
        for cp, mu, sd in zip(curve.checkpoints, curve.mean, curve.stddev):
            lines.append(f"{method},{cp},{mu!r},{sd!r}")
    path = out / f"{result.config['experiment']}.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _fig3_json(result: Fig3Result, out: Path) -> Path:
    payload = {
        "version": result.version,
        "config": result.config,
        "graph_fingerprint": result.graph_fingerprint,
        "references": result.references,
        "curves": {m: dataclasses.asdict(c) for m, c in result.curves.items()},
        "fallback_events": result.fallback_events,
        "provenance": result.provenance,
    }
    path = out / f"{result.config['experiment']}.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    return path


def load_fig3_json(path) -> dict:
    """Re-read an emitted comparison file, rebuilding AggregateCurve values."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    raw["curves"] = {m: AggregateCurve(**c) for m, c in raw["curves"].items()}
    return raw


def _fig3_svg(result: Fig3Result, out: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for method, curve in result.curves.items():
        ax.errorbar(curve.checkpoints, curve.mean, yerr=curve.stddev,
                    label=method, capsize=2, marker="o", markersize=3)
    for name, value in result.references.items():
        ax.axhline(value, linestyle=":", color="grey")
        ax.annotate(name, (1, value), fontsize=7, va="bottom")
    ax.set_xscale("log")
    ax.set_xlabel("samples")
    ax.set_ylabel("best edge count")
    ax.legend(fontsize=8)
    path = out / f"{result.config['experiment']}.svg"
    fig.savefig(path)
    plt.close(fig)
    return path
