"""Command-line front end: ``python3 -m cospectra <subcommand> ...``.

Every output starts with its provenance: JSON outputs wrap the payload as
``{"schema", "version", "config", "data"}``; CSV and graph6 outputs carry the
same information on leading ``#`` lines.  Wall-clock timings are kept out of
the data section (JSON key ``timing``; a trailing ``#`` line otherwise), so
re-running a config reproduces the data byte for byte.

Exit codes: 0 success, 1 I/O failure, 2 invalid arguments, 3 budget or
termination, 4 nothing found.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .certify import CertifyBudget, Outcome, certify
from .experiments import TABLE1_COLUMNS, core_of, named_tree, pendant_count_experiment, table1_experiment
from .formats import from_bytes, graph_to_json, loads_graph, to_interchange
from .graph import Graph, SampleConfig, giant_component, k_core, sample_gnp
from .isomorphism import BudgetExceeded, is_isomorphic
from .pendant import find_pendant_copies, swap_pendant
from .spectral import are_cospectral, are_r_cospectral, char_poly
from .switching import apply_switch, gm_find_sets
from .trees import SwapMode, catalog_pair

__all__ = ["RunConfig", "main", "build_parser", "EXIT_OK", "EXIT_IO", "EXIT_USAGE", "EXIT_BUDGET", "EXIT_NOT_FOUND"]

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_BUDGET, EXIT_NOT_FOUND = 0, 1, 2, 3, 4
SCHEMA_VERSION = 1


class UsageError(ValueError):
    pass


class NotFound(Exception):
    pass


@dataclass
class RunConfig:
    """Validated subcommand parameters; serialized into every output."""

    command: str
    n: int | None = None
    lam: float | None = None
    trials: int | None = None
    seed: int = 0
    t: str | None = None
    k: int | None = None
    mode: str | None = None
    budget: int | None = None
    output: str | None = None
    format: str = "json"
    input: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.n is not None and self.n < 0:
            raise UsageError("--n must be non-negative")
        if self.lam is not None and self.lam < 0:
            raise UsageError("--lambda must be non-negative")
        if self.trials is not None and self.trials < 0:
            raise UsageError("--trials must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        if self.k is not None and self.k < 2:
            raise UsageError("--k must be at least 2")
        if self.budget is not None and self.budget < 1:
            raise UsageError("--budget must be positive")
        if self.format not in ("json", "csv", "graph6"):
            raise UsageError("--format must be json, csv or graph6")
        if self.mode is not None and self.mode not in (m.value for m in SwapMode):
            raise UsageError("--mode must be cospectral or r-cospectral")
        if self.input is None and self.command in ("sample", "mate", "switch", "certify") and (self.n is None or self.lam is None):
            raise UsageError("give --input or both --n and --lambda")
        return self

    def to_json(self) -> dict:
        return asdict(self)


# -- output ------------------------------------------------------------------


def _header(cfg: RunConfig) -> list[str]:
    return [
        f"# schema: cospectra.{cfg.command}/{SCHEMA_VERSION}",
        f"# version: {__version__}",
        "# config: " + json.dumps(cfg.to_json(), sort_keys=True),
    ]


def _emit(cfg: RunConfig, data: dict, graphs: list[tuple[str, Graph]], csv_text: str | None, timing: dict) -> None:
    if cfg.format == "json":
        doc = {
            "schema": f"cospectra.{cfg.command}/{SCHEMA_VERSION}",
            "version": __version__,
            "config": cfg.to_json(),
            "data": data,
            "timing": timing,
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif cfg.format == "csv":
        text = "\n".join(_header(cfg)) + "\n" + csv_text + "# timing: " + json.dumps(timing, sort_keys=True) + "\n"
    else:
        lines = _header(cfg) + [f"# {name}\n" + to_interchange(g).decode() for name, g in graphs]
        text = "\n".join(lines) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read_graph(path: str) -> Graph:
    raw = Path(path).read_bytes()
    text = raw.decode().strip()
    if text.startswith("{"):
        return loads_graph(text)
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            return from_bytes(line)
    raise UsageError(f"{path} holds no graph")


def _poly(g: Graph) -> list[str]:
    return [str(c) for c in char_poly(g).coeffs]


def _sampled(cfg: RunConfig) -> tuple[Graph, Graph, Graph]:
    g = sample_gnp(SampleConfig(cfg.n, cfg.lam, cfg.seed))
    if g.n == 0:
        return g, g, g
    giant = giant_component(g)
    return g, giant, k_core(giant, 2)


# -- subcommands -------------------------------------------------------------


def cmd_sample(cfg: RunConfig):
    g, giant, core = _sampled(cfg)
    graphs = [("graph", g), ("giant", giant), ("core", core)]
    data = {name: graph_to_json(x) for name, x in graphs}
    data["sizes"] = {name: [x.n, x.m] for name, x in graphs}
    _say(f"sampled n={g.n} m={g.m}; giant {giant.n} vertices; 2-core {core.n} vertices")
    return data, graphs, None


def cmd_mate(cfg: RunConfig):
    pair = catalog_pair(cfg.mode or SwapMode.COSPECTRAL)
    if cfg.input:
        host = _read_graph(cfg.input)
    else:
        _, host, _ = _sampled(cfg)
    copies = find_pendant_copies(host, pair.first) if host.n else []
    if not copies:
        raise NotFound(f"no pendant copy of the {pair.t}-vertex tree found")
    e = min(copies, key=lambda c: (c.root, c.vertices))
    mate = swap_pendant(host, e, pair)
    data = {
        "graph": graph_to_json(host),
        "mate": graph_to_json(mate),
        "root": e.root,
        "embedding": list(e.vertices),
        "char_poly": _poly(host),
        "cospectral": are_cospectral(host, mate),
        "r_cospectral": are_r_cospectral(host, mate),
        "isomorphic": is_isomorphic(host, mate),
        "tree_size": pair.t,
        "mode": pair.mode.value,
    }
    _say(f"swapped the pendant tree at root {e.root}: cospectral={data['cospectral']} "
         f"r-cospectral={data['r_cospectral']} isomorphic={data['isomorphic']}")
    return data, [("graph", host), ("mate", mate)], None


def cmd_switch(cfg: RunConfig):
    g = _read_graph(cfg.input) if cfg.input else core_of(cfg.n, cfg.lam, cfg.seed)
    k = cfg.k or 2
    limit = cfg.extra.get("limit", 10)
    sets = gm_find_sets(g, k, limit, nontrivial=cfg.extra.get("nontrivial", False)) if 2 * k <= g.n else []
    results, graphs = [], []
    for i, s in enumerate(sets):
        h = apply_switch(g, s.switch())
        iso = is_isomorphic(g, h)
        results.append({"halves": [list(s.halves[0]), list(s.halves[1])], "isomorphic": iso,
                        "r_cospectral": are_r_cospectral(g, h), "result": graph_to_json(h)})
        graphs.append((f"switch {i} isomorphic={iso}", h))
    _say(f"{len(sets)} Godsil-McKay set(s) of size {2 * k}; "
         f"{sum(not r['isomorphic'] for r in results)} give non-isomorphic graphs")
    return {"graph": graph_to_json(g), "k": k, "sets": results}, graphs, None


def cmd_certify(cfg: RunConfig):
    g = _read_graph(cfg.input) if cfg.input else core_of(cfg.n, cfg.lam, cfg.seed)
    budget = CertifyBudget(max_points=cfg.budget) if cfg.budget else None
    rep = certify(g, budget, seed=cfg.seed)
    data = {"graph": graph_to_json(g), "outcome": rep.outcome.value, "core_size": rep.core_size,
            "details": json.loads(json.dumps(rep.details, default=str))}
    graphs = [("graph", g)]
    if rep.mate is not None:
        data["mate"] = graph_to_json(rep.mate)
        graphs.append(("mate", rep.mate))
    csv_text = "outcome,core_size\n" + f"{rep.outcome.value},{rep.core_size}\n"
    _say(f"{g.n} vertices: {rep.outcome.value} ({rep.wall_time:.2f}s)")
    return data, graphs, csv_text, {"wall_time": round(rep.wall_time, 4)}, rep.outcome is Outcome.TERMINATED


def cmd_table1(cfg: RunConfig):
    budget = CertifyBudget(max_points=cfg.budget) if cfg.budget else None
    rep = table1_experiment(cfg.lam, cfg.n, cfg.trials, cfg.seed, cfg.extra.get("threads"), budget)
    rows = [{k: v for k, v in r.to_json().items() if k != "wall_time"} for r in rep.rows]
    data = {"summary": rep.summary(), "trials": rows}
    s = rep.summary()
    _say(", ".join(f"{c}={s[c]}" for c in TABLE1_COLUMNS))
    timing = {"wall_time_per_trial": [r.wall_time for r in rep.rows]}
    return data, [], rep.to_csv(), timing, False


def cmd_estimate(cfg: RunConfig):
    rep = pendant_count_experiment(cfg.n, cfg.lam, cfg.t or "edge", cfg.trials, cfg.seed,
                                   pilot=cfg.extra.get("pilot", 2000), threads=cfg.extra.get("threads"))
    data = rep.to_json()
    data["within_3_sigma"] = rep.within(3.0)
    csv_text = "n,lambda,trials,c_hat,expected,mean,std_error,combined_error,z\n" + ",".join(
        str(x) for x in (rep.n, rep.lam, rep.trials, rep.c_hat, rep.expected, rep.mean, rep.std_error,
                         rep.combined_error, round(rep.z, 4))) + "\n"
    _say(f"Monte Carlo mean {rep.mean:.3f} +- {rep.std_error:.3f} vs formula {rep.expected:.3f} "
         f"(c_hat {rep.c_hat:.4f}); z = {rep.z:.2f}")
    return data, [], csv_text, {}, False


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cospectra", description="Cospectral mates of sparse random graphs.")
    ap.add_argument("--version", action="version", version=f"cospectra {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt="json"):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
        p.add_argument("--format", default=fmt, choices=["json", "csv", "graph6"])

    def sampling(p):
        p.add_argument("--n", type=int)
        p.add_argument("--lambda", dest="lam", type=float)
        p.add_argument("--input", help="graph6, sparse6 or JSON graph file")

    p = sub.add_parser("sample", help="sample G(n, lambda/(n-1)), its giant and 2-core")
    sampling(p)
    common(p, "graph6")

    p = sub.add_parser("mate", help="build a cospectral mate by swapping a pendant tree")
    sampling(p)
    p.add_argument("--mode", default="cospectral", choices=[m.value for m in SwapMode])
    common(p)

    p = sub.add_parser("switch", help="find Godsil-McKay sets and switch them")
    sampling(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--nontrivial", action="store_true", help="only sets whose switch changes the graph")
    common(p)

    p = sub.add_parser("certify", help="is the graph determined by its generalized spectrum?")
    sampling(p)
    p.add_argument("--budget", type=int, help="cap on kernel vectors examined per prime")
    common(p)

    p = sub.add_parser("table1", help="certification statistics of sampled 2-cores")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: COSPECTRA_THREADS or all cores)")
    p.add_argument("--budget", type=int)
    common(p, "csv")

    p = sub.add_parser("estimate", help="Monte Carlo pendant counts vs. the first-moment formula")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--tree", default="edge", help="edge, path3, cherry or a level sequence like 0,1,1")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--pilot", type=int, default=2000)
    p.add_argument("--threads", type=int, default=None)
    common(p)
    return ap


def _config(ns: argparse.Namespace) -> RunConfig:
    extra = {}
    for key in ("limit", "nontrivial", "pilot"):
        if hasattr(ns, key):
            extra[key] = getattr(ns, key)
    cfg = RunConfig(
        command=ns.command,
        n=getattr(ns, "n", None),
        lam=getattr(ns, "lam", None),
        trials=getattr(ns, "trials", None),
        seed=ns.seed,
        t=getattr(ns, "tree", None),
        k=getattr(ns, "k", None),
        mode=getattr(ns, "mode", None),
        budget=getattr(ns, "budget", None),
        output=ns.output,
        format=ns.format,
        input=getattr(ns, "input", None),
        extra=extra,
    ).validate()
    if cfg.command == "estimate":
        named_tree(cfg.t)
        if cfg.trials < 2 or cfg.extra["pilot"] < 2:
            raise UsageError("estimate needs at least two trials and two pilot samples")
    if cfg.format == "graph6" and cfg.command in ("table1", "estimate"):
        raise UsageError(f"{cfg.command} writes CSV or JSON")
    if cfg.format == "csv" and cfg.command in ("sample", "mate", "switch"):
        raise UsageError(f"{cfg.command} writes JSON or graph6")
    return cfg


_COMMANDS = {
    "sample": cmd_sample,
    "mate": cmd_mate,
    "switch": cmd_switch,
    "certify": cmd_certify,
    "table1": cmd_table1,
    "estimate": cmd_estimate,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = _config(ns)
        if getattr(ns, "threads", None) is not None and ns.threads < 1:
            raise UsageError("--threads must be positive")
        t0 = time.perf_counter()
        res = _COMMANDS[cfg.command](_with_threads(cfg, ns))
        if len(res) == 3:
            data, graphs, csv_text = res
            timing, budget_hit = {}, False
        else:
            data, graphs, csv_text, timing, budget_hit = res
        timing.setdefault("elapsed", round(time.perf_counter() - t0, 4))
        _emit(cfg, data, graphs, csv_text, timing)
    except (UsageError, ValueError) as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except NotFound as exc:
        _say(str(exc))
        return EXIT_NOT_FOUND
    except BudgetExceeded as exc:
        _say(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except (OSError, LookupError) as exc:
        _say(f"I/O error: {exc}")
        return EXIT_IO
    return EXIT_BUDGET if budget_hit else EXIT_OK


def _with_threads(cfg: RunConfig, ns: argparse.Namespace) -> RunConfig:
    """Thread count reaches the drivers but stays out of the serialized config."""
    threads = getattr(ns, "threads", None)
    if threads is None:
        return cfg
    run = RunConfig(**{k: v for k, v in cfg.to_json().items()})
    run.extra = dict(cfg.extra, threads=threads)
    return run


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
