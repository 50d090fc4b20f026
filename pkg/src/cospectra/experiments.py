"""Seeded Monte Carlo drivers: 2-core certification statistics and pendant counts.

Trial ``i`` of a run seeded by ``seed`` samples G(n, p) from
``trial_seed(seed, i)``, so results do not depend on the number of workers;
rows are always emitted sorted by trial index.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .certify import CertificationReport, CertifyBudget, Outcome, certify
from .graph import RootedGraph, SampleConfig, giant_component, k_core, sample_gnp, trial_seed
from .isomorphism import is_isomorphic
from .pendant import expected_pendant_count, find_pendant_copies
from .switching import (TheoremViolation, apply_switch, dense_small_subgraph, gm_find_sets, is_disjoint_cycles,
                        neighborhood_graph)
from .trees import tree_from_levels

__all__ = [
    "TrialRow",
    "Table1Report",
    "table1_experiment",
    "EstimateReport",
    "named_tree",
    "giant_fraction",
    "pendant_count_experiment",
    "thread_count",
    "SwitchingReport",
    "switching_experiment",
    "TABLE1_COLUMNS",
]

TABLE1_COLUMNS = ("lambda", "n", "avg_core_size", "determined", "r_cospectral", "rank_deficient", "terminated")

_OUTCOME_COLUMN = {
    Outcome.DETERMINED: "determined",
    Outcome.MATE_FOUND: "r_cospectral",
    Outcome.INCONCLUSIVE_RANK: "rank_deficient",
    Outcome.TERMINATED: "terminated",
}


def thread_count(threads: int | None = None) -> int:
    """Explicit value, else COSPECTRA_THREADS, else the number of cores."""
    if threads is None:
        env = os.environ.get("COSPECTRA_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def _map(fn, args: list, threads: int | None) -> list:
    threads = thread_count(threads)
    if threads == 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=min(threads, len(args))) as pool:
        return list(pool.map(fn, args, chunksize=max(1, len(args) // (4 * threads))))


# -- 2-core certification ------------------------------------------------------


@dataclass
class TrialRow:
    trial: int
    seed: int
    core_size: int
    outcome: str
    wall_time: float

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Table1Report:
    lam: float
    n: int
    seed: int
    rows: list[TrialRow] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.rows)

    def counts(self) -> dict[str, int]:
        out = {c: 0 for c in _OUTCOME_COLUMN.values()}
        for r in self.rows:
            out[r.outcome] += 1
        return out

    def fraction(self, column: str) -> float:
        return self.counts()[column] / self.trials if self.rows else 0.0

    @property
    def avg_core_size(self) -> float:
        return sum(r.core_size for r in self.rows) / len(self.rows) if self.rows else 0.0

    def summary(self) -> dict:
        return {"lambda": self.lam, "n": self.n, "avg_core_size": round(self.avg_core_size, 3), **self.counts()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=TABLE1_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerow(self.summary())
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"summary": self.summary(), "seed": self.seed, "trials": [r.to_json() for r in self.rows]}


def core_of(n: int, lam: float, seed: int):
    """The 2-core of the giant component of one G(n, lambda/(n-1)) draw."""
    g = sample_gnp(SampleConfig(n, lam, seed))
    if g.n == 0:
        return g
    return k_core(giant_component(g), 2)


def _table1_trial(args) -> TrialRow:
    lam, n, seed, trial, budget = args
    s = trial_seed(seed, trial)
    core = core_of(n, lam, s)
    rep: CertificationReport = certify(core, budget, seed=s)
    return TrialRow(trial, s, core.n, _OUTCOME_COLUMN[rep.outcome], round(rep.wall_time, 4))


def table1_experiment(lam: float, n: int, trials: int, seed: int, threads: int | None = None,
                      budget: CertifyBudget | None = None) -> Table1Report:
    """Certify the giant's 2-core in each of ``trials`` independent samples."""
    if trials < 0:
        raise ValueError("trials must be non-negative")
    SampleConfig(n, lam, seed)  # validates the parameters
    args = [(lam, n, seed, i, budget) for i in range(trials)]
    rows = _map(_table1_trial, args, threads)
    return Table1Report(lam, n, seed, sorted(rows, key=lambda r: r.trial))


# -- first-moment check for pendant copies ---------------------------------


_NAMED_TREES = {
    "edge": (0, 1),
    "path3": (0, 1, 2),
    "cherry": (0, 1, 1),
}


def named_tree(name: str) -> RootedGraph:
    """``edge``, ``path3``, ``cherry`` or a comma-separated level sequence."""
    levels = _NAMED_TREES.get(name)
    if levels is None:
        try:
            levels = tuple(int(x) for x in name.split(","))
        except ValueError:
            raise ValueError(f"unknown tree {name!r}") from None
    if not levels or levels[0] != 0 or any(b < 1 or b > a + 1 for a, b in zip(levels, levels[1:])):
        raise ValueError(f"{name!r} is not a rooted level sequence")
    return tree_from_levels(levels)


def _giant_size(args) -> int:
    n, lam, s = args
    g = sample_gnp(SampleConfig(n, lam, s))
    return giant_component(g).n if g.n else 0


def giant_fraction(n: int, lam: float, trials: int, seed: int, threads: int | None = None) -> tuple[float, float]:
    """Empirical mean of |giant| / n (the stand-in for c_lambda) and its standard error."""
    if trials < 2 or n < 1:
        raise ValueError("need n >= 1 and at least two pilot trials")
    sizes = _map(_giant_size, [(n, lam, trial_seed(seed, i)) for i in range(trials)], threads)
    fr = [s / n for s in sizes]
    mean = sum(fr) / trials
    var = sum((x - mean) ** 2 for x in fr) / (trials - 1)
    return mean, math.sqrt(var / trials)


def _pendant_count(args) -> int:
    n, lam, s, tree = args
    g = sample_gnp(SampleConfig(n, lam, s))
    return len(find_pendant_copies(giant_component(g), tree)) if g.n else 0


@dataclass
class EstimateReport:
    n: int
    lam: float
    tree: tuple[int, ...]
    trials: int
    c_hat: float
    c_hat_error: float
    expected: float
    mean: float
    std_error: float

    @property
    def combined_error(self) -> float:
        """Standard error of mean - expected; the formula is linear in c_hat."""
        rel = self.c_hat_error / self.c_hat if self.c_hat else 0.0
        return math.hypot(self.std_error, self.expected * rel)

    @property
    def z(self) -> float:
        se = self.combined_error
        if se == 0:
            return 0.0 if self.mean == self.expected else math.inf
        return (self.mean - self.expected) / se

    def within(self, sigmas: float = 3.0) -> bool:
        return abs(self.z) <= sigmas

    def to_json(self) -> dict:
        d = asdict(self)
        d["combined_error"] = self.combined_error
        d["z"] = round(self.z, 4)
        return d


def pendant_count_experiment(n: int, lam: float, tree: RootedGraph | str, trials: int, seed: int,
                             pilot: int = 2000, threads: int | None = None) -> EstimateReport:
    """Monte Carlo mean of pendant copies rooted in the giant vs. the first-moment formula.

    ``c_hat`` comes from a pilot run of ``pilot`` giant sizes on seeds disjoint
    from the counting run (seed + 1 instead of seed); its standard error is
    carried into :attr:`EstimateReport.combined_error`.
    """
    if trials < 2:
        raise ValueError("need at least two trials")
    t = named_tree(tree) if isinstance(tree, str) else tree
    levels = _levels(t)
    c_hat, c_err = giant_fraction(n, lam, pilot, seed + 1, threads)
    expected = expected_pendant_count(n, lam, t, c_hat)
    counts = _map(_pendant_count, [(n, lam, trial_seed(seed, i), t) for i in range(trials)], threads)
    mean = sum(counts) / trials
    var = sum((c - mean) ** 2 for c in counts) / (trials - 1)
    return EstimateReport(n, lam, levels, trials, c_hat, c_err, expected, mean, math.sqrt(var / trials))


def _levels(t: RootedGraph) -> tuple[int, ...]:
    """Depths of the tree vertices in vertex order (root first)."""
    depth = {t.root: 0}
    order = [t.root]
    for v in order:
        for w in sorted(t.graph.adj[v]):
            if w not in depth:
                depth[w] = depth[v] + 1
                order.append(w)
    return tuple(depth[v] for v in range(t.graph.n))


# -- local switchings on sampled 2-cores ---------------------------------------


@dataclass
class SwitchingReport:
    trials: int = 0
    cores: int = 0
    sets: int = 0
    cycle_union: int = 0
    cycle_union_isomorphic: int = 0
    non_isomorphic: int = 0
    dense_witnessed: int = 0

    def merge(self, other: "SwitchingReport") -> None:
        for k, v in asdict(other).items():
            setattr(self, k, getattr(self, k) + v)

    def to_json(self) -> dict:
        return asdict(self)


def _switching_trial(args) -> SwitchingReport:
    n, lam, s, sizes, limit = args
    rep = SwitchingReport(trials=1)
    core = core_of(n, lam, s)
    if core.n == 0:
        return rep
    rep.cores = 1
    for k in sizes:
        if 2 * k > core.n:
            continue
        for x in gm_find_sets(core, k, limit, nontrivial=True):
            rep.sets += 1
            sw = x.switch()
            h = apply_switch(core, sw)
            iso = is_isomorphic(core, h)
            if is_disjoint_cycles(neighborhood_graph(core, sw.switch_vertices).graph):
                rep.cycle_union += 1
                if not iso:
                    raise TheoremViolation(f"cycle-union switch {x.vertices} gave a non-isomorphic graph (seed {s})")
                rep.cycle_union_isomorphic += 1
            if not iso:
                rep.non_isomorphic += 1
                if dense_small_subgraph(core, 2 * sw.m + 1) is None:
                    raise TheoremViolation(f"non-isomorphic switch {x.vertices} without a dense subgraph (seed {s})")
                rep.dense_witnessed += 1
    return rep


def switching_experiment(n: int, lam: float, trials: int, seed: int, sizes=(2, 3), limit: int | None = 100,
                         threads: int | None = None) -> SwitchingReport:
    """Switch every Godsil-McKay set of size 2k (k in ``sizes``) in sampled 2-cores.

    A switch whose neighbourhood graph is a union of cycles must give an
    isomorphic graph, and a non-isomorphic switch of size m needs a connected
    subgraph on at most 2m + 1 vertices with more edges than vertices; a
    counterexample to either raises :class:`TheoremViolation`.
    """
    out = SwitchingReport()
    args = [(n, lam, trial_seed(seed, i), tuple(sizes), limit) for i in range(trials)]
    for rep in _map(_switching_trial, args, threads):
        out.merge(rep)
    return out


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
