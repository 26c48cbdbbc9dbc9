"""Seeded experiment runner behind the command line.

A run is (game, algorithm, seeds, budgets): each seed owns its RNG and
visit counter, produces one metrics CSV, and contributes to one JSON
summary.  The budget unit is visited history nodes as counted by the
solvers themselves plus the best-response traversals their decisions
depend on; exploitability measurements taken purely for the metric rows
are never counted, so algorithms are compared on the work they chose to
do, not on how often we looked at them.

Iterative solvers (cfr, cfr_plus, mccfr_es, xfp) have no termination of
their own, so their runs always end on a budget and are marked
truncated; xdo and psro report truncated only when a budget cut them
off before their stop test fired.  Wall-clock milliseconds are recorded
per row only when a run opts in; otherwise the column is zeroed so
repeated runs are byte-identical.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .evaluate import exploitability
from .games import GAME_PATTERNS, make_game, rps_choice
from .metrics import cadence_thresholds, write_rows_csv, write_summary_json
from .psro import PsroConfig, psro_histogram, psro_solve
from .solvers import Cfr, MccfrEs, Xfp
from .tree import NodeCounter, TreeIndex
from .xdo import XdoConfig, xdo_solve


class ConfigError(ValueError):
    """Bad experiment configuration; maps to exit code 2."""


class EnumerationOverflow(RuntimeError):
    """Game has more histories than the enumeration cap; exit code 3."""


ALGOS = ("cfr", "cfr_plus", "mccfr_es", "xfp", "xdo", "psro")

# Per-algorithm keys accepted in ExperimentConfig.params.
_PARAM_KEYS = {
    "cfr": {"alternating"},
    "cfr_plus": {"alternating"},
    "mccfr_es": set(),
    "xfp": set(),
    "xdo": {"inner", "eps0", "eps_decay", "eps_floor", "term_eps",
            "check_period", "max_inner", "lp_cap"},
    "psro": {"eps", "meta_solver", "fp_iters", "payoffs", "games_per_pair",
             "init"},
}


@dataclass
class ExperimentConfig:
    game: str
    algo: str
    seeds: tuple[int, ...] = (0,)
    node_budget: int | None = None
    max_iters: int | None = None
    max_wall_s: float | None = None
    out_dir: str = "runs"
    eval_start: int = 10_000
    eval_factor: int = 2
    wall_clock: bool = False
    jobs: int = 1
    max_states: int | None = 50_000_000
    params: dict = field(default_factory=dict)


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.algo not in ALGOS:
        raise ConfigError(f"unknown algorithm {cfg.algo!r}; "
                          f"choose from {', '.join(ALGOS)}")
    try:
        make_game(cfg.game)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    if not cfg.seeds:
        raise ConfigError("at least one seed is required")
    if (cfg.node_budget is None and cfg.max_iters is None
            and cfg.max_wall_s is None):
        raise ConfigError("at least one budget is required "
                          "(--node-budget, --max-iters, or --max-wall-s)")
    if cfg.max_wall_s is not None and cfg.node_budget is None \
            and cfg.max_iters is None and cfg.algo in ("xdo", "psro"):
        # Both check their budgets between full inner solves, so a pure
        # wall bound can overrun arbitrarily on a large game; require a
        # hard bound alongside it.
        raise ConfigError(f"{cfg.algo} needs --node-budget or --max-iters "
                          "in addition to a wall-time budget")
    if cfg.eval_start < 1 or cfg.eval_factor < 2:
        raise ConfigError("evaluation cadence needs start >= 1, factor >= 2")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    unknown = set(cfg.params) - _PARAM_KEYS[cfg.algo]
    if unknown:
        raise ConfigError(f"{cfg.algo} does not take parameters "
                          f"{sorted(unknown)}; "
                          f"accepted: {sorted(_PARAM_KEYS[cfg.algo])}")


def guard_enumerable(game, cap: int | None) -> int:
    """Count histories iteratively, aborting once past cap (None or a
    nonpositive cap disables the check)."""
    if cap is None or cap <= 0:
        return 0
    n = 0
    stack = [game.root()]
    while stack:
        s = stack.pop()
        n += 1
        if n > cap:
            raise EnumerationOverflow(
                f"{game.name} exceeds {cap} histories")
        if s.is_terminal():
            continue
        if s.is_chance():
            for a, _ in s.chance_outcomes():
                stack.append(s.apply(a))
        else:
            for a in s.legal_actions():
                stack.append(s.apply(a))
    return n


class _RunCounter(NodeCounter):
    """Visit counter whose budget can also expire on the wall clock, so
    solvers that poll ``exhausted`` honor wall-time budgets unchanged."""

    __slots__ = ("deadline",)

    def __init__(self, budget: int | None, deadline: float | None):
        super().__init__(budget)
        self.deadline = deadline

    @property
    def exhausted(self) -> bool:
        if self.budget is not None and self.count >= self.budget:
            return True
        return (self.deadline is not None
                and time.perf_counter() >= self.deadline)


def _row(cfg: ExperimentConfig, seed: int, outer, inner, nodes, e,
         pops=(0, 0), restricted=None, wall_ms=0) -> dict:
    return dict(algo=cfg.algo, game=cfg.game, seed=seed, outer_iter=outer,
                inner_iter=inner, nodes_visited=nodes, exploitability=e,
                pop1=pops[0], pop2=pops[1], restricted_states=restricted,
                wall_ms=wall_ms if cfg.wall_clock else 0)


def _run_iterative(game, cfg: ExperimentConfig, seed: int,
                   counter: _RunCounter) -> tuple[list[dict], dict]:
    t0 = time.perf_counter()
    tree = TreeIndex(game)
    if cfg.algo in ("cfr", "cfr_plus"):
        solver = Cfr(tree, plus=(cfg.algo == "cfr_plus"),
                     alternating=cfg.params.get("alternating"),
                     counter=counter)
    elif cfg.algo == "mccfr_es":
        solver = MccfrEs(tree, seed=seed, counter=counter)
    else:
        solver = Xfp(tree, counter=counter)

    rows: list[dict] = []
    thresholds = cadence_thresholds(cfg.eval_start, cfg.eval_factor)
    next_eval = next(thresholds)
    it = 0
    while True:
        solver.iterate(1)
        it += 1
        stop = counter.exhausted or (cfg.max_iters is not None
                                     and it >= cfg.max_iters)
        if counter.count >= next_eval or stop:
            e = exploitability(tree, solver.average_flat(), None)
            rows.append(_row(cfg, seed, it, None, counter.count, e,
                             wall_ms=(time.perf_counter() - t0) * 1000.0))
            while next_eval <= counter.count:
                next_eval = next(thresholds)
        if stop:
            break
    summary = dict(final_exploitability=rows[-1]["exploitability"],
                   iters=it, nodes=counter.count, terminated=False,
                   truncated=True)
    return rows, summary


def _run_xdo(game, cfg: ExperimentConfig, seed: int,
             counter: _RunCounter) -> tuple[list[dict], dict]:
    keys = _PARAM_KEYS["xdo"] & set(cfg.params)
    xcfg = XdoConfig(max_outer=cfg.max_iters,
                     **{k: cfg.params[k] for k in keys})
    res = xdo_solve(game, xcfg, counter)
    rows = [_row(cfg, seed, t["outer"], t["inner"], t["nodes"],
                 t["exploitability"], (t["pop0"], t["pop1"]),
                 t["restricted_nodes"], t["wall_ms"])
            for t in res.trace]
    summary = dict(final_exploitability=res.exploitability,
                   iters=res.outer_iters, nodes=res.nodes,
                   terminated=res.terminated, truncated=not res.terminated,
                   eps_final=res.eps_final,
                   populations=[len(p) for p in res.populations],
                   restricted_histories=res.restricted_nodes,
                   restricted_infostates=list(res.restricted_infostates))
    return rows, summary


def _run_psro(game, cfg: ExperimentConfig, seed: int,
              counter: _RunCounter) -> tuple[list[dict], dict]:
    keys = _PARAM_KEYS["psro"] & set(cfg.params)
    pcfg = PsroConfig(seed=seed, max_iters=cfg.max_iters,
                      **{k: cfg.params[k] for k in keys})
    res = psro_solve(game, pcfg, counter)
    rows = [_row(cfg, seed, t["iter"], None, t["nodes"],
                 t["exploitability"], (t["pop0"], t["pop1"]),
                 wall_ms=t["wall_ms"])
            for t in res.trace]
    summary = dict(final_exploitability=res.exploitability,
                   iters=res.iters, nodes=res.nodes,
                   terminated=res.terminated, truncated=not res.terminated,
                   populations=[len(p) for p in res.populations])
    return rows, summary


def run_seed(cfg: ExperimentConfig, seed: int) -> tuple[list[dict], dict]:
    """One seeded trial: builds the game (perturbed games draw their
    payoffs from this seed), runs the algorithm under the configured
    budgets, returns (metric rows, seed summary)."""
    game = make_game(cfg.game, seed=seed)
    deadline = (time.perf_counter() + cfg.max_wall_s
                if cfg.max_wall_s is not None else None)
    counter = _RunCounter(cfg.node_budget, deadline)
    if cfg.algo == "xdo":
        return _run_xdo(game, cfg, seed, counter)
    if cfg.algo == "psro":
        return _run_psro(game, cfg, seed, counter)
    return _run_iterative(game, cfg, seed, counter)


def _csv_name(cfg: ExperimentConfig, seed: int) -> str:
    return f"{cfg.algo}_{cfg.game}_seed{seed}.csv"


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run every seed, write one CSV per seed plus a JSON summary, and
    return the summary.  Seeds are independent, so with jobs > 1 they
    run in a process pool; files are written in seed order either way
    and are byte-identical to a single-process run."""
    validate_config(cfg)
    guard_enumerable(make_game(cfg.game), cfg.max_states)
    out = Path(cfg.out_dir)

    seeds = list(cfg.seeds)
    if cfg.jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(run_seed, [cfg] * len(seeds), seeds))
    else:
        results = [run_seed(cfg, s) for s in seeds]

    per_seed = {}
    for seed, (rows, summary) in zip(seeds, results):
        write_rows_csv(out / _csv_name(cfg, seed), rows)
        per_seed[str(seed)] = summary

    summary = dict(
        config=asdict(cfg),
        version=__version__,
        seeds=per_seed,
        csv_files=[_csv_name(cfg, s) for s in seeds],
        truncated=any(s["truncated"] for s in per_seed.values()),
        final_exploitability={
            s: per_seed[s]["final_exploitability"] for s in per_seed},
        total_nodes=sum(s["nodes"] for s in per_seed.values()),
    )
    write_summary_json(out / f"{cfg.algo}_{cfg.game}_summary.json", summary)
    return summary


HIST_COLUMNS = ("seed", "expanded1", "expanded2", "eps_pass_iter", "iters",
                "exploitability")


def _hist_chunk(args) -> list[dict]:
    trials, seed0, horizon, eps = args
    return psro_histogram(rps_choice(), trials, seed0, horizon, eps)


def run_psro_hist(trials: int = 150, seed0: int = 0, horizon: int = 30,
                  eps: float = 1e-3, out_dir: str = "runs",
                  jobs: int = 1) -> dict:
    """Strategy-expansion histogram over repeated double-oracle trials
    on the two-stage pick-a-game variant of rock paper scissors; writes
    per-trial records and the per-player aggregate histogram.  Trials
    are independent (seed of trial t is seed0 + t) so splitting them
    across a pool changes nothing but the wall time."""
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if jobs > 1 and trials > 1:
        per = (trials + jobs - 1) // jobs
        chunks = [(min(per, trials - lo), seed0 + lo, horizon, eps)
                  for lo in range(0, trials, per)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = [r for part in pool.map(_hist_chunk, chunks)
                       for r in part]
    else:
        records = _hist_chunk((trials, seed0, horizon, eps))
    records.sort(key=lambda r: r["seed"])

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [",".join(HIST_COLUMNS)]
    for r in records:
        cells = (r["seed"], r["expanded0"], r["expanded1"],
                 r["eps_pass_iter"], r["iters"], r["exploitability"])
        lines.append(",".join("" if c is None else repr(c)
                              if isinstance(c, float) else str(c)
                              for c in cells))
    (out / "psro_hist_trials.csv").write_text("\n".join(lines) + "\n")

    hist = {}
    for p, col in ((1, "expanded0"), (2, "expanded1")):
        counts: dict[str, int] = {}
        for r in records:
            counts[str(r[col])] = counts.get(str(r[col]), 0) + 1
        hist[f"player{p}"] = dict(sorted(counts.items(),
                                         key=lambda kv: int(kv[0])))
    full = {1: 6, 2: 9}  # reduced pure strategy counts per player
    summary = dict(
        trials=trials, seed0=seed0, horizon=horizon, eps=eps,
        histogram=hist,
        proportion_full={
            f"player{p}": hist[f"player{p}"].get(str(full[p]), 0) / trials
            for p in (1, 2)},
        eps_passed=sum(r["eps_pass_iter"] is not None for r in records),
        version=__version__,
    )
    write_summary_json(out / "psro_hist_summary.json", summary)
    return summary


def size_report(game, result, base_tree: TreeIndex | None = None) -> dict:
    """Restricted-game size at the end of a double-oracle run: history
    count ratio and per-player decision-infostate coverage."""
    base = base_tree if base_tree is not None else TreeIndex(game)
    full_is = (len(base.infosets_of(0)), len(base.infosets_of(1)))
    r_is = result.restricted_infostates
    return dict(
        game=game.name,
        full_histories=base.n_nodes,
        restricted_histories=result.restricted_nodes,
        history_ratio=result.restricted_nodes / base.n_nodes,
        full_infostates=list(full_is),
        restricted_infostates=list(r_is),
        infostate_coverage=[r_is[0] / full_is[0], r_is[1] / full_is[1]],
        terminated=result.terminated,
        outer_iters=result.outer_iters,
    )


def run_size_report(game_name: str, seed: int = 0,
                    node_budget: int | None = None,
                    max_outer: int | None = None, inner: str = "cfr_plus",
                    out_dir: str = "runs",
                    max_states: int | None = 50_000_000) -> dict:
    """Run the double-oracle solver on a named game and report how much
    of the full game its final restricted game spans."""
    if node_budget is None and max_outer is None:
        raise ConfigError("size-report needs --node-budget or --max-iters")
    game = make_game(game_name, seed=seed)
    guard_enumerable(game, max_states)
    counter = NodeCounter(node_budget)
    base = TreeIndex(game)
    res = xdo_solve(game, XdoConfig(inner=inner, max_outer=max_outer),
                    counter, base_tree=base)
    report = size_report(game, res, base)
    report["nodes"] = res.nodes
    report["version"] = __version__
    write_summary_json(Path(out_dir) / f"size_{game_name}.json", report)
    return report


def list_games() -> list[str]:
    """Name patterns accepted by the game registry."""
    out = []
    for base, params in GAME_PATTERNS.items():
        suffix = "".join(f"_<{p}>" for p in params)
        out.append(base + suffix)
    return out
