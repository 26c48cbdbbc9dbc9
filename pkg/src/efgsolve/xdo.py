"""Double oracle over extensive-form restricted games.

The outer loop keeps a population of pure strategies per player.  Each
iteration builds the restricted game whose legal actions at an
infostate are exactly those some population member plays there, solves
that game to a decaying tolerance, extends the solution to the full
game (default action where undefined), and asks exact best-response
oracles whether either player can still gain.  If the summed gain is
within the termination tolerance the extended profile is returned;
otherwise both best responses join the populations.

The inner solve stops once (a) its restricted-game exploitability is
below the current tolerance and (b) it is strictly below the full-game
exploitability of the extended profile, so work is never wasted
polishing a restricted game that already lags the full game; when the
extended profile is already good enough to terminate on, (b) is waived
to avoid polishing forever.

Best responses prefer actions already inside the restricted game when
exactly tied, so payoff-identical duplicates never grow the population.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .evaluate import best_response, expected_value
from .policy import (PurePolicy, TabularPolicy, canonical_pure, lift_policy,
                     profile_array, realize_mixture)
from .solvers.cfr import Cfr
from .solvers.matrix_solvers import solve_matrix_lp
from .tree import NodeCounter, TreeIndex, infostate_predecessors


class Population:
    """Ordered pure strategies for one player, deduplicated by their
    total action table over the base tree."""

    def __init__(self, tree: TreeIndex, player: int, members=()):
        self.tree = tree
        self.player = player
        self.members: list[PurePolicy] = []
        self._seen: set[tuple] = set()
        for m in members:
            self.add(m)

    def add(self, policy: PurePolicy) -> bool:
        canon = canonical_pure(self.tree, policy)
        if canon in self._seen:
            return False
        self._seen.add(canon)
        self.members.append(policy)
        return True

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def eq1_allowed(tree: TreeIndex, populations) -> tuple[dict, dict]:
    """Per-player map: infostate key -> ordered action ids any member
    plays there (the restricted game's legal lists)."""
    out = []
    for player in (0, 1):
        pop = populations[player]
        allowed = {}
        for isid in tree.infosets_of(player):
            key = tree.keys[isid]
            acts = tree.is_actions[isid]
            allowed[key] = tuple(sorted({pi.act(key, acts) for pi in pop}))
        out.append(allowed)
    return out[0], out[1]


class _RestrictedState:
    __slots__ = ("s", "g")

    def __init__(self, s, g):
        self.s = s
        self.g = g

    def is_terminal(self):
        return self.s.is_terminal()

    def is_chance(self):
        return self.s.is_chance()

    def current_player(self):
        return self.s.current_player()

    def chance_outcomes(self):
        return self.s.chance_outcomes()

    def legal_actions(self):
        p = self.s.current_player()
        return self.g.allowed[p][self.s.infostate_key(p)]

    def apply(self, action):
        return _RestrictedState(self.s.apply(action), self.g)

    def returns(self):
        return self.s.returns()

    def infostate_key(self, player):
        return self.s.infostate_key(player)


class RestrictedGame:
    def __init__(self, base, allowed: tuple[dict, dict]):
        self.base = base
        self.allowed = allowed
        self.name = base.name + "+restricted"

    def root(self):
        return _RestrictedState(self.base.root(), self)


def build_restricted_game(base_game, tree: TreeIndex,
                          populations) -> RestrictedGame:
    return RestrictedGame(base_game, eq1_allowed(tree, populations))


def covered_infostate_count(game_or_preds, populations) -> int:
    """How many infostates have their preceding own action chosen by
    some population member (the covering quantity behind the iteration
    bound; infostates with no preceding own action are not counted)."""
    if isinstance(game_or_preds, tuple):
        preds = game_or_preds
    else:
        preds = infostate_predecessors(game_or_preds)
    covered = 0
    for player in (0, 1):
        pop = populations[player]
        for key, pred in preds[player].items():
            if pred is None:
                continue
            pkey, act = pred
            if any(pi.act(pkey) == act for pi in pop):
                covered += 1
    return covered


def enumerate_reduced_pure(tree: TreeIndex, player: int,
                           cap: int = 100_000) -> list[PurePolicy]:
    """All reduced pure strategies: assignments over the infostates the
    player can reach given their own earlier choices."""
    kids_by_slot: dict[tuple[int, int], list[int]] = {}
    roots = []
    for isid in tree.infosets_of(player):
        p_isid = int(tree.is_parent[isid])
        if p_isid < 0:
            roots.append(int(isid))
        else:
            slot = int(tree.is_parent_slot[isid])
            kids_by_slot.setdefault((p_isid, slot), []).append(int(isid))

    def expand_set(isids) -> list[dict]:
        combos = [{}]
        for isid in isids:
            branch = expand_one(isid)
            combos = [{**c, **b} for c in combos for b in branch]
            if len(combos) > cap:
                raise ValueError("reduced strategy space exceeds cap")
        return combos

    def expand_one(isid: int) -> list[dict]:
        key = tree.keys[isid]
        out = []
        for slot, a in enumerate(tree.is_actions[isid]):
            for c in expand_set(kids_by_slot.get((isid, slot), ())):
                d = dict(c)
                d[key] = a
                out.append(d)
        return out

    return [PurePolicy(player, d) for d in expand_set(roots)]


@dataclass
class XdoConfig:
    eps0: float = 0.35
    eps_decay: float = 0.98
    eps_floor: float = 1e-4
    term_eps: float = 1e-6
    inner: str = "cfr_plus"  # cfr_plus | cfr | lp
    check_period: int = 10
    max_outer: int | None = None
    max_inner: int | None = None
    node_budget: int | None = None
    lp_cap: int = 100_000


@dataclass
class XdoResult:
    populations: tuple[Population, Population]
    policy0: TabularPolicy
    policy1: TabularPolicy
    exploitability: float
    eps_final: float       # termination tolerance the final check used
    eps_inner_final: float  # decayed inner tolerance at the end
    terminated: bool
    outer_iters: int
    nodes: int
    trace: list = field(default_factory=list)
    restricted_nodes: int = 0
    restricted_infostates: tuple[int, int] = (0, 0)


def _extend_to_base(rtree: TreeIndex, base_tree: TreeIndex, flat):
    from .policy import policy_from_flat

    pols = []
    for p in (0, 1):
        rpol = policy_from_flat(rtree, flat, p)
        pols.append(lift_policy(rtree, base_tree, rpol))
    return pols[0], pols[1]


def _lp_inner(rtree: TreeIndex, counter, cap: int):
    pures = [enumerate_reduced_pure(rtree, p, cap) for p in (0, 1)]
    m = np.zeros((len(pures[0]), len(pures[1])))
    for i, pi in enumerate(pures[0]):
        for j, pj in enumerate(pures[1]):
            m[i, j] = expected_value(rtree, pi, pj, counter)
    sol = solve_matrix_lp(m)
    pol0 = realize_mixture(rtree, pures[0], sol.row, 0)
    pol1 = realize_mixture(rtree, pures[1], sol.col, 1)
    return profile_array(rtree, pol0, pol1)


def xdo_solve(game, config: XdoConfig | None = None,
              counter: NodeCounter | None = None,
              base_tree: TreeIndex | None = None,
              populations=None) -> XdoResult:
    cfg = config or XdoConfig()
    if counter is None:
        counter = NodeCounter(cfg.node_budget)
    if base_tree is None:
        base_tree = TreeIndex(game)
    if populations is None:
        populations = (Population(base_tree, 0, [PurePolicy(0)]),
                       Population(base_tree, 1, [PurePolicy(1)]))

    eps = cfg.eps0
    t_start = time.perf_counter()
    trace: list[dict] = []
    terminated = False
    outer = 0
    policy0 = policy1 = None
    e_full = float("inf")
    rtree = None

    while True:
        outer += 1
        allowed = eq1_allowed(base_tree, populations)
        rgame = RestrictedGame(game, allowed)
        rtree = TreeIndex(rgame)

        inner_iter = 0
        solver = None
        if cfg.inner != "lp":
            solver = Cfr(rtree, plus=(cfg.inner == "cfr_plus"),
                         counter=counter)
        while True:
            if cfg.inner == "lp":
                flat = _lp_inner(rtree, counter, cfg.lp_cap)
                inner_iter += 1
            else:
                for _ in range(cfg.check_period):
                    solver.iterate(1)
                    inner_iter += 1
                    if counter.exhausted:
                        break
                flat = solver.average_flat()

            br0r = best_response(rtree, flat, 0, counter)
            br1r = best_response(rtree, flat, 1, counter)
            e_r = br0r.value + br1r.value

            stopping = (cfg.inner == "lp" or counter.exhausted
                        or (cfg.max_inner is not None
                            and inner_iter >= cfg.max_inner))
            if not (e_r < eps or stopping):
                # condition (a) failed and the loop goes on, so the
                # verdict cannot be "stop" no matter what the full-game
                # check says; skip the expensive part of the check
                continue

            policy0, policy1 = _extend_to_base(rtree, base_tree, flat)
            sigma_full = profile_array(base_tree, policy0, policy1)
            br0 = best_response(base_tree, sigma_full, 0, counter,
                                prefer=allowed[0])
            br1 = best_response(base_tree, sigma_full, 1, counter,
                                prefer=allowed[1])
            e_full = br0.value + br1.value

            trace.append(dict(outer=outer, inner=inner_iter,
                              nodes=counter.count, exploitability=e_full,
                              restricted_exploitability=e_r,
                              pop0=len(populations[0]),
                              pop1=len(populations[1]),
                              restricted_nodes=rtree.n_nodes,
                              wall_ms=(time.perf_counter() - t_start)
                              * 1000.0))

            if e_r < eps and (e_r < e_full or e_full <= cfg.term_eps):
                break
            if stopping:
                break

        if e_full <= cfg.term_eps:
            terminated = True
            break
        if counter.exhausted:
            break
        populations[0].add(br0.policy)
        populations[1].add(br1.policy)
        eps = max(eps * cfg.eps_decay, cfg.eps_floor)
        if cfg.max_outer is not None and outer >= cfg.max_outer:
            break

    r_is = (len(rtree.infosets_of(0)), len(rtree.infosets_of(1)))
    return XdoResult(
        populations=populations, policy0=policy0, policy1=policy1,
        exploitability=e_full, eps_final=cfg.term_eps,
        eps_inner_final=eps, terminated=terminated, outer_iters=outer,
        nodes=counter.count, trace=trace,
        restricted_nodes=rtree.n_nodes, restricted_infostates=r_is,
    )
