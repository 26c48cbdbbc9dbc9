"""Exact evaluation: expected value, best response, exploitability.

All functions take a ``TreeIndex`` and flat or tabular policies.  Best
responses are deterministic by default: ties between equally good
actions go to a caller-preferred action set first (used to keep
responses inside a restricted game's action set when possible) and then
to the lowest action id.  Passing a generator randomizes the final tie
step, which matters only for which of several exact maximizers gets
reported.  Infostates the opponent/chance never reach still get an
action, chosen by the same rule with all histories weighted equally, so
returned policies are total.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .policy import PurePolicy, profile_array
from .tree import TreeIndex, NodeCounter


def _as_sigma(tree, pol0, pol1=None):
    if isinstance(pol0, np.ndarray):
        return pol0
    return profile_array(tree, pol0, pol1)


def expected_value(tree: TreeIndex, pol0, pol1=None,
                   counter: NodeCounter | None = None) -> float:
    """Player 0's expected utility under the profile (player 1 gets the
    negation)."""
    sigma = _as_sigma(tree, pol0, pol1)
    if counter is not None:
        counter.add(tree.n_nodes)
    v = tree.payoff1.copy()
    for ids in reversed(tree.levels[1:]):
        w = tree.in_prob[ids].copy()
        dec = tree.in_col[ids] >= 0
        w[dec] *= sigma[tree.in_col[ids][dec]]
        np.add.at(v, tree.parent[ids], w * v[ids])
    return float(v[0])


class BestResponse(NamedTuple):
    value: float
    policy: PurePolicy


def _cf_reach(tree: TreeIndex, sigma: np.ndarray, player: int) -> np.ndarray:
    """Chance-and-opponent reach of every history (own actions free)."""
    reach = np.ones(tree.n_nodes)
    for d in range(1, len(tree.levels)):
        ids = tree.levels[d]
        w = tree.in_prob[ids].copy()
        opp = tree.in_player[ids] == (1 - player)
        cols = tree.in_col[ids]
        w[opp] *= sigma[cols[opp]]
        reach[ids] = reach[tree.parent[ids]] * w
    return reach


def _sweep_values(tree: TreeIndex, sigma: np.ndarray, player: int,
                  chosen: np.ndarray, decided: np.ndarray) -> np.ndarray:
    """Backward pass for player-0 values where the responder's edges use
    one-hot ``chosen`` columns; edges out of undecided responder nodes
    contribute 0 (their values are never read above)."""
    v = tree.payoff1.copy()
    for d in range(len(tree.levels) - 1, 0, -1):
        ids = tree.levels[d]
        w = tree.in_prob[ids].copy()
        cols = tree.in_col[ids]
        opp = tree.in_player[ids] == (1 - player)
        w[opp] *= sigma[cols[opp]]
        own = tree.in_player[ids] == player
        w[own] *= np.where(decided[cols[own]], chosen[cols[own]], 0.0)
        np.add.at(v, tree.parent[ids], w * v[ids])
    return v


def best_response(tree: TreeIndex, opponent, player: int,
                  counter: NodeCounter | None = None,
                  prefer: dict | None = None, rng=None) -> BestResponse:
    """Exact pure best response for ``player`` against the opponent side
    of a profile (``opponent`` may be a flat profile array or a policy
    for the other player).

    With ``rng`` given, exact ties (after the ``prefer`` filter) are
    resolved by a uniform draw instead of the lowest action id.  The
    returned value is unaffected; only which maximizer is reported
    changes.
    """
    if isinstance(opponent, np.ndarray):
        sigma = opponent
    else:
        blank = PurePolicy(player)
        pair = (blank, opponent) if player == 0 else (opponent, blank)
        sigma = profile_array(tree, *pair)
    if counter is not None:
        counter.add(tree.n_nodes)

    reach = _cf_reach(tree, sigma, player)
    chosen = np.zeros(tree.n_cols)
    decided = np.zeros(tree.n_cols, dtype=bool)

    own_infosets = tree.infosets_of(player)
    if own_infosets.size:
        stages = sorted(set(tree.is_own_depth[own_infosets].tolist()),
                        reverse=True)
    else:
        stages = []

    dec_nodes = np.flatnonzero(tree.decision_mask & (tree.player == player))
    node_stage = np.full(tree.n_nodes, -1, dtype=np.int64)
    node_stage[dec_nodes] = tree.is_own_depth[tree.infoset[dec_nodes]]

    actions = PurePolicy(player)
    for stage in stages:
        v = _sweep_values(tree, sigma, player, chosen, decided)
        vp = v if player == 0 else -v
        q = np.zeros(tree.n_cols)
        q_unit = np.zeros(tree.n_cols)
        stage_parents = node_stage == stage
        kids = np.flatnonzero(stage_parents[tree.parent] &
                              (tree.in_player == player))
        if kids.size:
            cols = tree.in_col[kids]
            np.add.at(q, cols, reach[tree.parent[kids]] * vp[kids])
            np.add.at(q_unit, cols, vp[kids])
        is_reach = np.zeros(tree.n_infosets)
        stage_nodes = np.flatnonzero(stage_parents)
        np.add.at(is_reach, tree.infoset[stage_nodes], reach[stage_nodes])

        for isid in own_infosets:
            if tree.is_own_depth[isid] != stage:
                continue
            sl = tree.col_slice(isid)
            row = q[sl] if is_reach[isid] > 0.0 else q_unit[sl]
            best = row.max()
            if rng is None:
                cand = np.flatnonzero(row == best)
            else:
                # tolerate meta-solver noise so degenerate ties stay ties
                cand = np.flatnonzero(row >= best - 1e-9)
            acts = tree.is_actions[isid]
            if prefer is not None:
                allowed = prefer.get(tree.keys[isid])
                if allowed is not None:
                    inside = [c for c in cand if acts[c] in allowed]
                    if inside:
                        cand = inside
            slot = int(cand[0]) if rng is None else int(rng.choice(cand))
            chosen[sl.start + slot] = 1.0
            decided[sl] = True
            actions.actions[tree.keys[isid]] = acts[slot]

    v = _sweep_values(tree, sigma, player, chosen, decided)
    value = float(v[0]) if player == 0 else -float(v[0])
    return BestResponse(value=value, policy=actions)


def exploitability(tree: TreeIndex, pol0, pol1,
                   counter: NodeCounter | None = None) -> float:
    """Sum of both players' best-response gains; 0 exactly at a Nash
    equilibrium."""
    sigma = _as_sigma(tree, pol0, pol1)
    br0 = best_response(tree, sigma, 0, counter)
    br1 = best_response(tree, sigma, 1, counter)
    return br0.value + br1.value


def best_response_values(tree: TreeIndex, pol0, pol1,
                         counter: NodeCounter | None = None):
    """(v0 of BR0 vs pol1, v1 of BR1 vs pol0, profile value for player 0)."""
    sigma = _as_sigma(tree, pol0, pol1)
    br0 = best_response(tree, sigma, 0, counter)
    br1 = best_response(tree, sigma, 1, counter)
    value = expected_value(tree, sigma)
    return br0, br1, value
