"""Counterfactual regret minimization over a TreeIndex.

Each iteration is one vectorized forward/backward sweep of the full
tree with simultaneous regret updates for both players (one history
visit per node per iteration).  ``plus=True`` gives CFR+: regrets are
clamped at zero after every update, the average strategy is weighted
linearly by iteration number, and updates alternate between players
with values recomputed in between (two sweeps per iteration), which is
what makes CFR+ fast; pass ``alternating`` explicitly to override.
"""

from __future__ import annotations

import numpy as np

from ..policy import TabularPolicy, policy_from_flat
from ..tree import DECISION, NodeCounter, TreeIndex


class Cfr:
    def __init__(self, tree: TreeIndex, plus: bool = False,
                 alternating: bool | None = None,
                 counter: NodeCounter | None = None):
        self.tree = tree
        self.plus = plus
        self.alternating = plus if alternating is None else alternating
        self.counter = counter
        self.t = 0
        self.regret = np.zeros(tree.n_cols)
        self.ssum = np.zeros(tree.n_cols)

        self._col_infoset = np.repeat(np.arange(tree.n_infosets),
                                      tree.is_nact)
        self._col_player = tree.is_player[self._col_infoset]
        self._uniform = 1.0 / tree.is_nact[self._col_infoset]
        self._dec_nodes = [
            np.flatnonzero(tree.decision_mask & (tree.player == p))
            for p in (0, 1)
        ]
        self._kids = [np.flatnonzero(tree.in_player == p) for p in (0, 1)]
        self._pcols = [np.flatnonzero(self._col_player == p) for p in (0, 1)]

    def current(self) -> np.ndarray:
        pos = np.maximum(self.regret, 0.0)
        norm = np.add.reduceat(pos, self.tree.is_off)[self._col_infoset]
        return np.where(norm > 0.0, pos / np.where(norm > 0.0, norm, 1.0),
                        self._uniform)

    def _passes(self, sigma):
        tree = self.tree
        r0 = np.ones(tree.n_nodes)
        r1 = np.ones(tree.n_nodes)
        rc = np.ones(tree.n_nodes)
        for d in range(1, len(tree.levels)):
            ids = tree.levels[d]
            par = tree.parent[ids]
            cols = tree.in_col[ids]
            ply = tree.in_player[ids]
            w0 = np.where(ply == 0, sigma[np.where(cols >= 0, cols, 0)], 1.0)
            w1 = np.where(ply == 1, sigma[np.where(cols >= 0, cols, 0)], 1.0)
            r0[ids] = r0[par] * w0
            r1[ids] = r1[par] * w1
            rc[ids] = rc[par] * tree.in_prob[ids]
        v = tree.payoff1.copy()
        for d in range(len(tree.levels) - 1, 0, -1):
            ids = tree.levels[d]
            cols = tree.in_col[ids]
            w = tree.in_prob[ids] * np.where(
                cols >= 0, sigma[np.where(cols >= 0, cols, 0)], 1.0)
            np.add.at(v, tree.parent[ids], w * v[ids])
        return r0, r1, rc, v

    def _update(self, sigma, r0, r1, rc, v, player):
        tree = self.tree
        opp_reach = r1 if player == 0 else r0
        kids = self._kids[player]
        par = tree.parent[kids]
        vp = v[kids] if player == 0 else -v[kids]
        q = np.zeros(tree.n_cols)
        np.add.at(q, tree.in_col[kids], rc[par] * opp_reach[par] * vp)
        node_val = np.add.reduceat(sigma * q, tree.is_off)
        cols = self._pcols[player]
        self.regret[cols] += q[cols] - node_val[self._col_infoset[cols]]
        if self.plus:
            np.maximum(self.regret, 0.0, out=self.regret,
                       where=self._col_player == player)

        own_reach = r0 if player == 0 else r1
        dec = self._dec_nodes[player]
        ow = np.zeros(tree.n_infosets)
        np.add.at(ow, tree.infoset[dec], own_reach[dec])
        w = float(self.t) if self.plus else 1.0
        self.ssum[cols] += w * ow[self._col_infoset[cols]] * sigma[cols]

    def iterate(self, n: int = 1) -> None:
        for _ in range(n):
            self.t += 1
            if self.alternating:
                for p in (0, 1):
                    sigma = self.current()
                    passes = self._passes(sigma)
                    self._update(sigma, *passes, p)
                    if self.counter is not None:
                        self.counter.add(self.tree.n_nodes)
            else:
                sigma = self.current()
                passes = self._passes(sigma)
                for p in (0, 1):
                    self._update(sigma, *passes, p)
                if self.counter is not None:
                    self.counter.add(self.tree.n_nodes)

    def average_flat(self) -> np.ndarray:
        norm = np.add.reduceat(self.ssum, self.tree.is_off)
        norm = norm[self._col_infoset]
        return np.where(norm > 0.0,
                        self.ssum / np.where(norm > 0.0, norm, 1.0),
                        self._uniform)

    def average(self) -> tuple[TabularPolicy, TabularPolicy]:
        flat = self.average_flat()
        return (policy_from_flat(self.tree, flat, 0),
                policy_from_flat(self.tree, flat, 1))
