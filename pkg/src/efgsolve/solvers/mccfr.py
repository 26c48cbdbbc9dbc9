"""External-sampling Monte Carlo CFR.

One iteration traverses the tree once per updating player: the
traverser's actions are all explored, while chance and the opponent are
sampled from the seeded generator.  Visited histories are counted
individually, so the node counter reflects actual sampled work.
"""

from __future__ import annotations

import numpy as np

from ..policy import TabularPolicy
from ..tree import CHANCE_NODE, DECISION, NodeCounter, TERMINAL, TreeIndex


class MccfrEs:
    def __init__(self, tree: TreeIndex, seed: int = 0,
                 counter: NodeCounter | None = None):
        self.tree = tree
        self.rng = np.random.default_rng(seed)
        self.counter = counter
        self.regret = np.zeros(tree.n_cols)
        self.ssum = np.zeros(tree.n_cols)
        self._col_infoset = np.repeat(np.arange(tree.n_infosets),
                                      tree.is_nact)
        self._uniform = 1.0 / tree.is_nact[self._col_infoset]
        self._visits = 0

    def _row(self, sl: slice) -> np.ndarray:
        r = self.regret[sl]
        pos = np.maximum(r, 0.0)
        norm = pos.sum()
        if norm <= 0.0:
            return np.full(len(pos), 1.0 / len(pos))
        return pos / norm

    def _sample(self, probs) -> int:
        # Inverse-CDF draw; Generator.choice is far too slow per node.
        r = self.rng.random()
        acc = 0.0
        last = len(probs) - 1
        for i in range(last):
            acc += probs[i]
            if r < acc:
                return i
        return last

    def _walk(self, u: int, player: int) -> float:
        self._visits += 1
        tree = self.tree
        kind = tree.kind[u]
        if kind == TERMINAL:
            pay = tree.payoff1[u]
            return pay if player == 0 else -pay
        kids = tree.children(u)
        if kind == CHANCE_NODE:
            c = self._sample(tree.in_prob[kids])
            return self._walk(int(kids[c]), player)
        isid = tree.infoset[u]
        sl = tree.col_slice(int(isid))
        sigma = self._row(sl)
        if tree.player[u] == player:
            vals = np.array([self._walk(int(c), player) for c in kids])
            v = float(sigma @ vals)
            self.regret[sl] += vals - v
            return v
        self.ssum[sl] += sigma
        c = self._sample(sigma)
        return self._walk(int(kids[c]), player)

    def iterate(self, n: int = 1) -> None:
        for _ in range(n):
            for p in (0, 1):
                self._walk(0, p)
        if self.counter is not None:
            self.counter.add(self._visits)
            self._visits = 0

    def average(self) -> tuple[TabularPolicy, TabularPolicy]:
        out = []
        for p in (0, 1):
            pol = TabularPolicy(p)
            for isid in self.tree.infosets_of(p):
                sl = self.tree.col_slice(int(isid))
                row = self.ssum[sl]
                total = row.sum()
                n = int(self.tree.is_nact[isid])
                pol.table[self.tree.keys[isid]] = (
                    row / total if total > 0.0 else np.full(n, 1.0 / n))
            out.append(pol)
        return out[0], out[1]

    def average_flat(self) -> np.ndarray:
        norm = np.add.reduceat(self.ssum, self.tree.is_off)
        norm = norm[self._col_infoset]
        return np.where(norm > 0.0,
                        self.ssum / np.where(norm > 0.0, norm, 1.0),
                        self._uniform)
