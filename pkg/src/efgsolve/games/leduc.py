"""Leduc poker and its m-clone variant.

Six cards (two suits of J/Q/K), one ante each, two betting rounds with a
fixed raise of 2 then 4 and at most two raises per round.  A public card
is dealt between rounds; pairing it wins the showdown, otherwise higher
rank wins and equal ranks split.

Base actions are ordered [call/check, raise, fold]; fold is only legal
against an outstanding raise.  With ``clones=m`` every legal base action
appears as m observationally distinct copies with identical effect,
ordered base-major: slots [b*m, (b+1)*m) are the clones of base b.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..game import CHANCE

CALL = 0
RAISE = 1
FOLD = 2

_RAISE_SIZE = (2, 4)
_MAX_RAISES = 2
_NUM_CARDS = 6

_DEALS = tuple(
    (a, b) for a in range(_NUM_CARDS) for b in range(_NUM_CARDS) if a != b
)

# Stages: private deal, round-1 betting, public deal, round-2 betting.
_DEAL, _BET1, _PUBLIC, _BET2, _DONE = range(5)


def _rank(card: int) -> int:
    return card >> 1


@dataclass(frozen=True, eq=False, slots=True)
class LeducState:
    clones: int
    stage: int
    cards: tuple | None
    public: int | None
    to_act: int
    acted: int
    raises: int
    contrib: tuple
    folded: int | None
    obs: tuple

    def is_terminal(self) -> bool:
        return self.stage == _DONE

    def is_chance(self) -> bool:
        return self.stage in (_DEAL, _PUBLIC)

    def current_player(self) -> int:
        if self.is_chance():
            return CHANCE
        return self.to_act

    def _outstanding(self) -> int:
        return self.contrib[1 - self.to_act] - self.contrib[self.to_act]

    def _base_actions(self) -> tuple[int, ...]:
        if self._outstanding() == 0:
            return (CALL, RAISE)
        if self.raises < _MAX_RAISES:
            return (CALL, RAISE, FOLD)
        return (CALL, FOLD)

    def legal_actions(self) -> tuple[int, ...]:
        return tuple(range(len(self._base_actions()) * self.clones))

    def _remaining(self) -> tuple[int, ...]:
        used = set(self.cards)
        return tuple(c for c in range(_NUM_CARDS) if c not in used)

    def chance_outcomes(self) -> tuple[tuple[int, float], ...]:
        if self.stage == _DEAL:
            p = 1.0 / len(_DEALS)
            return tuple((i, p) for i in range(len(_DEALS)))
        rem = self._remaining()
        return tuple((i, 1.0 / len(rem)) for i in range(len(rem)))

    def _observe_all(self, token: int) -> tuple:
        return (self.obs[0] + (token,), self.obs[1] + (token,))

    def apply(self, action: int) -> "LeducState":
        if self.stage == _DEAL:
            c = _DEALS[action]
            return replace(self, stage=_BET1, cards=c,
                           obs=(self.obs[0] + (c[0],), self.obs[1] + (c[1],)))
        if self.stage == _PUBLIC:
            card = self._remaining()[action]
            return replace(self, stage=_BET2, public=card, to_act=0,
                           acted=0, raises=0,
                           obs=self._observe_all(100 + card))

        base = self._base_actions()[action // self.clones]
        obs = self._observe_all(10 + action)
        p = self.to_act
        contrib = list(self.contrib)
        if base == FOLD:
            return replace(self, stage=_DONE, folded=p, obs=obs)
        if base == CALL:
            contrib[p] += self._outstanding()
            if self.acted >= 1:
                # Check-check or a call closes the round.
                stage = _PUBLIC if self.stage == _BET1 else _DONE
                return replace(self, stage=stage, contrib=tuple(contrib),
                               obs=obs)
            return replace(self, to_act=1 - p, acted=self.acted + 1,
                           contrib=tuple(contrib), obs=obs)
        size = _RAISE_SIZE[0] if self.stage == _BET1 else _RAISE_SIZE[1]
        contrib[p] += self._outstanding() + size
        return replace(self, to_act=1 - p, acted=self.acted + 1,
                       raises=self.raises + 1, contrib=tuple(contrib),
                       obs=obs)

    def returns(self) -> tuple[float, float]:
        if self.folded is not None:
            v = float(self.contrib[self.folded])
            v = -v if self.folded == 0 else v
            return (v, -v)
        r1, r2 = _rank(self.cards[0]), _rank(self.cards[1])
        rp = _rank(self.public)
        if r1 == rp:
            sign = 1.0
        elif r2 == rp:
            sign = -1.0
        elif r1 != r2:
            sign = 1.0 if r1 > r2 else -1.0
        else:
            sign = 0.0
        v = sign * self.contrib[0]
        return (v, -v)

    def infostate_key(self, player: int) -> tuple:
        return (player,) + self.obs[player]


class Leduc:
    def __init__(self, clones: int = 1):
        if clones < 1:
            raise ValueError("clones must be >= 1")
        self.clones = clones
        self.name = "leduc" if clones == 1 else f"clone_leduc_{clones}"

    def root(self) -> LeducState:
        return LeducState(clones=self.clones, stage=_DEAL, cards=None,
                          public=None, to_act=0, acted=0, raises=0,
                          contrib=(1, 1), folded=None, obs=((), ()))
