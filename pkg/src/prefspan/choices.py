"""Deterministic tie-break and choice strategies."""

from __future__ import annotations

import random
from typing import Callable, Iterable, Sequence

from .relation import TieBreak

__all__ = ["Choose", "seeded_tie_break", "seeded_choose"]

# Picks one element out of a sorted candidate list.
Choose = Callable[[Sequence[str]], str]


def seeded_tie_break(seed: int, ids: Iterable[str]) -> TieBreak:
    """A reproducible random total order over a fixed id set."""
    order = sorted(ids)
    random.Random(seed).shuffle(order)
    rank = {e: i for i, e in enumerate(order)}
    return rank.__getitem__


def seeded_choose(seed: int) -> Choose:
    """A reproducible random picker for candidate lists."""
    rng = random.Random(seed)

    def choose(candidates: Sequence[str]) -> str:
        return candidates[rng.randrange(len(candidates))]

    return choose
