"""
PARTITION solving and the PARTITION-to-manipulation instance generators.

Each generator turns a set of distinct positive integers summing to 2K into a
weighted manipulation instance that has a successful coalition exactly when
some subset sums to K.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from libs.core_model import LinearBallot, ScoringVector, WinnerModel
from libs.exceptions import ElectionError
from libs.manipulation import ManipulationInstance

logger = logging.getLogger(__name__)

REDUCTIONS = ('3veto5', '310', 'borda4', 'dichotomy')

_AXES = {
    '3veto5': ('c', 'a', 'p', 'b', 'd'),
    '310': ('a', 'p', 'b'),
    'borda4': ('a', 'b', 'p', 'c'),
    'dichotomy': ('a', 'p', 'b'),
}


@dataclass(frozen=True)
class PartitionInstance:
    items: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'items', tuple(self.items))
        if not self.items:
            raise ElectionError("Partition needs at least one item")
        if any(not isinstance(k, int) or k <= 0 for k in self.items):
            raise ElectionError(f"Partition items must be positive integers: {list(self.items)}")
        if len(set(self.items)) != len(self.items):
            raise ElectionError(f"Partition items must be distinct: {list(self.items)}")
        if sum(self.items) % 2:
            raise ElectionError(f"Partition items must have an even total, got {sum(self.items)}")

    @property
    def total(self):
        return sum(self.items)

    @property
    def half(self):
        return self.total // 2


def partition_solve(inst: PartitionInstance) -> Optional[Tuple[int, ...]]:
    """
    Find a subset of the items summing to K.

    Parameters:
    -----------
    inst : PartitionInstance
        Distinct positive items with even total 2K

    Returns:
    --------
    tuple of int or None : the subset in item order, None when no subset works

    Example:
    --------
    >>> partition_solve(PartitionInstance((1, 2, 3)))
    (1, 2)
    """
    items = inst.items
    target = inst.half
    n = len(items)
    # reach[i, s]: some subset of items[:i] sums to s
    reach = np.zeros((n + 1, target + 1), dtype=bool)
    reach[0, 0] = True
    for i, k in enumerate(items, start=1):
        reach[i] = reach[i - 1]
        if k <= target:
            reach[i, k:] |= reach[i - 1, :target + 1 - k]
    if not reach[n, target]:
        logger.debug(f"No subset of {list(items)} sums to {target}")
        return None

    chosen = []
    s = target
    for i in range(n, 0, -1):
        if reach[i - 1, s]:
            continue
        chosen.append(items[i - 1])
        s -= items[i - 1]
    return tuple(k for k in items if k in set(chosen))


def reduction_axis(kind):
    """The axis the generated nonmanipulators fix (up to reversal)."""
    if kind not in _AXES:
        raise ElectionError(f"Unknown reduction {kind!r}; expected one of {list(REDUCTIONS)}")
    return _AXES[kind]


def reduce_partition_to_3veto5(inst: PartitionInstance, model=WinnerModel.NONUNIQUE) -> ManipulationInstance:
    """
    3-veto with five candidates.

    Two nonmanipulators of weight K (K-1 for a unique winner) rank c>a>p>b>d
    and d>b>p>a>c; the manipulators carry the item weights.
    """
    model = WinnerModel(model)
    K = inst.half
    w = K - 1 if model == WinnerModel.UNIQUE else K
    ballots = (LinearBallot(('c', 'a', 'p', 'b', 'd'), w), LinearBallot(('d', 'b', 'p', 'a', 'c'), w))
    return ManipulationInstance(('a', 'b', 'c', 'd', 'p'), ballots, inst.items, 'p',
                                ScoringVector.j_veto(5, 3), model, reduction_axis('3veto5'))


def reduce_partition_to_310(inst: PartitionInstance, model=WinnerModel.NONUNIQUE) -> ManipulationInstance:
    """Vector (3, 1, 0): a>p>b and b>p>a, each of weight 5K (5K-1 for a unique winner)."""
    model = WinnerModel(model)
    K = inst.half
    w = 5 * K - 1 if model == WinnerModel.UNIQUE else 5 * K
    ballots = (LinearBallot(('a', 'p', 'b'), w), LinearBallot(('b', 'p', 'a'), w))
    return ManipulationInstance(('a', 'b', 'p'), ballots, inst.items, 'p',
                                ScoringVector((3, 1, 0)), model, reduction_axis('310'))


def reduce_partition_to_borda4(inst: PartitionInstance, model=WinnerModel.NONUNIQUE) -> ManipulationInstance:
    """
    Four-candidate Borda (3, 2, 1, 0) on the axis a L b L p L c.

    c>p>b>a with weight 11K and b>a>p>c with weight 7K; 11K-3 and 7K-2 for a
    unique winner.
    """
    model = WinnerModel(model)
    K = inst.half
    unique = model == WinnerModel.UNIQUE
    ballots = (LinearBallot(('c', 'p', 'b', 'a'), 11 * K - (3 if unique else 0)),
               LinearBallot(('b', 'a', 'p', 'c'), 7 * K - (2 if unique else 0)))
    return ManipulationInstance(('a', 'b', 'p', 'c'), ballots, inst.items, 'p',
                                ScoringVector.borda(4), model, reduction_axis('borda4'))


def reduce_partition_to_dichotomy(inst: PartitionInstance, alpha1, alpha2,
                                  model=WinnerModel.NONUNIQUE) -> ManipulationInstance:
    """
    Three candidates under (alpha1, alpha2, 0) with alpha1 > 2 alpha2 > 0.

    a>p>b and b>p>a each weigh (2 alpha1 - alpha2)K and manipulator i weighs
    (alpha1 - 2 alpha2)k_i. For a unique winner every weight is multiplied by
    alpha1 + alpha2 + 1 and the two nonmanipulators then lose one unit each.
    """
    model = WinnerModel(model)
    if not alpha1 > 2 * alpha2 > 0:
        raise ElectionError(f"Dichotomy reduction needs alpha1 > 2*alpha2 > 0, got ({alpha1}, {alpha2})")
    K = inst.half
    scale = alpha1 + alpha2 + 1 if model == WinnerModel.UNIQUE else 1
    w = (2 * alpha1 - alpha2) * K * scale - (1 if model == WinnerModel.UNIQUE else 0)
    weights = tuple((alpha1 - 2 * alpha2) * k * scale for k in inst.items)
    ballots = (LinearBallot(('a', 'p', 'b'), w), LinearBallot(('b', 'p', 'a'), w))
    return ManipulationInstance(('a', 'b', 'p'), ballots, weights, 'p',
                                ScoringVector((alpha1, alpha2, 0)), model, reduction_axis('dichotomy'))


def reduce_partition(kind, inst: PartitionInstance, model=WinnerModel.NONUNIQUE, alpha=None):
    if kind == '3veto5':
        return reduce_partition_to_3veto5(inst, model)
    if kind == '310':
        return reduce_partition_to_310(inst, model)
    if kind == 'borda4':
        return reduce_partition_to_borda4(inst, model)
    if kind == 'dichotomy':
        if alpha is None:
            raise ElectionError("Dichotomy reduction needs (alpha1, alpha2)")
        return reduce_partition_to_dichotomy(inst, alpha[0], alpha[1], model)
    raise ElectionError(f"Unknown reduction {kind!r}; expected one of {list(REDUCTIONS)}")


def partition_witness_ballots(kind, inst: PartitionInstance, subset) -> Tuple[Tuple[str, ...], ...]:
    """
    Manipulator ballots realizing a partition witness, in item order.

    Items in `subset` get the first ballot of the pair, the others the second.
    """
    pairs = {
        '3veto5': (('p', 'a', 'c', 'b', 'd'), ('p', 'b', 'd', 'a', 'c')),
        '310': (('p', 'a', 'b'), ('p', 'b', 'a')),
        'dichotomy': (('p', 'a', 'b'), ('p', 'b', 'a')),
        'borda4': (('p', 'b', 'a', 'c'), ('p', 'c', 'b', 'a')),
    }
    if kind not in pairs:
        raise ElectionError(f"Unknown reduction {kind!r}; expected one of {list(REDUCTIONS)}")
    chosen = set(subset)
    if not chosen <= set(inst.items):
        raise ElectionError(f"Witness {sorted(chosen)} is not a subset of {list(inst.items)}")
    inside, outside = pairs[kind]
    return tuple(inside if k in chosen else outside for k in inst.items)
