"""
Seeded random single-peaked elections and instances.
"""
from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np

from libs.core_model import ApprovalBallot, Election, LinearBallot
from libs.election_file import ElectionDocument
from libs.exceptions import ElectionError

logger = logging.getLogger(__name__)

KINDS = ('linear', 'approval')


def _linear_ballot(rng, axis, weight):
    m = len(axis)
    lo = hi = int(rng.integers(m))
    ranking = [axis[lo]]
    while len(ranking) < m:
        go_left = hi == m - 1 or (lo > 0 and rng.random() < 0.5)
        if go_left:
            lo -= 1
            ranking.append(axis[lo])
        else:
            hi += 1
            ranking.append(axis[hi])
    return LinearBallot(tuple(ranking), weight)


def _approval_ballot(rng, axis, weight):
    m = len(axis)
    if m > 1 and rng.random() < 0.1:
        return ApprovalBallot(frozenset(), weight)
    i = int(rng.integers(m))
    j = int(rng.integers(i, m))
    return ApprovalBallot(frozenset(axis[i:j + 1]), weight)


def _profile(rng, axis, n, kind, weight_cap):
    draw = _linear_ballot if kind == 'linear' else _approval_ballot
    return tuple(draw(rng, axis, int(rng.integers(1, weight_cap + 1))) for _ in range(n))


def _check(m, n, kind, weight_cap):
    if m < 1:
        raise ElectionError(f"Need at least one candidate, got m={m}")
    if n < 0:
        raise ElectionError(f"Ballot count must be non-negative, got n={n}")
    if kind not in KINDS:
        raise ElectionError(f"Unknown ballot kind {kind!r}; expected one of {list(KINDS)}")
    if weight_cap < 1:
        raise ElectionError(f"weight_cap must be at least 1, got {weight_cap}")


def gen_random_sp(seed, m, n, kind='linear', weight_cap=1) -> Tuple[Election, Tuple[str, ...]]:
    """
    Random election single-peaked on a random axis.

    Linear ballots pick a peak and grow outward, choosing a side at random while
    both are open. Approval ballots approve a random axis interval, or nobody.

    Parameters:
    -----------
    seed : int
        Seed for numpy's default_rng; equal seeds give equal elections
    m : int
        Number of candidates c1..cm
    n : int
        Number of ballots
    kind : str
        'linear' or 'approval'
    weight_cap : int
        Ballot weights are drawn from 1..weight_cap

    Returns:
    --------
    (Election, tuple) : the election and the axis it is single-peaked on
    """
    _check(m, n, kind, weight_cap)
    rng = np.random.default_rng(seed)
    candidates = tuple(f"c{i}" for i in range(1, m + 1))
    axis = tuple(str(c) for c in rng.permutation(candidates))
    return Election(candidates, _profile(rng, axis, n, kind, weight_cap)), axis


def gen_random_instance(seed, m, n, kind='linear', weight_cap=1, pool_size: Optional[int] = None,
                        max_spoilers: Optional[int] = None, max_manipulators=3,
                        manipulator_cap=4) -> ElectionDocument:
    """
    Random ElectionDocument for batch verification.

    Approval documents get a POOL of unregistered voters on the same axis.
    Linear documents get spoiler candidates and manipulator weights. Every
    document has a DISTINGUISHED registered candidate and an AXIS.
    """
    _check(m, n, kind, weight_cap)
    rng = np.random.default_rng(seed)
    names = tuple(f"c{i}" for i in range(1, m + 1))
    axis = tuple(str(c) for c in rng.permutation(names))

    if kind == 'approval':
        ballots = _profile(rng, axis, n, kind, 1)
        size = int(rng.integers(0, n + 1)) if pool_size is None else pool_size
        pool = _profile(rng, axis, size, kind, 1)
        p = str(rng.choice(names))
        return ElectionDocument(names, ballots, axis=axis, distinguished=p, pool=pool)

    ballots = _profile(rng, axis, n, kind, weight_cap)
    cap = (m - 1) // 2 if max_spoilers is None else min(max_spoilers, m - 1)
    count = int(rng.integers(0, cap + 1))
    spoilers = tuple(str(c) for c in rng.choice(names, size=count, replace=False)) if count else ()
    registered = tuple(c for c in names if c not in spoilers)
    p = str(rng.choice(registered))
    weights = tuple(int(w) for w in rng.integers(0, manipulator_cap + 1,
                                                 size=int(rng.integers(0, max_manipulators + 1))))
    doc = ElectionDocument(registered, ballots, spoilers, axis, p, weights)
    logger.debug(f"Generated {kind} instance with seed {seed}: {len(spoilers)} spoiler(s), {len(weights)} manipulator(s)")
    return doc
