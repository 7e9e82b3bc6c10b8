"""
Single-peaked consistency checks and axis discovery.

An axis is a tuple of candidate ids. Linear ballots are single-peaked on it when
every prefix of the ranking is a contiguous stretch of the axis; approval
ballots when every approved set is one.
"""
from __future__ import annotations

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import networkx as nx

from libs.core_model import APPROVAL, Election, LinearBallot
from libs.exceptions import ElectionError, InvalidAxisError

logger = logging.getLogger(__name__)

Axis = Tuple[str, ...]


def is_axis(candidates, axis):
    return len(axis) == len(candidates) and set(axis) == set(candidates)


def _positions(candidates, axis):
    if not is_axis(candidates, axis):
        raise InvalidAxisError(
            f"Invalid societal linear order: {list(axis)} is not a permutation of {list(candidates)}")
    return {c: i for i, c in enumerate(axis)}


def ranking_fits(ranking, pos):
    """True when every prefix of `ranking` is an interval of the axis given by `pos`."""
    if not ranking:
        return True
    lo = hi = pos[ranking[0]]
    for c in ranking[1:]:
        q = pos[c]
        if q == lo - 1:
            lo = q
        elif q == hi + 1:
            hi = q
        else:
            return False
    return True


def interval_fits(approved, pos):
    if not approved:
        return True
    spots = [pos[c] for c in approved]
    return max(spots) - min(spots) + 1 == len(spots)


def linear_consistent(e: Election, axis: Sequence[str]) -> bool:
    """
    Check that every linear ballot is single-peaked with respect to `axis`.

    Parameters:
    -----------
    e : Election
        Election with linear ballots
    axis : sequence of str
        Permutation of e.candidates

    Returns:
    --------
    bool : True iff each ranking grows from its peak one axis neighbour at a time
    """
    if e.kind == APPROVAL:
        raise ElectionError("linear_consistent needs linear ballots")
    pos = _positions(e.candidates, axis)
    return all(ranking_fits(b.ranking, pos) for b in e.ballots)


def approval_consistent(e: Election, axis: Sequence[str]) -> bool:
    """True iff every nonempty approved set is an interval of `axis`."""
    if e.kind == 'linear':
        raise ElectionError("approval_consistent needs approval ballots")
    pos = _positions(e.candidates, axis)
    return all(interval_fits(b.approved, pos) for b in e.ballots)


def consistent(e: Election, axis: Sequence[str]) -> bool:
    if e.kind == APPROVAL:
        return approval_consistent(e, axis)
    return linear_consistent(e, axis)


def check_axis(e: Election, axis: Sequence[str]):
    """Raise InvalidAxisError unless `axis` is a permutation that the ballots respect."""
    if not consistent(e, axis):
        raise InvalidAxisError()


def enumerate_sp_linear_ballots(candidates, axis: Sequence[str]) -> List[Tuple[str, ...]]:
    """
    Every ranking that is single-peaked on `axis` (2^(m-1) of them).

    Rankings are produced peak by peak along the axis; for each peak the
    sequence of left/right extensions runs through all combinations.
    """
    axis = tuple(axis)
    if not is_axis(candidates, axis):
        raise InvalidAxisError()
    m = len(axis)
    if m == 0:
        return [()]
    ballots = []
    for peak in range(m):
        for left_steps in itertools.combinations(range(m - 1), peak):
            left_steps = set(left_steps)
            lo = hi = peak
            ranking = [axis[peak]]
            for step in range(m - 1):
                if step in left_steps:
                    lo -= 1
                    ranking.append(axis[lo])
                else:
                    hi += 1
                    ranking.append(axis[hi])
            ballots.append(tuple(ranking))
    return ballots


def peak_outward_ballot(axis: Sequence[str], peak: int, lo: int = None, hi: int = None) -> Tuple[str, ...]:
    """
    Single-peaked ranking from axis position `peak` that fills [lo, hi] first.

    Inside the interval, and then outside it, the left side is extended before
    the right side.
    """
    m = len(axis)
    lo = peak if lo is None else lo
    hi = peak if hi is None else hi
    if not lo <= peak <= hi:
        raise ElectionError(f"Peak position {peak} lies outside [{lo}, {hi}]")
    i = j = peak
    ranking = [axis[peak]]
    while len(ranking) < m:
        if i - 1 >= lo:
            i -= 1
            ranking.append(axis[i])
        elif j + 1 <= hi:
            j += 1
            ranking.append(axis[j])
        elif i > 0:
            i -= 1
            ranking.append(axis[i])
        else:
            j += 1
            ranking.append(axis[j])
    return tuple(ranking)


# ---------------------------------------------------------------------------
# Linear ballots: placement from the outside in
# ---------------------------------------------------------------------------

def _fits_between(ranks, x, outer, inner):
    # x goes between the placed `outer` side and everything in `inner`;
    # no ballot may rank something on both sides above x
    for rank in ranks:
        rx = rank[x]
        if any(rank[c] < rx for c in outer) and any(rank[c] < rx for c in inner):
            return False
    return True


def find_axis_linear(e: Election) -> Optional[Axis]:
    """
    Find an axis on which every linear ballot is single-peaked.

    Candidates are placed from both ends of the axis towards the middle. At each
    step the candidates ranked last among the unplaced ones must sit at the two
    open ends, so more than two of them means no axis exists. Each one is put on
    the side where it does not become a valley for any ballot.

    Once an axis is known to exist, the one with the smallest candidate-index
    sequence is picked: a ranking fits an axis exactly when each of its
    prefixes is an interval, so the prefixes go to the same least-arrangement
    search the approval finder uses.

    Returns:
    --------
    tuple of str or None : the axis, None when the profile is not single-peaked
    """
    if e.kind == APPROVAL:
        raise ElectionError("find_axis_linear needs linear ballots")
    candidates = list(e.candidates)
    index = {c: i for i, c in enumerate(candidates)}
    rankings = list(dict.fromkeys(b.ranking for b in e.ballots))
    ranks = [{c: r for r, c in enumerate(ranking)} for ranking in rankings]

    remaining = list(candidates)
    left, right = [], []
    while remaining:
        rest = set(remaining)
        bottoms = []
        for ranking in rankings:
            worst = next(c for c in reversed(ranking) if c in rest)
            if worst not in bottoms:
                bottoms.append(worst)
        if len(bottoms) > 2:
            logger.debug(f"Three or more bottom candidates {bottoms}; not single-peaked")
            return None
        if not bottoms:
            left.extend(remaining)
            break

        bottoms.sort(key=index.get)
        if len(bottoms) == 1:
            x = bottoms[0]
            if _fits_between(ranks, x, left, (rest - {x}) | set(right)):
                left.append(x)
            elif _fits_between(ranks, x, right, (rest - {x}) | set(left)):
                right.append(x)
            else:
                return None
            remaining.remove(x)
            continue

        x, y = bottoms
        for to_left, to_right in ((x, y), (y, x)):
            if (_fits_between(ranks, to_left, left, (rest - {to_left}) | set(right))
                    and _fits_between(ranks, to_right, right, (rest - {to_right}) | set(left))):
                left.append(to_left)
                right.append(to_right)
                break
        else:
            return None
        remaining.remove(x)
        remaining.remove(y)

    axis = tuple(left + right[::-1])
    if not linear_consistent(e, axis):
        return None
    prefixes = [r[:t] for r in rankings for t in range(2, len(r))]
    least = _least_axis(candidates, prefixes)
    if least is None or not linear_consistent(e, least):
        logger.warning(f"No least arrangement for a single-peaked profile; keeping {list(axis)}")
        return axis
    return least


# ---------------------------------------------------------------------------
# Approval ballots: consecutive-ones arrangement
# ---------------------------------------------------------------------------

def _overlap(s, t):
    return bool(s & t) and not s <= t and not t <= s


def _place_set(blocks, t):
    """
    Refine an ordered block partition so that `t` becomes a run of blocks.

    New elements of `t` are appended at the end that `t` reaches. Returns the
    new block list, or None when `t` cannot be made contiguous.
    """
    placed = set().union(*blocks)
    new = t - placed
    touched = [i for i, b in enumerate(blocks) if b & t]
    if not touched:
        return None
    i, j = touched[0], touched[-1]
    if touched != list(range(i, j + 1)):
        return None
    if any(not blocks[x] <= t for x in range(i + 1, j)):
        return None

    def outside_first(b):
        return [part for part in (b - t, b & t) if part]

    def inside_first(b):
        return [part for part in (b & t, b - t) if part]

    last = len(blocks) - 1
    if new:
        if j == last and (i == j or blocks[j] <= t):
            return blocks[:i] + outside_first(blocks[i]) + blocks[i + 1:] + [new]
        if i == 0 and (i == j or blocks[0] <= t):
            return [new] + blocks[:j] + inside_first(blocks[j]) + blocks[j + 1:]
        return None
    if i == j:
        return blocks[:i] + inside_first(blocks[i]) + blocks[i + 1:]
    return blocks[:i] + outside_first(blocks[i]) + blocks[i + 1:j] + inside_first(blocks[j]) + blocks[j + 1:]


def _arrange(candidates, family) -> Optional[Axis]:
    """
    Some ordering of `candidates` in which every set of `family` is an interval.

    Sets are grouped into components of the overlap graph (two sets overlap when
    they intersect and neither contains the other). A component's arrangement is
    fixed up to reversal, so it is built by adding its sets in breadth-first
    order and refining an ordered block partition. Components nest: a smaller
    component's union always falls inside one block of the next larger one, and
    is laid out there.
    """
    candidates = list(candidates)
    index = {c: i for i, c in enumerate(candidates)}
    m = len(candidates)
    sets = sorted({frozenset(s) for s in family if 1 < len(s) < m},
                  key=lambda s: (-len(s), sorted(index[c] for c in s)))

    graph = nx.Graph()
    graph.add_nodes_from(range(len(sets)))
    for u, v in itertools.combinations(range(len(sets)), 2):
        if _overlap(sets[u], sets[v]):
            graph.add_edge(u, v)

    components = []
    for nodes in sorted(nx.connected_components(graph), key=min):
        source = min(nodes)
        order = [source] + [v for _, v in nx.bfs_edges(graph, source, sort_neighbors=sorted)]
        blocks = [set(sets[source])]
        for node in order[1:]:
            blocks = _place_set(blocks, sets[node])
            if blocks is None:
                logger.debug(f"Sets around {sorted(sets[node])} cannot be made contiguous")
                return None
        components.append({'blocks': blocks, 'union': frozenset().union(*blocks), 'size': len(nodes)})

    # a lone set equal to a bigger component's union is an interval automatically
    unions = {comp['union'] for comp in components if comp['size'] > 1}
    components = [comp for comp in components if comp['size'] > 1 or comp['union'] not in unions]

    children = {}
    roots = []
    for k, comp in enumerate(components):
        hosts = [h for h, other in enumerate(components) if comp['union'] < other['union']]
        if not hosts:
            roots.append(k)
            continue
        host = min(hosts, key=lambda h: len(components[h]['union']))
        block = next((b for b, blk in enumerate(components[host]['blocks']) if comp['union'] <= blk), None)
        if block is None:
            logger.debug(f"Component {sorted(comp['union'])} straddles blocks of its host")
            return None
        children.setdefault((host, block), []).append(k)

    def first_index(k):
        return min(index[c] for c in components[k]['union'])

    def expand(k):
        out = []
        for b, block in enumerate(components[k]['blocks']):
            covered = set()
            for kid in sorted(children.get((k, b), []), key=first_index):
                out.extend(expand(kid))
                covered |= components[kid]['union']
            out.extend(sorted(block - covered, key=index.get))
        return out

    axis = []
    for k in sorted(roots, key=first_index):
        axis.extend(expand(k))
    placed = set(axis)
    axis.extend(c for c in candidates if c not in placed)

    pos = {c: i for i, c in enumerate(axis)}
    if len(pos) != m or not all(interval_fits(s, pos) for s in sets):
        return None
    return tuple(axis)


def _least_axis(candidates, family) -> Optional[Axis]:
    """
    The axis with the smallest candidate-index sequence among all orderings
    that keep every set of `family` an interval.

    The axis is fixed one position at a time. A prefix p1..pt can start an
    axis iff the family stays arrangeable after adding C - {p1} (p1 sits at an
    end) and the nested sets {p1..pi}.
    """
    candidates = list(candidates)
    everyone = frozenset(candidates)
    family = [frozenset(s) for s in family]
    if _arrange(candidates, family) is None:
        return None
    prefix = []
    while len(prefix) < len(candidates) - 1:
        for c in candidates:
            if c in prefix:
                continue
            trial = prefix + [c]
            extra = [everyone - {trial[0]}] + [frozenset(trial[:i]) for i in range(2, len(trial) + 1)]
            if _arrange(candidates, family + extra) is not None:
                prefix = trial
                break
        else:
            # unreachable while the family itself is arrangeable
            return None
    prefix.extend(c for c in candidates if c not in prefix)
    return tuple(prefix)


def find_axis_approval(e: Election) -> Optional[Axis]:
    """
    Find an axis on which every approved set is an interval.

    Existence is decided by a consecutive-ones arrangement of the approved
    sets; among all witnessing axes the one with the smallest candidate-index
    sequence is returned.

    Returns:
    --------
    tuple of str or None : the axis, None when no axis exists
    """
    if e.kind == 'linear':
        raise ElectionError("find_axis_approval needs approval ballots")
    axis = _least_axis(e.candidates, [b.approved for b in e.ballots])
    if axis is None or not approval_consistent(e, axis):
        return None
    return axis


def find_axis(e: Election) -> Optional[Axis]:
    if e.kind == APPROVAL:
        return find_axis_approval(e)
    if e.kind is None:
        return tuple(e.candidates)
    return find_axis_linear(e)
