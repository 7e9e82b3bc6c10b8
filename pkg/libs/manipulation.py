"""
Constructive coalition weighted manipulation (CCWM) for single-peaked electorates.

The nonmanipulators S are fixed weighted ballots; the coalition T picks one
ranking per manipulator, each single-peaked on the same axis. Polynomial
solvers cover the cases that have closed-form answers; exact_ccwm decides the
rest by dynamic programming over score margins.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from libs.config import get_setting
from libs.core_model import (
    Election, InputMode, LinearBallot, ScoringVector, WinnerModel, scoring_scores, winners,
)
from libs.exceptions import ElectionError, InvalidAxisError, NotSinglePeakedError, ResourceLimitError
from libs.single_peaked import (
    enumerate_sp_linear_ballots, is_axis, linear_consistent, peak_outward_ballot, ranking_fits,
)

logger = logging.getLogger(__name__)

Ranking = Tuple[str, ...]


@dataclass(frozen=True)
class ManipulationInstance:
    candidates: Tuple[str, ...]
    nonmanipulators: Tuple[LinearBallot, ...]
    manipulator_weights: Tuple[int, ...]
    distinguished: str
    rule: ScoringVector
    model: WinnerModel = WinnerModel.UNIQUE
    axis: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'candidates', tuple(self.candidates))
        object.__setattr__(self, 'nonmanipulators', tuple(self.nonmanipulators))
        object.__setattr__(self, 'manipulator_weights', tuple(self.manipulator_weights))
        object.__setattr__(self, 'model', WinnerModel(self.model))
        if self.distinguished not in self.candidates:
            raise ElectionError(f"Distinguished candidate {self.distinguished!r} is not a candidate")
        if any(not isinstance(w, int) or w < 0 for w in self.manipulator_weights):
            raise ElectionError(f"Manipulator weights must be non-negative integers: {self.manipulator_weights}")
        if len(self.rule) != len(self.candidates):
            raise ElectionError(
                f"Scoring vector has {len(self.rule)} entries, election has {len(self.candidates)} candidates")
        election = self.election()
        if self.axis is not None:
            object.__setattr__(self, 'axis', tuple(self.axis))
            if not is_axis(self.candidates, self.axis) or not linear_consistent(election, self.axis):
                raise InvalidAxisError()

    @property
    def m(self):
        return len(self.candidates)

    def election(self) -> Election:
        """The nonmanipulators as an election."""
        succinct = any(b.multiplicity > 1 for b in self.nonmanipulators)
        mode = InputMode.SUCCINCT if succinct else InputMode.STANDARD
        return Election(self.candidates, self.nonmanipulators, mode)


@dataclass(frozen=True)
class ManipulationCertificate:
    """One ranking per manipulator, in manipulator order, all single-peaked on `axis`."""
    ballots: Tuple[Ranking, ...]
    axis: Tuple[str, ...]


def apply_manipulation_certificate(inst: ManipulationInstance, cert: ManipulationCertificate) -> Election:
    """S together with the coalition's ballots, each carrying its manipulator's weight."""
    if len(cert.ballots) != len(inst.manipulator_weights):
        raise ElectionError(
            f"Certificate has {len(cert.ballots)} ballots for {len(inst.manipulator_weights)} manipulators")
    if not is_axis(inst.candidates, cert.axis):
        raise InvalidAxisError()
    pos = {c: i for i, c in enumerate(cert.axis)}
    election = inst.election()
    if not linear_consistent(election, cert.axis):
        raise InvalidAxisError()
    extra = []
    for ranking, weight in zip(cert.ballots, inst.manipulator_weights):
        if not ranking_fits(ranking, pos):
            raise InvalidAxisError(f"Invalid societal linear order: ballot {'>'.join(ranking)} is not single-peaked")
        extra.append(LinearBallot(ranking, weight))
    return Election(inst.candidates, election.ballots + tuple(extra), election.input_mode)


def coalition_wins(inst: ManipulationInstance, rankings, axis) -> bool:
    e = apply_manipulation_certificate(inst, ManipulationCertificate(tuple(rankings), tuple(axis)))
    return inst.distinguished in winners(e, inst.rule, inst.model)


def candidate_axes(inst: ManipulationInstance, config=None) -> List[Tuple[str, ...]]:
    """
    Axes a solver has to consider.

    The given axis when there is one. Otherwise every order the nonmanipulators
    respect, one per reversal pair, in permutation order of the candidate list.
    """
    if inst.axis is not None:
        return [inst.axis]
    cap = get_setting(config, 'oracles', 'max_axis_candidates')
    if inst.m > cap:
        raise ResourceLimitError(f"Axis-free manipulation needs m <= {cap}, got {inst.m}; give an AXIS")
    index = {c: i for i, c in enumerate(inst.candidates)}
    election = inst.election()
    axes = []
    for perm in itertools.permutations(inst.candidates):
        if [index[c] for c in perm] > [index[c] for c in reversed(perm)]:
            continue
        if linear_consistent(election, perm):
            axes.append(perm)
    if not axes:
        raise NotSinglePeakedError("Nonmanipulators are not single-peaked on any axis")
    return axes


def _p_first(axis, p) -> Ranking:
    return peak_outward_ballot(axis, list(axis).index(p))


def _solve_over_axes(inst, config, propose: Callable[[Tuple[str, ...]], Optional[Sequence[Ranking]]],
                     name: str) -> Optional[ManipulationCertificate]:
    for axis in candidate_axes(inst, config):
        ballots = propose(axis)
        if ballots is None:
            logger.debug(f"{name}: no proposal on axis {list(axis)}")
            continue
        if coalition_wins(inst, ballots, axis):
            return ManipulationCertificate(tuple(tuple(b) for b in ballots), tuple(axis))
        logger.debug(f"{name}: proposal fails on axis {list(axis)}")
    return None


def _loses_point(inst, c, k0):
    # does c sit in the bottom k0 of some positive-weight nonmanipulator?
    return any(b.total > 0 and c in b.ranking[len(b.ranking) - k0:] for b in inst.nonmanipulators)


def _normalized(inst):
    return inst.rule.normalized().alpha


# ---------------------------------------------------------------------------
# Closed-form cases
# ---------------------------------------------------------------------------

def solve_plurality_like(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """Normalized vector (t, 0, ..., 0): every manipulator ranks p first."""
    alpha = _normalized(inst)
    if any(alpha[1:]):
        raise ElectionError(f"solve_plurality_like needs a plurality-shaped vector, got {inst.rule}")
    p = inst.distinguished
    return _solve_over_axes(
        inst, config, lambda axis: [_p_first(axis, p)] * len(inst.manipulator_weights), 'plurality')


def end_candidate_shortcut(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """
    p sits at an end of the axis: the only ballot ranking p first is the axis read
    outward from p, and it is never worse than any other ballot, for any scoring
    protocol.
    """
    if inst.axis is None:
        raise ElectionError("end_candidate_shortcut needs an axis")
    if inst.distinguished not in (inst.axis[0], inst.axis[-1]):
        raise ElectionError(f"Candidate {inst.distinguished!r} is not at an end of the axis")
    p = inst.distinguished
    return _solve_over_axes(
        inst, config, lambda axis: [_p_first(axis, p)] * len(inst.manipulator_weights), 'end-candidate')


def solve_borda3(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """
    Three-candidate Borda.

    With p in the middle of a L p L b, every manipulator ranks p first and the
    weaker of a, b (by S score) second. With p at an end the p-first ballot is
    forced.
    """
    alpha = _normalized(inst)
    if inst.m != 3 or not (alpha[1] > 0 and alpha[0] == 2 * alpha[1]):
        raise ElectionError(f"solve_borda3 needs 3 candidates and vector (2,1,0), got {inst.rule}")
    p = inst.distinguished
    scores = scoring_scores(inst.election(), inst.rule)

    def propose(axis):
        n = len(inst.manipulator_weights)
        if axis[1] != p:
            return [_p_first(axis, p)] * n
        a, _, b = axis
        stronger, weaker = (a, b) if scores[a] >= scores[b] else (b, a)
        return [(p, weaker, stronger)] * n

    return _solve_over_axes(inst, config, propose, 'borda3')


def solve_ones_majority(inst: ManipulationInstance, k1: int, k0: int,
                        config=None) -> Optional[ManipulationCertificate]:
    """
    The closed-form rule for (1^k1, 0^k0) with k1 > k0.

    p can win only if no nonmanipulator puts p in its bottom k0; then p-first
    ballots make p a winner. For a unique win every candidate tied with p has
    to be pushed into some manipulator's bottom k0 while p stays out of it; the
    bottom k0 of a single-peaked ballot is an axis prefix plus an axis suffix,
    and at most two such ballots are ever needed.

    The shape is taken as given, so on a vector with k1 <= k0 this reports what
    the rule would decide, not whether p can win.
    """
    p = inst.distinguished
    weights = inst.manipulator_weights
    unique = inst.model == WinnerModel.UNIQUE

    if _loses_point(inst, p, k0):
        logger.info(f"{p} loses a point in S; cannot win")
        return None

    movers = [i for i, w in enumerate(weights) if w > 0]
    s_total = sum(b.total for b in inst.nonmanipulators)
    scores = scoring_scores(inst.election(), inst.rule.normalized())
    top = inst.rule.normalized().alpha[0]
    tied = {c for c in inst.candidates if c != p and scores[c] == top * s_total}

    def propose(axis):
        at = axis.index(p)
        ballots = [_p_first(axis, p)] * len(weights)
        if not unique or not tied:
            return ballots
        m = len(axis)
        # prefix axis[:i] plus suffix axis[m-(k0-i):] is a bottom set avoiding p
        options = [i for i in range(k0 + 1) if i <= at < m - (k0 - i)]

        def covered(i):
            return set(axis[:i]) | set(axis[m - (k0 - i):])

        cover = None
        for size in (1, 2):
            for chosen in itertools.combinations(options, size):
                if tied <= set().union(*(covered(i) for i in chosen)):
                    cover = chosen
                    break
            if cover is not None:
                break
        if cover is None or len(cover) > len(movers):
            return None
        for voter, i in zip(movers, cover):
            ballots[voter] = peak_outward_ballot(axis, at, i, i + k1 - 1)
        return ballots

    return _solve_over_axes(inst, config, propose, 'ones-zeros')


def solve_ones_zeros(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """
    Vectors (1^k1, 0^k0) with k1 >= k0.

    k1 > k0 goes to solve_ones_majority.

    k1 = k0 = k: orient the axis so at least k candidates precede p. Every
    manipulator ranks the axis right to left. For a unique win with p's right
    neighbour tied in S, the lightest manipulator instead ranks p and then the
    left candidates first, which drops every candidate right of p.
    """
    shape = inst.rule.ones_zeros_shape()
    if shape is None or shape[0] < shape[1]:
        raise ElectionError(f"solve_ones_zeros needs a vector (1^k1, 0^k0) with k1 >= k0, got {inst.rule}")
    k1, k0 = shape
    if k1 > k0:
        return solve_ones_majority(inst, k1, k0, config)

    p = inst.distinguished
    weights = inst.manipulator_weights
    unique = inst.model == WinnerModel.UNIQUE
    movers = [i for i, w in enumerate(weights) if w > 0]
    k = k1
    scores = scoring_scores(inst.election(), inst.rule)

    def propose_even(axis):
        oriented = tuple(axis) if axis.index(p) >= k else tuple(axis)[::-1]
        at = oriented.index(p)
        ballots = [oriented[::-1]] * len(weights)
        if unique and movers and at + 1 < len(oriented) and scores[oriented[at + 1]] == scores[p]:
            lightest = min(movers, key=lambda i: (weights[i], i))
            ballots[lightest] = (p,) + oriented[at - 1::-1] + oriented[at + 1:]
        return ballots

    return _solve_over_axes(inst, config, propose_even, 'ones-zeros-even')


def solve_veto(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """
    Veto with any number of candidates.

    Two candidates is plurality and goes to solve_ones_zeros. From three on, p
    can win iff no nonmanipulator ranks p last. A unique winner needs m <= 3,
    because at most two candidates are ever ranked last.
    """
    if inst.m >= 2 and inst.rule.ones_zeros_shape() != (inst.m - 1, 1):
        raise ElectionError(f"solve_veto needs a veto vector, got {inst.rule}")
    p = inst.distinguished
    if inst.m == 1:
        return _solve_over_axes(inst, config, lambda axis: [(p,)] * len(inst.manipulator_weights), 'veto')
    if inst.m == 2:
        return solve_ones_zeros(inst, config)
    if inst.model == WinnerModel.UNIQUE:
        if inst.m == 3:
            return solve_ones_zeros(inst, config)
        logger.info("Unique winners are impossible under veto with more than three candidates")
        return None
    if _loses_point(inst, p, 1):
        logger.info(f"{p} is ranked last in S")
        return None
    return _solve_over_axes(
        inst, config, lambda axis: [_p_first(axis, p)] * len(inst.manipulator_weights), 'veto')


def solve_3veto(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """
    3-veto, (1^(m-3), 0^3).

    m = 3 ties everyone, m = 4 is plurality, m = 5 needs the exact solver and
    m >= 6 is a ones/zeros vector with k1 >= k0.
    """
    m = inst.m
    if m < 3:
        raise ElectionError("3-veto needs at least three candidates")
    alpha = _normalized(inst)
    if m == 3 and any(alpha):
        raise ElectionError(f"solve_3veto needs a 3-veto vector, got {inst.rule}")
    if m > 3 and inst.rule.ones_zeros_shape() != (m - 3, 3):
        raise ElectionError(f"solve_3veto needs a 3-veto vector, got {inst.rule}")
    p = inst.distinguished
    if m == 3:
        return _solve_over_axes(
            inst, config, lambda axis: [_p_first(axis, p)] * len(inst.manipulator_weights), '3veto')
    if m == 4:
        return solve_plurality_like(inst, config)
    if m == 5:
        return exact_ccwm(inst, config)
    return solve_ones_zeros(inst, config)


def solve_dichotomy3(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """
    Three candidates, any scoring vector, normalized to (A, B, 0).

    A > 2B > 0 is the hard side and goes to exact_ccwm. Everything else has a
    direct answer: B = 0 is plurality, A = B is (1, 1, 0), and otherwise every
    manipulator ranks p first and picks the second place by the S scores.
    """
    if inst.m != 3:
        raise ElectionError(f"solve_dichotomy3 needs 3 candidates, got {inst.m}")
    big, small, _ = _normalized(inst)
    p = inst.distinguished
    n = len(inst.manipulator_weights)
    if big > 2 * small > 0:
        logger.info(f"Vector ({big},{small},0) is on the hard side; running the exact solver")
        return exact_ccwm(inst, config)
    if big == 0 or small == 0:
        return _solve_over_axes(inst, config, lambda axis: [_p_first(axis, p)] * n, 'dichotomy-plurality')
    if big == small:
        return solve_ones_zeros(inst, config)

    scores = scoring_scores(inst.election(), inst.rule)

    def propose(axis):
        if axis[1] != p:
            return [_p_first(axis, p)] * n
        a, _, b = axis
        if inst.model == WinnerModel.NONUNIQUE:
            second = a if scores[p] >= scores[a] else b
        else:
            second = b if scores[a] >= scores[b] else a
        third = b if second == a else a
        return [(p, second, third)] * n

    return _solve_over_axes(inst, config, propose, 'dichotomy')


# ---------------------------------------------------------------------------
# Exact solver
# ---------------------------------------------------------------------------

def _pareto_front(states):
    """Keep the states no other state beats in every coordinate (smaller is better)."""
    if len(states) <= 1:
        return states
    arr = np.array(states, dtype=np.int64)
    keep = []
    for row in range(len(arr)):
        no_worse = np.all(arr <= arr[row], axis=1)
        better = np.any(arr < arr[row], axis=1)
        if not np.any(no_worse & better):
            keep.append(states[row])
    return keep


def _exact_on_axis(inst, axis, max_states) -> Optional[List[Ranking]]:
    p = inst.distinguished
    rivals = [c for c in inst.candidates if c != p]
    alpha = inst.rule.alpha
    types = enumerate_sp_linear_ballots(inst.candidates, axis)
    deltas = []
    for ranking in types:
        at = {c: i for i, c in enumerate(ranking)}
        deltas.append(tuple(alpha[at[c]] - alpha[at[p]] for c in rivals))

    base = scoring_scores(inst.election(), inst.rule)
    gap = [base[c] - base[p] for c in rivals]
    unique = inst.model == WinnerModel.UNIQUE

    start = tuple(0 for _ in rivals)
    layers = []
    frontier = [start]
    for weight in inst.manipulator_weights:
        back = {}
        for state in frontier:
            for t, delta in enumerate(deltas):
                nxt = tuple(s + weight * d for s, d in zip(state, delta))
                if nxt not in back:
                    back[nxt] = (state, t)
        frontier = _pareto_front(list(back))
        if len(frontier) > max_states:
            raise ResourceLimitError(
                f"Exact manipulation reached {len(frontier)} states, limit is {max_states}")
        layers.append(back)
        logger.debug(f"Weight {weight}: {len(frontier)} states on the frontier")

    for state in frontier:
        if all((g + s < 0) if unique else (g + s <= 0) for g, s in zip(gap, state)):
            chosen = []
            for back in reversed(layers):
                state, t = back[state]
                chosen.append(types[t])
            return chosen[::-1]
    return None


def exact_ccwm(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """
    Exact CCWM by dynamic programming over the coalition's score margins.

    A state records, for every rival c, the points the manipulators placed so
    far gave c minus the points they gave p. One layer per manipulator applies
    each of the 2^(m-1) single-peaked ballots; states beaten in every
    coordinate by another state are dropped.

    Parameters:
    -----------
    inst : ManipulationInstance
        Any scoring protocol
    config : dict, optional
        Uses manipulation.max_states and oracles.max_axis_candidates

    Returns:
    --------
    ManipulationCertificate or None
    """
    max_states = get_setting(config, 'manipulation', 'max_states')
    return _solve_over_axes(inst, config, lambda axis: _exact_on_axis(inst, axis, max_states), 'exact')


def solve_ccwm(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """Pick the solver for the instance's vector and candidate count."""
    m = inst.m
    shape = inst.rule.ones_zeros_shape()
    p = inst.distinguished
    if m == 3:
        branch, solver = 'dichotomy3', solve_dichotomy3
    elif m >= 4 and shape == (m - 3, 3):
        branch, solver = '3veto', solve_3veto
    elif m >= 2 and shape == (m - 1, 1):
        branch, solver = 'veto', solve_veto
    elif shape is not None and shape[0] >= shape[1]:
        branch, solver = 'ones-zeros', solve_ones_zeros
    elif m >= 2 and shape == (1, m - 1):
        branch, solver = 'plurality', solve_plurality_like
    elif inst.axis is not None and p in (inst.axis[0], inst.axis[-1]):
        branch, solver = 'end-candidate', end_candidate_shortcut
    else:
        branch, solver = 'exact', exact_ccwm
    logger.info(f"Manipulation with {inst.rule} on {m} candidates: {branch} branch")
    return solver(inst, config)
