"""
Constructive voter control for approval elections on a single-peaked axis.

Adding voters (CCAV) and deleting voters (CCDV) are both solved by the same
greedy: handle the dangerous rivals right of p one at a time, nearest first,
then run the identical routine on the reversed axis for the left side.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

from libs.core_model import (
    APPROVAL, ApprovalBallot, Election, InputMode, WinnerModel,
    approval_scores, winners,
)
from libs.exceptions import ElectionError, InvalidAxisError, NotSinglePeakedError
from libs.single_peaked import approval_consistent, find_axis_approval, is_axis

logger = logging.getLogger(__name__)


class VoterAction(str, Enum):
    ADD_VOTERS = "add-voters"
    DELETE_VOTERS = "delete-voters"


@dataclass(frozen=True)
class VoterControlInstance:
    election: Election
    distinguished: str
    budget: int
    model: WinnerModel = WinnerModel.UNIQUE
    action: VoterAction = VoterAction.ADD_VOTERS
    pool: Optional[Tuple[ApprovalBallot, ...]] = None
    axis: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'model', WinnerModel(self.model))
        object.__setattr__(self, 'action', VoterAction(self.action))
        if self.election.kind == 'linear':
            raise ElectionError("Voter control is defined here for approval ballots only")
        if self.distinguished not in self.election.candidates:
            raise ElectionError(f"Distinguished candidate {self.distinguished!r} is not a candidate")
        if not isinstance(self.budget, int) or self.budget < 0:
            raise ElectionError(f"Budget must be a non-negative integer, got {self.budget!r}")
        if (self.pool is not None) != (self.action == VoterAction.ADD_VOTERS):
            raise ElectionError("A pool of unregistered voters is given exactly when adding voters")
        if self.pool is not None:
            object.__setattr__(self, 'pool', tuple(self.pool))
            # validates ids, kind and multiplicities against the registered election
            if self.pool_election().kind == 'linear' or self.combined().kind == 'linear':
                raise ElectionError("Voter control is defined here for approval ballots only")
        for ballot in self.election.ballots + (self.pool or ()):
            if ballot.weight != 1:
                raise ElectionError("Voter control uses unweighted ballots (weight 1)")
        if self.axis is not None:
            object.__setattr__(self, 'axis', tuple(self.axis))

    def pool_election(self):
        return Election(self.election.candidates, self.pool or (), self.election.input_mode)

    def combined(self):
        """Registered and unregistered ballots together, for axis checks."""
        mode = InputMode.SUCCINCT if self.pool else self.election.input_mode
        return Election(self.election.candidates, self.election.ballots + (self.pool or ()), mode)


@dataclass(frozen=True)
class VoterCertificate:
    """(ballot index, count) pairs; indices refer to the pool when adding, to V when deleting."""
    action: VoterAction
    selected: Tuple[Tuple[int, int], ...] = ()

    @property
    def size(self):
        return sum(count for _, count in self.selected)


def resolve_axis(inst: VoterControlInstance):
    combined = inst.combined()
    if inst.axis is not None:
        if not is_axis(inst.election.candidates, inst.axis) or not approval_consistent(combined, inst.axis):
            raise InvalidAxisError()
        return inst.axis
    axis = find_axis_approval(combined)
    if axis is None:
        raise NotSinglePeakedError("Registered and unregistered voters are not single-peaked on any axis")
    logger.info(f"Discovered axis {list(axis)}")
    return axis


def _beats(score, target, model):
    # does `score` block `target` from winning under `model`?
    return score >= target if model == WinnerModel.UNIQUE else score > target


def _right_rivals(scores, p, axis, model):
    start = axis.index(p) + 1
    rivals = []
    for c in axis[start:]:
        if not rivals:
            if _beats(scores[c], scores[p], model):
                rivals.append(c)
        elif scores[c] > scores[rivals[-1]]:
            rivals.append(c)
    return rivals


def dangerous_rivals(e: Election, p, axis, model):
    """
    Dangerous rivals of p on each side of the axis.

    The first rival on a side is the nearest candidate whose score blocks p
    (at least p's score for Unique, more for NonUnique); every further rival is
    the next candidate outward with strictly more approvals than the last one.

    Returns:
    --------
    (left, right) : tuples ordered outward from p
    """
    if p not in e.candidates:
        raise ElectionError(f"Candidate {p!r} is not in the election")
    axis = tuple(axis)
    scores = approval_scores(e)
    model = WinnerModel(model)
    right = _right_rivals(scores, p, axis, model)
    left = _right_rivals(scores, p, axis[::-1], model)
    return tuple(left), tuple(right)


def _span(ballot, pos):
    spots = [pos[c] for c in ballot.approved]
    return min(spots), max(spots)


def _greedy(inst, axis, counts, ballots, adding):
    """
    Run the one-sided greedy on `axis` and then on its reverse.

    `counts` maps ballot index -> copies still available and is consumed in place.
    Returns the Counter of used copies, or None when the budget cannot cover a rival.
    """
    p = inst.distinguished
    model = inst.model
    scores = approval_scores(inst.election)
    budget = inst.budget
    used = Counter()
    sign = 1 if adding else -1

    for oriented in (tuple(axis), tuple(axis)[::-1]):
        pos = {c: i for i, c in enumerate(oriented)}
        while True:
            rivals = _right_rivals(scores, p, oriented, model)
            if not rivals:
                break
            r = rivals[0]
            need = scores[r] - scores[p] + (1 if model == WinnerModel.UNIQUE else 0)
            if adding:
                # every kept pool ballot approves p; those ending before r help against r
                usable = [i for i in counts if counts[i] and _span(ballots[i], pos)[1] < pos[r]]
                usable.sort(key=lambda i: (-_span(ballots[i], pos)[0], _span(ballots[i], pos)[1], i))
            else:
                usable = [i for i in counts if counts[i]
                          and pos[p] < _span(ballots[i], pos)[0] <= pos[r] <= _span(ballots[i], pos)[1]]
                usable.sort(key=lambda i: (-_span(ballots[i], pos)[1], -_span(ballots[i], pos)[0], i))
            logger.debug(f"Rival {r}: need {need}, {len(usable)} usable ballot types, budget {budget}")

            for i in usable:
                if need == 0 or budget == 0:
                    break
                take = min(counts[i], need, budget)
                counts[i] -= take
                used[i] += take
                budget -= take
                need -= take
                for c in ballots[i].approved:
                    scores[c] += sign * take
            if need > 0:
                logger.info(f"Cannot overtake rival {r} within budget {inst.budget}")
                return None
    return used


def solve_ccav_approval(inst: VoterControlInstance) -> Optional[VoterCertificate]:
    """
    Constructive control by adding voters under approval voting.

    Pool ballots that do not approve p are never useful and are dropped. For the
    nearest dangerous rival r right of p, the usable pool ballots are those whose
    right end lies in [p, r); they are added rightmost-left-end first until p
    overtakes r. Scores are then recomputed and the next rival handled; the left
    side is the same routine on the reversed axis.

    Returns:
    --------
    VoterCertificate or None : copies of pool ballots to add, None if impossible
    """
    if inst.action != VoterAction.ADD_VOTERS:
        raise ElectionError("solve_ccav_approval needs an adding-voters instance")
    axis = resolve_axis(inst)
    p = inst.distinguished
    pool = inst.pool
    empty = sum(1 for b in pool if not b.approved)
    if empty:
        logger.warning(f"Ignoring {empty} pool ballot type(s) that approve nobody")
    counts = {i: b.multiplicity for i, b in enumerate(pool) if p in b.approved}
    used = _greedy(inst, axis, counts, pool, adding=True)
    if used is None:
        return None
    return VoterCertificate(VoterAction.ADD_VOTERS, tuple(sorted(used.items())))


def solve_ccdv_approval(inst: VoterControlInstance) -> Optional[VoterCertificate]:
    """
    Constructive control by deleting voters under approval voting.

    Ballots approving p are never deleted. Against rival r right of p the
    candidates for deletion approve r but start right of p; the ones reaching
    furthest right are removed first.
    """
    if inst.action != VoterAction.DELETE_VOTERS:
        raise ElectionError("solve_ccdv_approval needs a deleting-voters instance")
    axis = resolve_axis(inst)
    p = inst.distinguished
    ballots = inst.election.ballots
    counts = {i: b.multiplicity for i, b in enumerate(ballots) if b.approved and p not in b.approved}
    used = _greedy(inst, axis, counts, ballots, adding=False)
    if used is None:
        return None
    return VoterCertificate(VoterAction.DELETE_VOTERS, tuple(sorted(used.items())))


def solve_voter_control(inst: VoterControlInstance) -> Optional[VoterCertificate]:
    if inst.action == VoterAction.ADD_VOTERS:
        return solve_ccav_approval(inst)
    return solve_ccdv_approval(inst)


def apply_voter_certificate(inst: VoterControlInstance, cert: VoterCertificate) -> Election:
    """Election after adding (or deleting) the certified ballot copies."""
    counts = dict(cert.selected)
    if cert.size > inst.budget:
        raise ElectionError(f"Certificate uses {cert.size} voters, budget is {inst.budget}")
    if cert.action == VoterAction.ADD_VOTERS:
        extra = []
        for i, count in counts.items():
            if not 0 < count <= inst.pool[i].multiplicity:
                raise ElectionError(f"Pool ballot {i} has no {count} copies")
            extra.append(replace(inst.pool[i], multiplicity=count))
        ballots = inst.election.ballots + tuple(extra)
    else:
        ballots = []
        for i, ballot in enumerate(inst.election.ballots):
            left = ballot.multiplicity - counts.get(i, 0)
            if left < 0:
                raise ElectionError(f"Ballot {i} has fewer than {counts[i]} copies")
            if left:
                ballots.append(replace(ballot, multiplicity=left))
        ballots = tuple(ballots)
    mode = InputMode.SUCCINCT if any(b.multiplicity > 1 for b in ballots) else inst.election.input_mode
    return Election(inst.election.candidates, ballots, mode)


def goal_reached(inst: VoterControlInstance, e: Election) -> bool:
    return inst.distinguished in winners(e, APPROVAL, inst.model)
