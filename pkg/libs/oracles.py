"""
Brute-force reference solvers.

Every polynomial solver is checked against these. They enumerate everything
and refuse with ResourceLimitError once the configured caps are exceeded.
"""
from __future__ import annotations

import itertools
import logging
import math
from typing import Optional, Set, Tuple

from libs.config import get_setting
from libs.control_approval import (
    VoterAction, VoterCertificate, VoterControlInstance, apply_voter_certificate,
)
from libs.control_approval import goal_reached as voter_goal_reached
from libs.control_plurality import CandidateAction, CandidateCertificate, CandidateControlInstance
from libs.control_plurality import goal_reached as candidate_goal_reached
from libs.core_model import Election
from libs.exceptions import ElectionError, ResourceLimitError
from libs.manipulation import ManipulationCertificate, ManipulationInstance, coalition_wins, candidate_axes
from libs.single_peaked import consistent, enumerate_sp_linear_ballots

logger = logging.getLogger(__name__)


def _brute_voter_control(inst: VoterControlInstance, config) -> Optional[VoterCertificate]:
    ballots = inst.pool if inst.action == VoterAction.ADD_VOTERS else inst.election.ballots
    ranges = [range(b.multiplicity + 1) for b in ballots]
    count = math.prod(len(r) for r in ranges)
    cap = get_setting(config, 'oracles', 'max_assignments')
    if count > cap:
        raise ResourceLimitError(f"Voter control oracle would try {count} count vectors, limit is {cap}")
    best = None
    for vector in itertools.product(*ranges):
        size = sum(vector)
        if size > inst.budget or (best is not None and size >= best.size):
            continue
        cert = VoterCertificate(inst.action, tuple((i, c) for i, c in enumerate(vector) if c))
        if voter_goal_reached(inst, apply_voter_certificate(inst, cert)):
            best = cert
    return best


def _brute_candidate_control(inst: CandidateControlInstance, config) -> Optional[CandidateCertificate]:
    if inst.action == CandidateAction.DELETE:
        movable = [c for c in inst.registered if c != inst.distinguished]
    else:
        movable = list(inst.spoilers)
    limit = min(inst.limit, len(movable))
    count = sum(math.comb(len(movable), size) for size in range(limit + 1))
    cap = get_setting(config, 'oracles', 'max_subsets')
    if count > cap:
        raise ResourceLimitError(f"Candidate control oracle would try {count} subsets, limit is {cap}")
    for size in range(limit + 1):
        for chosen in itertools.combinations(movable, size):
            if inst.action == CandidateAction.DELETE:
                running = [c for c in inst.registered if c not in chosen]
            else:
                running = list(inst.registered) + list(chosen)
            if candidate_goal_reached(inst, running):
                return CandidateCertificate(inst.action, chosen)
    return None


def brute_control(inst, config=None):
    """
    Exhaustive control search.

    Voter control tries every vector of per-ballot copy counts within the
    budget and returns a smallest successful one. Candidate control tries
    subsets by size, then in list order.

    Parameters:
    -----------
    inst : VoterControlInstance or CandidateControlInstance
    config : dict, optional
        Uses oracles.max_assignments and oracles.max_subsets

    Returns:
    --------
    VoterCertificate, CandidateCertificate or None
    """
    if isinstance(inst, VoterControlInstance):
        return _brute_voter_control(inst, config)
    if isinstance(inst, CandidateControlInstance):
        return _brute_candidate_control(inst, config)
    raise ElectionError(f"brute_control got {type(inst).__name__}")


def brute_manipulation(inst: ManipulationInstance, config=None) -> Optional[ManipulationCertificate]:
    """Try every assignment of single-peaked ballots to the manipulators, axis by axis."""
    cap = get_setting(config, 'oracles', 'max_assignments')
    n = len(inst.manipulator_weights)
    for axis in candidate_axes(inst, config):
        types = enumerate_sp_linear_ballots(inst.candidates, axis)
        count = len(types) ** n
        if count > cap:
            raise ResourceLimitError(f"Manipulation oracle would try {count} assignments, limit is {cap}")
        for rankings in itertools.product(types, repeat=n):
            if coalition_wins(inst, rankings, axis):
                return ManipulationCertificate(tuple(rankings), tuple(axis))
    return None


def brute_axis(e: Election, config=None) -> Set[Tuple[str, ...]]:
    """Every axis the ballots are single-peaked on."""
    cap = get_setting(config, 'oracles', 'max_axis_candidates')
    if e.m > cap:
        raise ResourceLimitError(f"Axis oracle needs m <= {cap}, got {e.m}")
    return {perm for perm in itertools.permutations(e.candidates) if consistent(e, perm)}
