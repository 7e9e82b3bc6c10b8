"""
Candidate control for plurality elections on a single-peaked axis.

Covers constructive and destructive control by adding candidates (limited and
unlimited) and by deleting candidates. Everything rests on one fact: with
single-peaked voters a candidate's plurality score depends only on its two axis
neighbours among the candidates still running.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

from libs.core_model import (
    Election, LinearBallot, ScoringVector, WinnerModel, plurality_scores, restrict, winners,
)
from libs.exceptions import ElectionError, InvalidAxisError, NotSinglePeakedError
from libs.single_peaked import find_axis_linear, is_axis, linear_consistent

logger = logging.getLogger(__name__)


class CandidateAction(str, Enum):
    ADD = "add-candidates"
    UNLIMITED_ADD = "unlimited-add-candidates"
    DELETE = "delete-candidates"


@dataclass(frozen=True)
class CandidateControlInstance:
    election: Election
    registered: Tuple[str, ...]
    distinguished: str
    budget: Optional[int] = None
    spoilers: Tuple[str, ...] = ()
    model: WinnerModel = WinnerModel.UNIQUE
    action: CandidateAction = CandidateAction.ADD
    constructive: bool = True
    axis: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'registered', tuple(self.registered))
        object.__setattr__(self, 'spoilers', tuple(self.spoilers))
        object.__setattr__(self, 'model', WinnerModel(self.model))
        object.__setattr__(self, 'action', CandidateAction(self.action))
        if self.axis is not None:
            object.__setattr__(self, 'axis', tuple(self.axis))
        if self.election.kind == 'approval':
            raise ElectionError("Candidate control is defined here for linear ballots only")
        if set(self.registered) & set(self.spoilers):
            raise ElectionError("Registered and spoiler candidates must be disjoint")
        if set(self.registered) | set(self.spoilers) != set(self.election.candidates):
            raise ElectionError("Ballots must rank exactly the registered and spoiler candidates")
        if self.distinguished not in self.registered:
            raise ElectionError(f"Candidate {self.distinguished!r} must be registered")
        if self.action == CandidateAction.DELETE and self.spoilers:
            raise ElectionError("Deleting candidates takes no spoiler candidates")
        if self.action != CandidateAction.UNLIMITED_ADD:
            if not isinstance(self.budget, int) or self.budget < 0:
                raise ElectionError(f"Budget must be a non-negative integer, got {self.budget!r}")

    @property
    def limit(self):
        if self.action == CandidateAction.UNLIMITED_ADD:
            return len(self.spoilers)
        return self.budget


@dataclass(frozen=True)
class CandidateCertificate:
    action: CandidateAction
    candidates: Tuple[str, ...] = ()


class Demotion(NamedTuple):
    size: float
    spoilers: Optional[Tuple[str, ...]]


def resolve_axis(inst: CandidateControlInstance):
    e = inst.election
    if inst.axis is not None:
        if not is_axis(e.candidates, inst.axis) or not linear_consistent(e, inst.axis):
            raise InvalidAxisError()
        return inst.axis
    axis = find_axis_linear(e)
    if axis is None:
        raise NotSinglePeakedError("Voters are not single-peaked on any axis")
    logger.info(f"Discovered axis {list(axis)}")
    return axis


def running_election(inst: CandidateControlInstance, running) -> Election:
    return restrict(inst.election, running)


def goal_reached(inst: CandidateControlInstance, running) -> bool:
    e = running_election(inst, running)
    won = inst.distinguished in winners(e, ScoringVector.plurality(e.m), inst.model)
    return won if inst.constructive else not won


def local_score(e: Election, c, axis) -> int:
    """
    Plurality score of `c` computed from c and its (at most two) axis neighbours.

    Equals c's score in the full election whenever the voters are single-peaked
    on `axis`.
    """
    order = [x for x in axis if x in set(e.candidates)]
    at = order.index(c)
    keep = order[max(at - 1, 0):at + 2]
    return plurality_scores(restrict(e, keep))[c]


def neighborhood(axis, c) -> List[frozenset]:
    """
    The family D(C, c): c's nearest i left and j right axis neighbours, all i, j.

    Ordered by (i, j); it has (m'+1)(m''+1) members where m' and m'' count the
    candidates left and right of c.
    """
    axis = list(axis)
    at = axis.index(c)
    lefts = axis[:at][::-1]
    rights = axis[at + 1:]
    return [frozenset(lefts[:i]) | frozenset(rights[:j])
            for i in range(len(lefts) + 1) for j in range(len(rights) + 1)]


def _fresh_ids(taken, count):
    taken = set(taken)
    ids = []
    n = 0
    while len(ids) < count:
        candidate = f"_dummy{n}"
        if candidate not in taken:
            ids.append(candidate)
        n += 1
    return ids


def _pad(e: Election, axis, left=(), right=()):
    """
    Add dummy candidates at the axis ends; every voter ranks them last.

    `left` and `right` list dummies from the inside out, and ballots append them
    in that order, so the padded profile stays single-peaked.
    """
    order = list(reversed(left)) + list(axis) + list(right)
    tail = _interleave(left, right)
    ballots = tuple(LinearBallot(b.ranking + tail, b.weight, b.multiplicity) for b in e.ballots)
    padded = Election(tuple(e.candidates) + tuple(left) + tuple(right), ballots, e.input_mode)
    return padded, tuple(order)


def _interleave(left, right):
    out = []
    for a, b in itertools.zip_longest(left, right):
        out.extend(x for x in (a, b) if x is not None)
    return tuple(out)


class _TripleScores:
    """Memoized plurality score of order[j] among order[i], order[j], order[k]."""

    def __init__(self, e: Election, order):
        self.order = order
        self.m = len(order)
        self.ranks = [({c: r for r, c in enumerate(b.ranking)}, b.total) for b in e.ballots]
        self.memo = {}

    def __call__(self, i, j, k):
        key = (i, j, k)
        if key not in self.memo:
            target = self.order[j]
            rivals = [self.order[x] for x in (i, k) if 0 <= x < self.m]
            self.memo[key] = sum(
                total for rank, total in self.ranks
                if all(rank[target] < rank[r] for r in rivals))
        return self.memo[key]


def demote_by_adding_candidates(e: Election, axis, b, registered) -> Demotion:
    """
    Smallest set of spoilers whose addition caps every running score at `b`.

    The election ranks registered and spoiler candidates; `registered` always
    run. Positions are taken along the axis, with two dummies padded on the left
    so the leftmost candidate is registered. f(i, j) is the fewest spoilers
    among positions up to j such that i and j run consecutively and every
    running candidate up to i scores at most b. Each candidate's score is read
    off the triple it forms with its running neighbours.

    Parameters:
    -----------
    e : Election
        Single-peaked election over registered and spoiler candidates
    axis : sequence of str
        Axis over e.candidates
    b : int
        Score cap
    registered : iterable of str
        Candidates that run no matter what

    Returns:
    --------
    Demotion : (size, spoilers) with size = math.inf and spoilers None when
        no spoiler set works
    """
    registered = set(registered)
    if not registered:
        return Demotion(0, ())
    axis = [c for c in axis if c in set(e.candidates)]
    dummies = _fresh_ids(e.candidates, 2)
    padded, order = _pad(e, axis, left=dummies)
    running = registered | set(dummies)
    spoiler = [c not in running for c in order]
    m = len(order)
    s = _TripleScores(padded, order)

    reg_prefix = [0]
    for c in order:
        reg_prefix.append(reg_prefix[-1] + (0 if c not in running else 1))

    def blocked(i, k):
        # a registered candidate strictly between i and k
        return reg_prefix[k] - reg_prefix[i + 1] > 0

    f: Dict[Tuple[int, int], Tuple[float, Optional[int]]] = {}
    for j in range(1, m):
        if blocked(0, j) or s(-1, 0, j) > b:
            f[(0, j)] = (math.inf, None)
        else:
            f[(0, j)] = (int(spoiler[j]), None)

    for j in range(1, m):
        for k in range(j + 1, m):
            if blocked(j, k):
                f[(j, k)] = (math.inf, None)
                continue
            best, back = math.inf, None
            for i in range(j):
                value = f[(i, j)][0]
                if value == math.inf or s(i, j, k) > b:
                    continue
                if value + spoiler[k] < best:
                    best, back = value + spoiler[k], i
            f[(j, k)] = (best, back)

    best, last = math.inf, None
    for j in range(1, m):
        if not all(spoiler[t] for t in range(j + 1, m)):
            continue
        for i in range(j):
            value = f[(i, j)][0]
            if value < best and s(i, j, m) <= b:
                best, last = value, (i, j)

    if last is None:
        return Demotion(math.inf, None)

    chain = [last[1], last[0]]
    pair = last
    while f[pair][1] is not None:
        h = f[pair][1]
        chain.append(h)
        pair = (h, pair[0])
    chosen = tuple(order[t] for t in sorted(chain) if spoiler[t])
    return Demotion(best, chosen)


def solve_ccac_plurality(inst: CandidateControlInstance) -> Optional[CandidateCertificate]:
    """
    Constructive control by adding candidates under plurality.

    Every pair (d_l, d_r) that can end up as p's running neighbours fixes p's
    score. Each side must then be capped below it (or at it, for NonUnique)
    using as few spoilers as possible, which is demote_by_adding_candidates on
    the voters whose favourite lies on that side.

    Returns:
    --------
    CandidateCertificate or None : spoilers to add, None if impossible
    """
    if inst.action not in (CandidateAction.ADD, CandidateAction.UNLIMITED_ADD) or not inst.constructive:
        raise ElectionError("solve_ccac_plurality needs a constructive adding-candidates instance")
    axis = resolve_axis(inst)
    p = inst.distinguished
    k = inst.limit
    if goal_reached(inst, inst.registered):
        return CandidateCertificate(inst.action, ())

    left_dummy, right_dummy = _fresh_ids(inst.election.candidates, 2)
    padded, order = _pad(inst.election, axis, left=[left_dummy], right=[right_dummy])
    running = set(inst.registered) | {left_dummy, right_dummy}
    spoilers = set(inst.spoilers)
    at = order.index(p)

    lefts = []
    for i in range(at - 1, -1, -1):
        lefts.append(i)
        if order[i] in running:
            break
    rights = []
    for i in range(at + 1, len(order)):
        rights.append(i)
        if order[i] in running:
            break

    pos = {c: i for i, c in enumerate(order)}
    for l in lefts:
        for r in rights:
            dl, dr = order[l], order[r]
            triple = plurality_scores(restrict(padded, [dl, p, dr]))[p]
            cap = triple - 1 if inst.model == WinnerModel.UNIQUE else triple
            visible = list(order[:l + 1]) + [p] + list(order[r:])
            seen = restrict(padded, visible)

            sides = []
            for part, keep in ((order[:l + 1], lambda q: q <= l), (order[r:], lambda q: q >= r)):
                voters = [b for b in seen.ballots if keep(pos[b.ranking[0]])]
                sub = restrict(seen.with_ballots(voters), part)
                forced = {c for c in part if c in running} | {dl if keep(l) else dr}
                sides.append(demote_by_adding_candidates(sub, part, cap, forced))

            ends = [c for c in (dl, dr) if c in spoilers]
            total = sides[0].size + sides[1].size + len(ends)
            logger.debug(f"Neighbours ({dl}, {dr}): cap {cap}, cost {total}")
            if total <= k:
                added = set(sides[0].spoilers) | set(sides[1].spoilers) | set(ends)
                chosen = tuple(c for c in axis if c in added)
                logger.info(f"Accepted neighbours ({dl}, {dr}) adding {list(chosen)}")
                return CandidateCertificate(inst.action, chosen)
    return None


def solve_ccuac_plurality(inst: CandidateControlInstance) -> Optional[CandidateCertificate]:
    if inst.action != CandidateAction.UNLIMITED_ADD:
        raise ElectionError("solve_ccuac_plurality needs an unlimited adding-candidates instance")
    return solve_ccac_plurality(inst)


def solve_dcac_plurality(inst: CandidateControlInstance) -> Optional[CandidateCertificate]:
    """
    Destructive control by adding candidates: at most three spoilers are ever needed.

    Subsets of the spoilers are tried by size, then in spoiler-list order.
    """
    if inst.action not in (CandidateAction.ADD, CandidateAction.UNLIMITED_ADD) or inst.constructive:
        raise ElectionError("solve_dcac_plurality needs a destructive adding-candidates instance")
    resolve_axis(inst)
    limit = min(3, inst.limit)
    for size in range(limit + 1):
        for extra in itertools.combinations(inst.spoilers, size):
            if goal_reached(inst, inst.registered + extra):
                return CandidateCertificate(inst.action, extra)
    return None


def solve_dcuac_plurality(inst: CandidateControlInstance) -> Optional[CandidateCertificate]:
    if inst.action != CandidateAction.UNLIMITED_ADD:
        raise ElectionError("solve_dcuac_plurality needs an unlimited adding-candidates instance")
    return solve_dcac_plurality(inst)


def solve_ccdc_plurality(inst: CandidateControlInstance) -> Optional[CandidateCertificate]:
    """
    Constructive control by deleting candidates.

    Each neighbourhood of p fixes p's score; from there every candidate still
    blocking p has to go as well. Accept the first neighbourhood whose closure
    fits in the budget.
    """
    if inst.action != CandidateAction.DELETE or not inst.constructive:
        raise ElectionError("solve_ccdc_plurality needs a constructive deleting-candidates instance")
    axis = resolve_axis(inst)
    p = inst.distinguished
    unique = inst.model == WinnerModel.UNIQUE
    family = sorted(neighborhood(axis, p), key=len)
    for start in family:
        if len(start) > inst.budget:
            break
        deleted = set(start)
        while len(deleted) <= inst.budget:
            running = [c for c in axis if c not in deleted]
            scores = plurality_scores(restrict(inst.election, running))
            blockers = [c for c in running if c != p
                        and (scores[c] >= scores[p] if unique else scores[c] > scores[p])]
            if not blockers:
                chosen = tuple(c for c in axis if c in deleted)
                logger.info(f"Deleting {list(chosen)}")
                return CandidateCertificate(inst.action, chosen)
            deleted.add(blockers[0])
    return None


def solve_dcdc_plurality(inst: CandidateControlInstance) -> Optional[CandidateCertificate]:
    """
    Destructive control by deleting candidates.

    Some other candidate c has to reach d's score (Unique) or pass it
    (NonUnique); deleting one of c's neighbourhoods is the cheapest way to
    raise c, and extra deletions only help d.
    """
    if inst.action != CandidateAction.DELETE or inst.constructive:
        raise ElectionError("solve_dcdc_plurality needs a destructive deleting-candidates instance")
    axis = resolve_axis(inst)
    d = inst.distinguished
    if goal_reached(inst, inst.registered):
        return CandidateCertificate(inst.action, ())
    unique = inst.model == WinnerModel.UNIQUE
    for c in axis:
        if c == d:
            continue
        for gone in neighborhood(axis, c):
            if d in gone or len(gone) > inst.budget:
                continue
            running = [x for x in axis if x not in gone]
            scores = plurality_scores(restrict(inst.election, running))
            if scores[c] >= scores[d] if unique else scores[c] > scores[d]:
                return CandidateCertificate(inst.action, tuple(x for x in axis if x in gone))
    return None


def solve_candidate_control(inst: CandidateControlInstance) -> Optional[CandidateCertificate]:
    if inst.action == CandidateAction.DELETE:
        return solve_ccdc_plurality(inst) if inst.constructive else solve_dcdc_plurality(inst)
    return solve_ccac_plurality(inst) if inst.constructive else solve_dcac_plurality(inst)


def apply_candidate_certificate(inst: CandidateControlInstance, cert: CandidateCertificate) -> Election:
    """Election restricted to the candidates running after the certified action."""
    chosen = set(cert.candidates)
    if len(chosen) > inst.limit:
        raise ElectionError(f"Certificate uses {len(chosen)} candidates, limit is {inst.limit}")
    if cert.action == CandidateAction.DELETE:
        if not chosen <= set(inst.registered) or inst.distinguished in chosen:
            raise ElectionError("Deleted candidates must be registered and exclude the distinguished one")
        running = [c for c in inst.registered if c not in chosen]
    else:
        if not chosen <= set(inst.spoilers):
            raise ElectionError("Added candidates must be spoilers")
        running = list(inst.registered) + [c for c in inst.spoilers if c in chosen]
    return running_election(inst, running)
