"""
Election data model and winner determination.

Ballots are either linear orders or approval sets. Both carry a weight (used by
manipulation) and a multiplicity (succinct input). Scores are plain dicts
ordered by the election's candidate list.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Optional, Tuple, Union

from libs.exceptions import ElectionError

APPROVAL = "approval"

ScoreTable = Dict[str, int]


class WinnerModel(str, Enum):
    UNIQUE = "unique"
    NONUNIQUE = "nonunique"


class InputMode(str, Enum):
    STANDARD = "standard"
    SUCCINCT = "succinct"


@dataclass(frozen=True)
class LinearBallot:
    ranking: Tuple[str, ...]
    weight: int = 1
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'ranking', tuple(self.ranking))
        if len(set(self.ranking)) != len(self.ranking):
            raise ElectionError(f"Ranking repeats a candidate: {'>'.join(self.ranking)}")
        _check_counts(self.weight, self.multiplicity)

    @property
    def total(self):
        return self.weight * self.multiplicity

    def top_among(self, keep):
        """Most preferred candidate of `keep`, or None when nothing is kept."""
        return next((c for c in self.ranking if c in keep), None)

    def __str__(self):
        return '>'.join(self.ranking)


@dataclass(frozen=True)
class ApprovalBallot:
    approved: FrozenSet[str]
    weight: int = 1
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'approved', frozenset(self.approved))
        _check_counts(self.weight, self.multiplicity)

    @property
    def total(self):
        return self.weight * self.multiplicity

    def describe(self, order):
        return 'approve{' + ','.join(c for c in order if c in self.approved) + '}'


Ballot = Union[LinearBallot, ApprovalBallot]


def _check_counts(weight, multiplicity):
    if not isinstance(weight, int) or weight < 0:
        raise ElectionError(f"Ballot weight must be a non-negative integer, got {weight!r}")
    if not isinstance(multiplicity, int) or multiplicity < 1:
        raise ElectionError(f"Ballot multiplicity must be a positive integer, got {multiplicity!r}")


@dataclass(frozen=True)
class Election:
    candidates: Tuple[str, ...]
    ballots: Tuple[Ballot, ...] = ()
    input_mode: InputMode = InputMode.STANDARD

    def __post_init__(self):
        object.__setattr__(self, 'candidates', tuple(self.candidates))
        object.__setattr__(self, 'ballots', tuple(self.ballots))
        object.__setattr__(self, 'input_mode', InputMode(self.input_mode))
        if len(set(self.candidates)) != len(self.candidates):
            raise ElectionError(f"Candidate ids must be distinct: {list(self.candidates)}")

        kinds = {type(b) for b in self.ballots}
        if len(kinds) > 1:
            raise ElectionError("Ballots mix linear orders and approval vectors")

        pool = set(self.candidates)
        for ballot in self.ballots:
            if isinstance(ballot, LinearBallot):
                if set(ballot.ranking) != pool or len(ballot.ranking) != len(pool):
                    raise ElectionError(
                        f"Ranking {ballot} is not a permutation of {list(self.candidates)}")
            elif not ballot.approved <= pool:
                unknown = sorted(ballot.approved - pool)
                raise ElectionError(f"Approval ballot names unknown candidates {unknown}")
            if self.input_mode == InputMode.STANDARD and ballot.multiplicity != 1:
                raise ElectionError("Multiplicity above 1 requires succinct input mode")

    @property
    def kind(self):
        """'linear', 'approval', or None for an election without ballots."""
        if not self.ballots:
            return None
        return 'linear' if isinstance(self.ballots[0], LinearBallot) else APPROVAL

    @property
    def m(self):
        return len(self.candidates)

    def total_weight(self):
        return sum(b.total for b in self.ballots)

    def with_ballots(self, ballots):
        return replace(self, ballots=tuple(ballots))

    def expanded(self):
        """Standard-mode copy: every multiplicity-k ballot becomes k copies."""
        copies = []
        for ballot in self.ballots:
            copies.extend([replace(ballot, multiplicity=1)] * ballot.multiplicity)
        return Election(self.candidates, tuple(copies), InputMode.STANDARD)


@dataclass(frozen=True)
class ScoringVector:
    alpha: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'alpha', tuple(self.alpha))
        if not self.alpha:
            raise ElectionError("Scoring vector must not be empty")
        if any(not isinstance(a, int) or a < 0 for a in self.alpha):
            raise ElectionError(f"Scoring vector entries must be non-negative integers: {self.alpha}")
        if any(a < b for a, b in zip(self.alpha, self.alpha[1:])):
            raise ElectionError(f"Scoring vector must be non-increasing: {self.alpha}")

    def __len__(self):
        return len(self.alpha)

    def __str__(self):
        return 'score:' + ','.join(str(a) for a in self.alpha)

    @classmethod
    def plurality(cls, m):
        return cls((1,) + (0,) * (m - 1))

    @classmethod
    def j_veto(cls, m, j):
        if not 0 <= j <= m:
            raise ElectionError(f"{j}-veto is not defined for {m} candidates")
        return cls((1,) * (m - j) + (0,) * j)

    @classmethod
    def j_approval(cls, m, j):
        return cls.j_veto(m, m - j)

    @classmethod
    def veto(cls, m):
        return cls.j_veto(m, 1)

    @classmethod
    def borda(cls, m):
        return cls(tuple(range(m - 1, -1, -1)))

    @classmethod
    def parse(cls, text, m):
        """
        Build a vector from a CLI rule name.

        Parameters:
        -----------
        text : str
            'plurality', 'veto', 'borda' or 'score:a1,a2,...'
        m : int
            Number of candidates the vector is applied to

        Returns:
        --------
        ScoringVector
        """
        if text == 'plurality':
            return cls.plurality(m)
        if text == 'veto':
            return cls.veto(m)
        if text == 'borda':
            return cls.borda(m)
        if text.startswith('score:'):
            try:
                alpha = tuple(int(a) for a in text[len('score:'):].split(','))
            except ValueError:
                raise ElectionError(f"Scoring vector entries must be integers: {text!r}")
            vector = cls(alpha)
            if len(vector) != m:
                raise ElectionError(f"Scoring vector {text!r} has {len(vector)} entries, election has {m} candidates")
            return vector
        raise ElectionError(f"Unknown rule {text!r}")

    def normalized(self):
        """Same protocol with the last entry shifted to 0 (winner sets are unchanged)."""
        low = self.alpha[-1]
        return ScoringVector(tuple(a - low for a in self.alpha))

    def ones_zeros_shape(self) -> Optional[Tuple[int, int]]:
        """(k1, k0) when the normalized vector is (t^k1, 0^k0) with t > 0, else None."""
        alpha = self.normalized().alpha
        top = alpha[0]
        if top == 0 or any(a not in (0, top) for a in alpha):
            return None
        k1 = alpha.count(top)
        k0 = len(alpha) - k1
        return (k1, k0) if k0 > 0 else None


def approval_scores(e: Election) -> ScoreTable:
    """
    Approval score of every candidate.

    Parameters:
    -----------
    e : Election
        Election with approval ballots (or no ballots)

    Returns:
    --------
    dict : candidate id -> weighted approval count, in candidate-list order

    Example:
    --------
    >>> e = Election(('a', 'b'), (ApprovalBallot({'a'}, multiplicity=3),
    ...                           ApprovalBallot({'a', 'b'})), InputMode.SUCCINCT)
    >>> approval_scores(e)
    {'a': 4, 'b': 1}
    """
    if e.kind == 'linear':
        raise ElectionError("approval_scores needs approval ballots")
    scores = dict.fromkeys(e.candidates, 0)
    for ballot in e.ballots:
        for c in ballot.approved:
            scores[c] += ballot.total
    return scores


def scoring_scores(e: Election, alpha: ScoringVector) -> ScoreTable:
    """
    Scores under a scoring protocol: alpha[i] points for each ballot's i-th candidate.

    Parameters:
    -----------
    e : Election
        Election with linear ballots
    alpha : ScoringVector
        Vector whose length equals the number of candidates

    Returns:
    --------
    dict : candidate id -> score, in candidate-list order
    """
    if e.kind == APPROVAL:
        raise ElectionError("scoring_scores needs linear ballots")
    if len(alpha) != e.m:
        raise ElectionError(f"Scoring vector has {len(alpha)} entries, election has {e.m} candidates")
    scores = dict.fromkeys(e.candidates, 0)
    for ballot in e.ballots:
        for position, c in enumerate(ballot.ranking):
            scores[c] += ballot.total * alpha.alpha[position]
    return scores


def plurality_scores(e: Election) -> ScoreTable:
    return scoring_scores(e, ScoringVector.plurality(e.m))


def winners_from_scores(scores: ScoreTable, model: WinnerModel) -> FrozenSet[str]:
    if not scores:
        return frozenset()
    best = max(scores.values())
    top = frozenset(c for c, s in scores.items() if s == best)
    if WinnerModel(model) == WinnerModel.UNIQUE and len(top) > 1:
        return frozenset()
    return top


def winners(e: Election, rule, model: WinnerModel) -> FrozenSet[str]:
    """
    Winner set under approval or a scoring protocol.

    NonUnique returns every candidate with the maximum score. Unique returns that
    set only when it is a singleton, otherwise the empty set.
    """
    if rule == APPROVAL:
        scores = approval_scores(e)
    elif isinstance(rule, ScoringVector):
        scores = scoring_scores(e, rule)
    else:
        raise ElectionError(f"Unsupported rule {rule!r}")
    return winners_from_scores(scores, model)


def restrict(e: Election, keep: Iterable[str]) -> Election:
    """
    Restrict every linear ballot to `keep`, preserving order, weight and multiplicity.

    Parameters:
    -----------
    e : Election
        Election with linear ballots
    keep : iterable of str
        Nonempty subset of the candidates

    Returns:
    --------
    Election : the induced election; candidate order follows e.candidates
    """
    keep = set(keep)
    if not keep:
        raise ElectionError("Cannot restrict an election to an empty candidate set")
    unknown = keep - set(e.candidates)
    if unknown:
        raise ElectionError(f"Cannot keep unknown candidates {sorted(unknown)}")
    if e.kind == APPROVAL:
        raise ElectionError("restrict needs linear ballots")
    candidates = tuple(c for c in e.candidates if c in keep)
    ballots = tuple(
        replace(b, ranking=tuple(c for c in b.ranking if c in keep)) for b in e.ballots)
    return Election(candidates, ballots, e.input_mode)
