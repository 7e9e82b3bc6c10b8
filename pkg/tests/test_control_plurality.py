import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from libs.control_plurality import (
    CandidateAction, CandidateCertificate, CandidateControlInstance, apply_candidate_certificate,
    demote_by_adding_candidates, goal_reached, local_score, neighborhood, solve_candidate_control,
    solve_ccac_plurality, solve_ccdc_plurality, solve_dcac_plurality, solve_dcdc_plurality,
)
from libs.core_model import ApprovalBallot, Election, LinearBallot, WinnerModel, plurality_scores, restrict
from libs.exceptions import ElectionError, InvalidAxisError, NotSinglePeakedError
from libs.oracles import brute_control
from tests.sp_strategies import candidate_control_instances, sp_linear_elections

ADD = CandidateAction.ADD
UNLIMITED = CandidateAction.UNLIMITED_ADD
DELETE = CandidateAction.DELETE
UNIQUE = WinnerModel.UNIQUE
NONUNIQUE = WinnerModel.NONUNIQUE


def linear(candidates, *rankings):
    return Election(candidates, tuple(LinearBallot(tuple(r.split('>'))) for r in rankings))


def test_local_score_matches_the_full_election():
    e = linear(('a', 'b', 'c', 'd'), 'a>b>c>d', 'b>a>c>d', 'd>c>b>a')
    axis = ('a', 'b', 'c', 'd')
    assert local_score(e, 'b', axis) == plurality_scores(e)['b'] == 1
    assert local_score(e, 'c', axis) == 0


def test_local_score_of_a_lone_peak():
    e = linear(('a', 'b', 'c', 'd'), 'c>b>d>a')
    assert local_score(e, 'c', ('a', 'b', 'c', 'd')) == 1


def test_neighborhood_size_and_order():
    family = neighborhood(('a', 'b', 'c', 'd', 'e'), 'c')
    assert len(family) == 9
    assert family[0] == frozenset()
    assert family[1] == {'d'}
    assert family[3] == {'b'}
    assert family[-1] == {'a', 'b', 'd', 'e'}
    assert len(neighborhood(('a', 'b', 'c'), 'a')) == 3


def test_spoiler_steals_the_rivals_votes():
    # p and r tie until s splits r's voters
    e = linear(('p', 'r', 's'), 'p>r>s', 'p>r>s', 'r>s>p', 's>r>p')
    inst = CandidateControlInstance(e, ('p', 'r'), 'p', 1, ('s',), UNIQUE, ADD, True, ('p', 'r', 's'))
    assert not goal_reached(inst, ['p', 'r'])
    cert = solve_ccac_plurality(inst)
    assert cert == CandidateCertificate(ADD, ('s',))
    assert plurality_scores(apply_candidate_certificate(inst, cert)) == {'p': 2, 'r': 1, 's': 1}


def test_adding_cannot_help_against_a_majority():
    e = linear(('p', 'r', 's'), 'r>p>s', 'r>p>s', 'p>r>s')
    inst = CandidateControlInstance(e, ('p', 'r'), 'p', 1, ('s',), UNIQUE, ADD, True, ('s', 'p', 'r'))
    assert solve_ccac_plurality(inst) is None


def test_destructive_adding_needs_at_most_the_budget():
    e = linear(('d', 'a', 's'), 'd>s>a', 's>d>a', 'a>s>d')
    inst = CandidateControlInstance(e, ('d', 'a'), 'd', 1, ('s',), UNIQUE, ADD, False, ('d', 's', 'a'))
    cert = solve_dcac_plurality(inst)
    assert cert == CandidateCertificate(ADD, ('s',))
    assert plurality_scores(apply_candidate_certificate(inst, cert)) == {'d': 1, 'a': 1, 's': 1}


def test_deleting_the_vote_splitter():
    # deleting q hands q's voter to p
    e = linear(('p', 'q', 'r'), 'q>p>r', 'p>q>r', 'r>q>p')
    inst = CandidateControlInstance(e, ('p', 'q', 'r'), 'p', 1, (), UNIQUE, DELETE, True, ('p', 'q', 'r'))
    cert = solve_ccdc_plurality(inst)
    assert cert == CandidateCertificate(DELETE, ('q',))
    assert plurality_scores(apply_candidate_certificate(inst, cert)) == {'p': 2, 'r': 1}


def test_destructive_deletion_when_d_already_loses():
    e = linear(('d', 'r'), 'r>d')
    inst = CandidateControlInstance(e, ('d', 'r'), 'd', 0, (), UNIQUE, DELETE, False)
    assert solve_dcdc_plurality(inst) == CandidateCertificate(DELETE, ())


def test_destructive_deletion_raises_a_rival():
    e = linear(('d', 'a', 'b'), 'd>a>b', 'a>b>d', 'b>a>d')
    inst = CandidateControlInstance(e, ('d', 'a', 'b'), 'd', 1, (), NONUNIQUE, DELETE, False, ('d', 'a', 'b'))
    cert = solve_dcdc_plurality(inst)
    assert cert is not None
    assert 'd' not in cert.candidates
    assert goal_reached(inst, [c for c in inst.registered if c not in cert.candidates])


def test_demotion_without_spoilers_is_free_or_impossible():
    e = linear(('a', 'b'), 'a>b', 'a>b')
    assert demote_by_adding_candidates(e, ('a', 'b'), 2, ('a', 'b')).size == 0
    result = demote_by_adding_candidates(e, ('a', 'b'), 1, ('a', 'b'))
    assert result.size == math.inf and result.spoilers is None


def test_demotion_with_nobody_registered_is_empty():
    e = linear(('a', 'b'), 'a>b')
    assert demote_by_adding_candidates(e, ('a', 'b'), 0, ()) == (0, ())


def test_instance_validation():
    e = linear(('p', 'r'), 'p>r')
    with pytest.raises(ElectionError):
        CandidateControlInstance(Election(('p', 'r'), (ApprovalBallot({'p'}),)), ('p', 'r'), 'p', 1)
    with pytest.raises(ElectionError):
        CandidateControlInstance(e, ('p',), 'p', 1)
    with pytest.raises(ElectionError):
        CandidateControlInstance(e, ('p',), 'r', 1, ('r',))
    with pytest.raises(ElectionError):
        CandidateControlInstance(e, ('p',), 'p', 1, ('r',), action=DELETE)
    with pytest.raises(ElectionError):
        CandidateControlInstance(e, ('p',), 'p', None, ('r',), action=ADD)
    assert CandidateControlInstance(e, ('p',), 'p', None, ('r',), action=UNLIMITED).limit == 1


def test_wrong_solver_for_the_action():
    e = linear(('p', 'r'), 'p>r')
    deleting = CandidateControlInstance(e, ('p', 'r'), 'p', 1, (), action=DELETE)
    with pytest.raises(ElectionError):
        solve_ccac_plurality(deleting)
    with pytest.raises(ElectionError):
        solve_dcdc_plurality(deleting)


def test_given_axis_must_fit():
    e = linear(('a', 'p', 'b'), 'a>b>p')
    inst = CandidateControlInstance(e, ('a', 'p', 'b'), 'p', 1, (), action=DELETE, axis=('a', 'p', 'b'))
    with pytest.raises(InvalidAxisError, match='Invalid societal linear order'):
        solve_ccdc_plurality(inst)


def test_profile_without_axis_is_rejected():
    e = linear(('a', 'b', 'c'), 'a>b>c', 'b>c>a', 'c>a>b')
    inst = CandidateControlInstance(e, ('a', 'b', 'c'), 'a', 1, (), action=DELETE)
    with pytest.raises(NotSinglePeakedError):
        solve_candidate_control(inst)


def test_certificate_must_use_spoilers():
    e = linear(('p', 'r', 's'), 'p>r>s')
    inst = CandidateControlInstance(e, ('p', 'r'), 'p', 1, ('s',))
    with pytest.raises(ElectionError):
        apply_candidate_certificate(inst, CandidateCertificate(ADD, ('r',)))


def _fewest_spoilers(e, b, registered):
    spoilers = [c for c in e.candidates if c not in registered]
    for size in range(len(spoilers) + 1):
        for extra in itertools.combinations(spoilers, size):
            if max(plurality_scores(restrict(e, list(registered) + list(extra))).values()) <= b:
                return size
    return math.inf


def assert_fewest_spoilers(pair, data):
    e, axis = pair
    registered = data.draw(st.sets(st.sampled_from(e.candidates), min_size=1))
    b = data.draw(st.integers(0, len(e.ballots)))
    result = demote_by_adding_candidates(e, axis, b, registered)
    assert result.size == _fewest_spoilers(e, b, registered)
    if result.spoilers is not None:
        assert len(result.spoilers) == result.size
        running = list(registered) + list(result.spoilers)
        assert max(plurality_scores(restrict(e, running)).values()) <= b


@given(sp_linear_elections(max_m=6, max_n=5), st.data())
@settings(max_examples=300, deadline=None)
def test_demotion_is_minimum(pair, data):
    assert_fewest_spoilers(pair, data)


@pytest.mark.slow
@given(sp_linear_elections(max_m=12, max_n=5), st.data())
@settings(max_examples=500, deadline=None)
def test_demotion_is_minimum_with_up_to_twelve_candidates(pair, data):
    assert_fewest_spoilers(pair, data)


@given(sp_linear_elections(max_m=6, max_n=6))
@settings(max_examples=100, deadline=None)
def test_local_score_on_single_peaked_profiles(pair):
    e, axis = pair
    scores = plurality_scores(e)
    assert all(local_score(e, c, axis) == scores[c] for c in e.candidates)


@pytest.mark.slow
@given(sp_linear_elections(max_m=10, max_n=20))
@settings(max_examples=1000, deadline=None)
def test_local_score_on_larger_single_peaked_profiles(pair):
    e, axis = pair
    scores = plurality_scores(e)
    assert all(local_score(e, c, axis) == scores[c] for c in e.candidates)


@pytest.mark.parametrize('action, constructive', [
    (ADD, True), (UNLIMITED, True), (ADD, False), (UNLIMITED, False), (DELETE, True), (DELETE, False),
])
@given(data=st.data())
@settings(max_examples=150, deadline=None)
def test_solver_matches_exhaustive_search(action, constructive, data):
    inst = data.draw(candidate_control_instances(action=action, constructive=constructive))
    cert = solve_candidate_control(inst)
    oracle = brute_control(inst)
    assert (cert is None) == (oracle is None)
    if cert is not None:
        assert len(cert.candidates) <= inst.limit
        running = apply_candidate_certificate(inst, cert).candidates
        assert goal_reached(inst, running)


@given(candidate_control_instances(action=UNLIMITED, constructive=False))
@settings(max_examples=150, deadline=None)
def test_destructive_adding_never_needs_more_than_three(inst):
    oracle = brute_control(inst)
    if oracle is not None:
        assert len(oracle.candidates) <= 3


@given(candidate_control_instances(max_m=5))
@settings(max_examples=100, deadline=None)
def test_decision_does_not_depend_on_a_given_axis(inst):
    discovered = CandidateControlInstance(inst.election, inst.registered, inst.distinguished, inst.budget,
                                          inst.spoilers, inst.model, inst.action, inst.constructive)
    assert (solve_candidate_control(inst) is None) == (solve_candidate_control(discovered) is None)
