import itertools

import pytest
from hypothesis import given, settings

from libs.core_model import ApprovalBallot, Election, LinearBallot
from libs.exceptions import ElectionError, InvalidAxisError
from libs.oracles import brute_axis
from libs.single_peaked import (
    approval_consistent, check_axis, enumerate_sp_linear_ballots, find_axis, find_axis_approval,
    find_axis_linear, linear_consistent, peak_outward_ballot,
)
from tests.sp_strategies import approval_profiles, linear_profiles, sp_approval_elections, sp_linear_elections

FIVE = ('c1', 'c2', 'c3', 'c4', 'c5')


def linear(candidates, *rankings):
    return Election(candidates, tuple(LinearBallot(tuple(r.split('>'))) for r in rankings))


def approval(candidates, *sets):
    return Election(candidates, tuple(ApprovalBallot(frozenset(s)) for s in sets))


def test_five_candidate_profile_gets_the_least_of_its_axes():
    e = linear(FIVE, 'c1>c2>c3>c4>c5', 'c3>c4>c2>c1>c5', 'c4>c3>c2>c1>c5')
    assert linear_consistent(e, FIVE)
    assert brute_axis(e) == {
        FIVE,
        ('c4', 'c3', 'c2', 'c1', 'c5'),
        ('c5', 'c1', 'c2', 'c3', 'c4'),
        ('c5', 'c4', 'c3', 'c2', 'c1'),
    }
    assert find_axis_linear(e) == FIVE
    assert find_axis(e) == FIVE


def test_least_axis_ignores_the_ballot_order():
    e = linear(FIVE, 'c4>c3>c2>c1>c5', 'c3>c4>c2>c1>c5', 'c1>c2>c3>c4>c5')
    assert find_axis_linear(e) == FIVE


def test_least_axis_for_a_single_ranking():
    e = linear(('a', 'b', 'c', 'd'), 'c>d>b>a')
    assert find_axis_linear(e) == ('a', 'b', 'c', 'd')
    e = linear(('a', 'b', 'c', 'd'), 'b>c>d>a')
    assert find_axis_linear(e) == ('a', 'b', 'c', 'd')
    e = linear(('a', 'b', 'c', 'd'), 'd>b>c>a')
    assert find_axis_linear(e) == ('a', 'b', 'd', 'c')


def test_valley_is_not_single_peaked():
    e = linear(('a', 'b', 'c'), 'a>c>b')
    assert not linear_consistent(e, ('a', 'b', 'c'))
    assert linear_consistent(e, ('a', 'c', 'b'))


def test_cyclic_profile_has_no_axis():
    e = linear(('a', 'b', 'c'), 'a>b>c', 'b>c>a', 'c>a>b')
    assert find_axis_linear(e) is None
    assert find_axis(e) is None


def test_three_distinct_bottoms_have_no_axis():
    e = linear(('a', 'b', 'c', 'd'), 'd>b>c>a', 'd>a>c>b', 'd>a>b>c')
    assert find_axis_linear(e) is None


def test_election_without_ballots_uses_candidate_order():
    assert find_axis(Election(('x', 'y', 'z'))) == ('x', 'y', 'z')


def test_approval_axis_places_shared_candidate_in_the_middle():
    e = approval(('a', 'b', 'c'), {'a', 'b'}, {'b', 'c'})
    axis = find_axis_approval(e)
    assert axis[1] == 'b'
    assert approval_consistent(e, axis)


def test_nested_approval_groups_get_the_least_axis():
    e = approval(('a', 'b', 'c', 'd', 'e', 'f'), {'a', 'b', 'c', 'd'}, {'d', 'e'}, {'b', 'c'}, {'a', 'c'})
    assert find_axis_approval(e) == ('a', 'c', 'b', 'd', 'e', 'f')
    assert_least_axis(e, find_axis_approval(e))


def test_approval_triangle_has_no_axis():
    e = approval(('a', 'b', 'c'), {'a', 'b'}, {'b', 'c'}, {'a', 'c'})
    assert find_axis_approval(e) is None


def test_empty_approvals_fit_any_axis():
    e = approval(('a', 'b'), set(), set())
    assert approval_consistent(e, ('b', 'a'))


def test_axis_must_be_a_permutation():
    e = linear(('a', 'b', 'c'), 'a>b>c')
    with pytest.raises(InvalidAxisError, match='Invalid societal linear order'):
        linear_consistent(e, ('a', 'b'))


def test_check_axis_rejects_an_inconsistent_axis():
    e = approval(('a', 'b', 'c'), {'a', 'c'})
    with pytest.raises(InvalidAxisError, match='Invalid societal linear order'):
        check_axis(e, ('a', 'b', 'c'))
    check_axis(e, ('a', 'c', 'b'))


def test_kind_specific_checks_reject_the_other_kind():
    with pytest.raises(ElectionError):
        find_axis_linear(approval(('a',), {'a'}))
    with pytest.raises(ElectionError):
        approval_consistent(linear(('a',), 'a'), ('a',))


def test_enumerated_ballots_on_three_candidates():
    assert set(enumerate_sp_linear_ballots(('a', 'p', 'b'), ('a', 'p', 'b'))) == {
        ('a', 'p', 'b'), ('p', 'a', 'b'), ('p', 'b', 'a'), ('b', 'p', 'a'),
    }


@pytest.mark.parametrize('m', [1, 2, 3, 4, 5, 6])
def test_enumeration_matches_filtered_permutations(m):
    axis = FIVE[:m] if m <= 5 else FIVE + ('c6',)
    found = enumerate_sp_linear_ballots(axis, axis)
    expected = {p for p in itertools.permutations(axis)
                if linear_consistent(Election(axis, (LinearBallot(p),)), axis)}
    assert len(found) == 2 ** (m - 1) == len(set(found))
    assert set(found) == expected


def test_enumeration_rejects_a_foreign_axis():
    with pytest.raises(InvalidAxisError):
        enumerate_sp_linear_ballots(('a', 'b'), ('a', 'z'))


def test_peak_outward_ballot_fills_the_interval_first():
    axis = ('a', 'b', 'c', 'd', 'e')
    assert peak_outward_ballot(axis, 2) == ('c', 'b', 'a', 'd', 'e')
    assert peak_outward_ballot(axis, 2, 2, 4) == ('c', 'd', 'e', 'b', 'a')
    assert peak_outward_ballot(axis, 0) == axis
    with pytest.raises(ElectionError):
        peak_outward_ballot(axis, 1, 2, 3)


def index_order(e):
    return lambda axis: [e.candidates.index(c) for c in axis]


def assert_least_axis(e, found):
    axes = brute_axis(e)
    assert (found is not None) == bool(axes)
    if found is not None:
        assert found == min(axes, key=index_order(e))


@given(linear_profiles())
@settings(max_examples=200, deadline=None)
def test_linear_axis_finder_agrees_with_enumeration(e):
    assert_least_axis(e, find_axis_linear(e))


@pytest.mark.slow
@given(linear_profiles(max_m=7, max_n=6))
@settings(max_examples=2000, deadline=None)
def test_linear_axis_finder_on_seven_candidates(e):
    assert_least_axis(e, find_axis_linear(e))


@given(sp_linear_elections(max_n=6))
@settings(max_examples=150, deadline=None)
def test_generated_linear_profiles_get_an_axis(pair):
    e, axis = pair
    found = find_axis_linear(e)
    assert found is not None
    assert linear_consistent(e, found)
    assert linear_consistent(e, axis[::-1])


@given(approval_profiles())
@settings(max_examples=200, deadline=None)
def test_approval_axis_finder_agrees_with_enumeration(e):
    assert_least_axis(e, find_axis(e))


@pytest.mark.slow
@given(approval_profiles(max_m=7, max_n=6))
@settings(max_examples=2000, deadline=None)
def test_approval_axis_finder_on_seven_candidates(e):
    assert_least_axis(e, find_axis(e))


@given(sp_approval_elections(max_m=7, max_n=7))
@settings(max_examples=150, deadline=None)
def test_generated_approval_profiles_get_an_axis(pair):
    e, _ = pair
    found = find_axis(e)
    assert found is not None
    assert approval_consistent(e, found)


@given(approval_profiles(max_m=5, max_n=4))
@settings(max_examples=100, deadline=None)
def test_axis_sets_are_closed_under_reversal(e):
    axes = brute_axis(e)
    assert {axis[::-1] for axis in axes} == axes
