import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from libs.election_file import ElectionDocument, serialize_election
from libs.exceptions import ElectionError
from libs.generators import gen_random_instance, gen_random_sp
from libs.single_peaked import consistent, find_axis


def test_same_seed_same_election():
    first = gen_random_sp(7, 5, 8, 'linear', 3)
    second = gen_random_sp(7, 5, 8, 'linear', 3)
    assert first == second
    doc = ElectionDocument(first[0].candidates, first[0].ballots, axis=first[1])
    assert serialize_election(doc) == serialize_election(ElectionDocument(second[0].candidates, second[0].ballots,
                                                                          axis=second[1]))


def test_different_seeds_usually_differ():
    elections = {gen_random_sp(seed, 5, 6)[0] for seed in range(10)}
    assert len(elections) > 1


def test_lone_candidate():
    e, axis = gen_random_sp(0, 1, 3, 'approval')
    assert axis == ('c1',)
    assert all(b.approved == {'c1'} for b in e.ballots)
    e, _ = gen_random_sp(0, 1, 2, 'linear')
    assert all(b.ranking == ('c1',) for b in e.ballots)


@pytest.mark.parametrize('args', [(0, 0, 3), (0, 3, -1), (0, 3, 3, 'ranked'), (0, 3, 3, 'linear', 0)])
def test_bad_arguments(args):
    with pytest.raises(ElectionError):
        gen_random_sp(*args)


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 7), st.integers(0, 8),
       st.sampled_from(['linear', 'approval']), st.integers(1, 5))
@settings(max_examples=150, deadline=None)
def test_profiles_fit_their_axis(seed, m, n, kind, cap):
    e, axis = gen_random_sp(seed, m, n, kind, cap)
    assert sorted(axis) == sorted(e.candidates)
    assert len(e.ballots) == n
    assert all(1 <= b.weight <= cap for b in e.ballots)
    assert consistent(e, axis)
    assert find_axis(e) is not None


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.integers(0, 6), st.sampled_from(['linear', 'approval']))
@settings(max_examples=150, deadline=None)
def test_instances_are_well_formed(seed, m, n, kind):
    doc = gen_random_instance(seed, m, n, kind, 2)
    e = doc.election()
    assert doc.distinguished in doc.candidates
    assert consistent(e, doc.axis)
    if kind == 'approval':
        assert doc.pool is not None and doc.spoilers == ()
        assert all(b.weight == 1 for b in e.ballots + doc.pool)
        assert not doc.pool or consistent(e.with_ballots(doc.pool), doc.axis)
    else:
        assert doc.candidates
        assert len(doc.spoilers) <= (m - 1) // 2
        assert all(0 <= w <= 4 for w in doc.manipulators)
