import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from libs.core_model import ScoringVector, WinnerModel, scoring_scores
from libs.exceptions import ElectionError
from libs.manipulation import (
    ManipulationCertificate, apply_manipulation_certificate, coalition_wins, exact_ccwm, solve_ccwm,
)
from libs.oracles import brute_axis
from libs.reductions import (
    REDUCTIONS, PartitionInstance, partition_solve, partition_witness_ballots, reduce_partition,
    reduce_partition_to_310, reduce_partition_to_3veto5, reduce_partition_to_borda4, reduce_partition_to_dichotomy,
    reduction_axis,
)

UNIQUE = WinnerModel.UNIQUE
NONUNIQUE = WinnerModel.NONUNIQUE
KINDS = [('3veto5', None), ('310', None), ('borda4', None), ('dichotomy', (3, 1)), ('dichotomy', (5, 2))]


def witness_scores(kind, inst, alpha=None, model=NONUNIQUE):
    target = reduce_partition(kind, inst, model, alpha)
    ballots = partition_witness_ballots(kind, inst, partition_solve(inst))
    cert = ManipulationCertificate(ballots, target.axis)
    return scoring_scores(apply_manipulation_certificate(target, cert), target.rule)


def test_partition_solve():
    assert partition_solve(PartitionInstance((1, 2, 3))) == (1, 2)
    assert partition_solve(PartitionInstance((1, 2, 5))) is None
    subset = partition_solve(PartitionInstance((1, 2, 3, 4)))
    assert sum(subset) == 5


@pytest.mark.parametrize('items', [(), (1, 1, 2), (0, 2), (1, 2), (-1, 3)])
def test_partition_instance_validation(items):
    with pytest.raises(ElectionError):
        PartitionInstance(items)


def test_three_veto_witness():
    inst = PartitionInstance((1, 2, 3))
    assert witness_scores('3veto5', inst) == {'a': 6, 'b': 6, 'c': 3, 'd': 3, 'p': 6}


def test_three_one_zero_witness():
    assert witness_scores('310', PartitionInstance((1, 2, 3))) == {'a': 48, 'b': 48, 'p': 48}


def test_borda_four_scores():
    inst = PartitionInstance((1, 2, 3))
    target = reduce_partition_to_borda4(inst)
    assert scoring_scores(target.election(), target.rule) == {'a': 42, 'b': 96, 'p': 87, 'c': 99}
    assert witness_scores('borda4', inst) == {'a': 45, 'b': 105, 'p': 105, 'c': 105}


def test_dichotomy_witness_ties_all_three():
    inst = PartitionInstance((1, 2, 3))
    for a1, a2 in [(3, 1), (5, 2), (7, 1)]:
        value = 2 * (a1 ** 2 - a2 ** 2) * inst.half
        assert witness_scores('dichotomy', inst, (a1, a2)) == {'a': value, 'b': value, 'p': value}


@pytest.mark.parametrize('kind, alpha', KINDS)
def test_unique_witness_wins_alone(kind, alpha):
    inst = PartitionInstance((1, 2, 3))
    target = reduce_partition(kind, inst, UNIQUE, alpha)
    ballots = partition_witness_ballots(kind, inst, partition_solve(inst))
    assert coalition_wins(target, ballots, target.axis)


@pytest.mark.parametrize('kind, alpha', KINDS)
def test_nonmanipulators_fix_the_axis(kind, alpha):
    target = reduce_partition(kind, PartitionInstance((1, 2, 3)), NONUNIQUE, alpha)
    axis = reduction_axis(kind)
    assert target.axis == axis
    assert brute_axis(target.election()) == {axis, axis[::-1]}


def test_generator_shapes():
    inst = PartitionInstance((1, 2, 3))
    assert reduce_partition_to_3veto5(inst).rule == ScoringVector.j_veto(5, 3)
    assert [b.weight for b in reduce_partition_to_3veto5(inst, UNIQUE).nonmanipulators] == [2, 2]
    assert [b.weight for b in reduce_partition_to_310(inst).nonmanipulators] == [15, 15]
    assert [b.weight for b in reduce_partition_to_310(inst, UNIQUE).nonmanipulators] == [14, 14]
    assert [b.weight for b in reduce_partition_to_borda4(inst, UNIQUE).nonmanipulators] == [30, 19]
    same = reduce_partition_to_dichotomy(inst, 3, 1)
    assert same.nonmanipulators == reduce_partition_to_310(inst).nonmanipulators
    assert same.manipulator_weights == (1, 2, 3)
    scaled = reduce_partition_to_dichotomy(inst, 3, 1, UNIQUE)
    assert scaled.manipulator_weights == (5, 10, 15)
    assert scaled.nonmanipulators[0].weight == 74


def test_generator_arguments():
    inst = PartitionInstance((1, 2, 3))
    with pytest.raises(ElectionError):
        reduce_partition_to_dichotomy(inst, 2, 1)
    with pytest.raises(ElectionError):
        reduce_partition('dichotomy', inst)
    with pytest.raises(ElectionError):
        reduce_partition('borda5', inst)
    with pytest.raises(ElectionError):
        partition_witness_ballots('310', inst, (7,))
    with pytest.raises(ElectionError):
        reduction_axis('copeland')
    assert set(REDUCTIONS) == {'3veto5', '310', 'borda4', 'dichotomy'}


def test_no_partition_means_no_manipulation():
    inst = PartitionInstance((1, 2, 5))
    for kind, alpha in KINDS:
        for model in (UNIQUE, NONUNIQUE):
            assert exact_ccwm(reduce_partition(kind, inst, model, alpha)) is None


partition_instances = st.lists(st.integers(1, 9), min_size=1, max_size=4, unique=True).filter(
    lambda items: sum(items) % 2 == 0).map(lambda items: PartitionInstance(tuple(items)))


@pytest.mark.parametrize('kind, alpha', KINDS)
@given(inst=partition_instances, model=st.sampled_from([UNIQUE, NONUNIQUE]))
@settings(max_examples=40, deadline=None)
def test_manipulation_decides_partition(kind, alpha, inst, model):
    target = reduce_partition(kind, inst, model, alpha)
    assert (solve_ccwm(target) is not None) == (partition_solve(inst) is not None)


SMALL_PARTITIONS = [PartitionInstance(items) for size in range(1, 9)
                    for items in itertools.combinations(range(1, 11), size) if sum(items) % 2 == 0]


@pytest.mark.slow
@pytest.mark.parametrize('kind, alpha', KINDS)
@pytest.mark.parametrize('model', [UNIQUE, NONUNIQUE])
def test_every_small_partition_round_trips(kind, alpha, model):
    for inst in SMALL_PARTITIONS:
        target = reduce_partition(kind, inst, model, alpha)
        assert (exact_ccwm(target) is not None) == (partition_solve(inst) is not None), inst.items
