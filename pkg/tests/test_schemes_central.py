"""Central schemes: the store-everything baseline, greedy cores, critical-set
enumeration, and the bounded-deletion scheme against the retrain oracle."""

import random
from itertools import combinations

import pytest

from unlearn_lab import (
    BoundedDeletionScheme,
    Dataset,
    HalfspaceOracle,
    PreconditionError,
    QueryTooLargeError,
    TrivialErmScheme,
    TrivialScheme,
    UnknownItemError,
    all_labelings,
    enumerate_critical_sets,
    erm_lexmin,
    hollow_star_number,
    is_realizable,
    minimal_unrealizable_core,
    random_finite_class,
    thresholds_1d,
)


@pytest.fixture
def thr4():
    return thresholds_1d(4)


# values (1,1),(2,0),(3,1),(4,0) as ids
MIXED = ((0, 1), (1, 0), (2, 1), (3, 0))


def test_trivial_scheme_examples(thr4):
    scheme = TrivialScheme(thr4)
    d = Dataset.from_pairs([(0, 1), (1, 0)])
    answer, aux = scheme.learn(d)
    assert answer is False
    assert scheme.unlearn([], aux) is False
    assert scheme.unlearn([(1, (0, 1))], aux) is True
    assert scheme.aux_bits(aux) == 2 + 2 * 3  # count_bits(2) + 2 pairs


def test_trivial_scheme_unknown_index(thr4):
    scheme = TrivialScheme(thr4)
    _, aux = scheme.learn(Dataset.from_pairs([(0, 1)]))
    with pytest.raises(UnknownItemError):
        scheme.unlearn([(9, (0, 1))], aux)


def test_core_greedy_removes_in_canonical_order(thr4):
    assert minimal_unrealizable_core(thr4, MIXED) == ((2, 1), (3, 0))


def test_core_of_coincident_pair_is_itself():
    fc = all_labelings(2)
    assert minimal_unrealizable_core(fc, [(0, 0), (0, 1)]) == ((0, 0), (0, 1))


def test_core_requires_unrealizable_input(thr4):
    with pytest.raises(PreconditionError):
        minimal_unrealizable_core(thr4, [(0, 1)])


def test_core_of_halfspace_alternation_is_everything():
    oracle = HalfspaceOracle([(0,), (1,), (2,)])
    labels = ((0, 1), (1, 0), (2, 1))
    assert minimal_unrealizable_core(oracle, labels) == labels


def test_enumerate_critical_sets_threshold_instance(thr4):
    # exhaustive minimality check finds three 2-critical sets here
    got = enumerate_critical_sets(thr4, Dataset.from_pairs(MIXED), 2)
    expected = {
        frozenset({(0, 1), (2, 1)}),
        frozenset({(0, 1), (3, 0)}),
        frozenset({(1, 0), (3, 0)}),
    }
    assert got == expected


def test_enumerate_critical_sets_coincident_pair():
    fc = all_labelings(2)
    got = enumerate_critical_sets(fc, Dataset.from_pairs([(0, 0), (0, 1)]), 1)
    assert got == {frozenset({(0, 0)}), frozenset({(0, 1)})}


def test_enumerate_rejects_realizable_data(thr4):
    with pytest.raises(PreconditionError):
        enumerate_critical_sets(thr4, Dataset.from_pairs([(0, 1)]), 2)


def _brute_force_criticals(handle, support, k):
    out = set()
    for size in range(1, k + 1):
        for q in combinations(sorted(support), size):
            qs = frozenset(q)
            if not is_realizable(handle, support - qs):
                continue
            if all(
                not is_realizable(handle, support - (qs - {p})) for p in qs
            ):
                out.add(qs)
    return out


def test_enumeration_matches_brute_force_and_census():
    rng = random.Random(41)
    done = 0
    while done < 60:
        fc = random_finite_class(rng)
        pairs = [(rng.randrange(fc.domain_size), rng.randint(0, 1)) for _ in range(rng.randint(2, 10))]
        data = Dataset.from_pairs(pairs)
        if is_realizable(fc, data):
            continue
        done += 1
        k = rng.randint(1, 3)
        got = enumerate_critical_sets(fc, data, k)
        assert got == _brute_force_criticals(fc, data.distinct_pairs(), k)
        hollow = hollow_star_number(fc)
        for size in range(1, k + 1):
            count = sum(1 for s in got if len(s) == size)
            assert count <= hollow**size


def test_bounded_scheme_threshold_examples(thr4):
    scheme = BoundedDeletionScheme(thr4, 2)
    d = Dataset.from_pairs(MIXED)
    answer, aux = scheme.learn(d)
    assert answer is False
    assert scheme.unlearn([(2, (1, 0)), (4, (3, 0))], aux) is True
    assert scheme.unlearn([(1, (0, 1))], aux) is False


def test_bounded_scheme_multiplicity_semantics():
    fc = all_labelings(1)
    d = Dataset.from_pairs([(0, 1), (0, 1), (0, 0)])
    scheme = BoundedDeletionScheme(fc, 1)
    _, aux = scheme.learn(d)
    # one of two copies of (x,1) removed: the pair survives
    assert scheme.unlearn([(1, (0, 1))], aux) is False


def test_bounded_scheme_query_budget(thr4):
    scheme = BoundedDeletionScheme(thr4, 1)
    _, aux = scheme.learn(Dataset.from_pairs(MIXED))
    with pytest.raises(QueryTooLargeError):
        scheme.unlearn([(1, (0, 1)), (2, (1, 0))], aux)


def test_bounded_scheme_realizable_base_always_yes(thr4):
    scheme = BoundedDeletionScheme(thr4, 2)
    d = Dataset.from_pairs([(2, 1), (3, 1)])
    answer, aux = scheme.learn(d)
    assert answer is True
    assert scheme.unlearn([(1, (2, 1))], aux) is True
    assert aux.critical_sets == frozenset()


def test_bounded_scheme_matches_oracle_on_random_instances():
    rng = random.Random(42)
    for _ in range(150):
        fc = random_finite_class(rng)
        n = rng.randint(0, 10)
        data = Dataset.from_pairs(
            [(rng.randrange(fc.domain_size), rng.randint(0, 1)) for _ in range(n)]
        )
        k = rng.randint(1, 3)
        scheme = BoundedDeletionScheme(fc, k)
        _, aux = scheme.learn(data)
        ids = rng.sample(range(1, n + 1), min(n, rng.randint(0, k)))
        entries = data.entries_for(ids)
        assert scheme.unlearn(entries, aux) == is_realizable(fc, data.remove(ids))


def test_trivial_erm_scheme_matches_oracle():
    rng = random.Random(43)
    for _ in range(150):
        fc = random_finite_class(rng)
        n = rng.randint(0, 10)
        data = Dataset.from_pairs(
            [(rng.randrange(fc.domain_size), rng.randint(0, 1)) for _ in range(n)]
        )
        scheme = TrivialErmScheme(fc)
        answer, aux = scheme.learn(data)
        assert answer == erm_lexmin(fc, data)
        ids = [i for i in range(1, n + 1) if rng.random() < 0.4]
        assert scheme.unlearn(data.entries_for(ids), aux) == erm_lexmin(fc, data.remove(ids))
