"""Central-memory learning-unlearning schemes.

A central scheme pairs learn(dataset) -> (answer, aux) with
unlearn(deleted entries, aux) -> answer, and must answer exactly as
retraining from scratch would on the surviving dataset. Deleted entries
are (item id, pair) tuples, the actual data points being removed.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .core import (
    ClassHandle,
    Dataset,
    Entry,
    FiniteClass,
    Pair,
    count_bits,
    dataset_bits,
    erm_lexmin,
    is_realizable,
    pair_bits,
    support_pairs,
    validate_query,
)


class QueryTooLargeError(ValueError):
    """A bounded-deletion scheme received more deletions than its budget."""


class PreconditionError(ValueError):
    """An input violated a scheme's stated precondition."""


def _deleted_ids(data: Dataset, deleted: Sequence[Entry]) -> frozenset[int]:
    return validate_query(data, (i for i, _ in deleted))


class TrivialScheme:
    """Store the whole dataset; retrain on every unlearning query."""

    ticketed = False

    def __init__(self, handle: ClassHandle):
        self.handle = handle

    def learn(self, data: Dataset) -> tuple[bool, Dataset]:
        return is_realizable(self.handle, data), data

    def unlearn(self, deleted: Sequence[Entry], aux: Dataset) -> bool:
        survivor = aux.remove(_deleted_ids(aux, deleted))
        return is_realizable(self.handle, survivor)

    def aux_bits(self, aux: Dataset) -> int:
        return dataset_bits(len(aux), self.handle.domain_size)


class TrivialErmScheme:
    """Store-everything scheme for the ERM task over a finite class."""

    ticketed = False

    def __init__(self, fc: FiniteClass):
        self.fc = fc

    def learn(self, data: Dataset) -> tuple[int, Dataset]:
        return erm_lexmin(self.fc, data), data

    def unlearn(self, deleted: Sequence[Entry], aux: Dataset) -> int:
        survivor = aux.remove(_deleted_ids(aux, deleted))
        return erm_lexmin(self.fc, survivor)

    def aux_bits(self, aux: Dataset) -> int:
        return dataset_bits(len(aux), self.fc.domain_size)


def minimal_unrealizable_core(
    handle: ClassHandle, data: Dataset | Iterable[Pair]
) -> tuple[Pair, ...]:
    """Greedy unrealizable core of an unrealizable support.

    Iterates distinct pairs in canonical order, removing each pair whose
    removal keeps the set unrealizable. The result is unrealizable, every
    single-pair removal of it is realizable, and its size is at most the
    hollow star number.
    """
    core = sorted(support_pairs(data))
    if is_realizable(handle, core):
        raise PreconditionError("core extraction needs an unrealizable support")
    i = 0
    while i < len(core):
        rest = core[:i] + core[i + 1 :]
        if not is_realizable(handle, rest):
            core = rest
        else:
            i += 1
    return tuple(core)


def _is_critical(
    handle: ClassHandle, support: frozenset[Pair], removal: frozenset[Pair]
) -> bool:
    if not removal or not is_realizable(handle, support - removal):
        return False
    # if every one-pair-smaller removal fails, all smaller ones do too
    for pair in removal:
        if is_realizable(handle, support - (removal - {pair})):
            return False
    return True


def enumerate_critical_sets(
    handle: ClassHandle, data: Dataset | Iterable[Pair], k: int
) -> set[frozenset[Pair]]:
    """All minimal pair removals of size <= k that make the support realizable.

    Searches prefixes breadth-first, branching only on the greedy core of
    the current survivor: any completion of a prefix to a critical set
    must delete some core pair, so the search is exhaustive while visiting
    at most hollow_star**k prefixes per level.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    support = support_pairs(data)
    if is_realizable(handle, support):
        raise PreconditionError("critical sets are defined for unrealizable data")
    core_memo: dict[frozenset[Pair], tuple[Pair, ...]] = {}

    def core_of(removed: frozenset[Pair]) -> tuple[Pair, ...]:
        hit = core_memo.get(removed)
        if hit is None:
            hit = minimal_unrealizable_core(handle, support - removed)
            core_memo[removed] = hit
        return hit

    found: set[frozenset[Pair]] = set()
    frontier: set[frozenset[Pair]] = {frozenset()}
    for _ in range(k):
        nxt: set[frozenset[Pair]] = set()
        for prefix in frontier:
            for pair in core_of(prefix):
                cand = prefix | {pair}
                if cand in found or cand in nxt:
                    continue
                if is_realizable(handle, support - cand):
                    if _is_critical(handle, support, cand):
                        found.add(cand)
                else:
                    nxt.add(cand)
        frontier = nxt
    return found


@dataclass(frozen=True)
class CriticalIndex:
    """Auxiliary state of the bounded-deletion scheme.

    Stores the critical sets of size up to k plus the dataset
    multiplicity of exactly the pairs those sets mention: a pair can only
    flip realizability once every copy of it is gone.
    """

    base_realizable: bool
    k: int
    n: int
    critical_sets: frozenset[frozenset[Pair]] = frozenset()
    pair_counts: dict[Pair, int] = field(default_factory=dict)


class BoundedDeletionScheme:
    """Exact scheme for deletion queries of at most k items."""

    ticketed = False

    def __init__(self, handle: ClassHandle, k: int):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.handle = handle
        self.k = k

    def learn(self, data: Dataset) -> tuple[bool, CriticalIndex]:
        answer = is_realizable(self.handle, data)
        if answer:
            return True, CriticalIndex(True, self.k, len(data))
        sets = enumerate_critical_sets(self.handle, data, self.k)
        mentioned = {pair for s in sets for pair in s}
        counts = {pair: data.support()[pair] for pair in sorted(mentioned)}
        return False, CriticalIndex(False, self.k, len(data), frozenset(sets), counts)

    def unlearn(self, deleted: Sequence[Entry], aux: CriticalIndex) -> bool:
        if len(deleted) > aux.k:
            raise QueryTooLargeError(
                f"query of {len(deleted)} items exceeds the budget k={aux.k}"
            )
        ids = set()
        for i, _ in deleted:
            if i in ids:
                raise ValueError(f"duplicate index {i} in query")
            if not (1 <= i <= aux.n):
                raise ValueError(f"item id {i} out of range 1..{aux.n}")
            ids.add(i)
        if aux.base_realizable:
            return True
        removed = Counter(pair for _, pair in deleted)
        fully_removed = {
            pair
            for pair, have in aux.pair_counts.items()
            if removed.get(pair, 0) == have
        }
        return any(s <= fully_removed for s in aux.critical_sets)

    def aux_bits(self, aux: CriticalIndex) -> int:
        m = self.handle.domain_size
        bits = 1
        for s in aux.critical_sets:
            bits += len(s) * pair_bits(m)
        bits += len(aux.pair_counts) * count_bits(aux.n)
        return bits
