"""Hypothesis classes, labeled datasets, version spaces, and bit-cost accounting.

Domain points are dense integer ids 0..m-1. A labeled pair is a tuple
(x, y) with y in {0, 1}. Whether a dataset is realizable depends only on
its set of distinct labeled pairs; multiplicities matter only when items
are deleted. All types are immutable values and every operation is a pure
function, so everything here is safe to share across threads.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from typing import Protocol, runtime_checkable

Pair = tuple[int, int]
Entry = tuple[int, Pair]  # (item id, labeled pair)


class OracleError(RuntimeError):
    """A realizability oracle failed to produce an answer."""


class UnknownItemError(KeyError):
    """A deletion referenced an item id that is not in the dataset."""


@runtime_checkable
class RealizabilityOracle(Protocol):
    """Black box answering realizability on finite labeled supports.

    Answers must be deterministic and downward monotone: if a support is
    realizable, every subset of it is realizable too.
    """

    domain_size: int

    def is_realizable_pairs(self, pairs: Iterable[Pair]) -> bool: ...


def _check_pair(pair: Pair, m: int) -> None:
    x, y = pair
    if not (0 <= x < m):
        raise ValueError(f"point id {x} outside domain of size {m}")
    if y not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {y!r}")


class FiniteClass:
    """An explicit hypothesis class: deduplicated {0,1}-rows over m points.

    Hypotheses are indexed 0..len-1 in construction order (after removing
    duplicate rows). Internally each (x, y) pair maps to a bitmask of the
    hypotheses consistent with it, so version-space computations are
    integer AND-folds.
    """

    __slots__ = (
        "domain_size",
        "hypotheses",
        "_masks",
        "_full_mask",
        "_canon_cache",
        "_derived",
    )

    def __init__(self, domain_size: int, hypotheses: Iterable[Sequence[int]]):
        if domain_size < 1:
            raise ValueError("domain size must be at least 1")
        rows: list[tuple[int, ...]] = []
        seen = set()
        for row in hypotheses:
            t = tuple(row)
            if len(t) != domain_size:
                raise ValueError("hypothesis row length must equal domain size")
            if any(b not in (0, 1) for b in t):
                raise ValueError("hypothesis rows must be 0/1 valued")
            if t not in seen:
                seen.add(t)
                rows.append(t)
        if not rows:
            raise ValueError("a hypothesis class needs at least one hypothesis")
        self.domain_size = domain_size
        self.hypotheses: tuple[tuple[int, ...], ...] = tuple(rows)
        full = (1 << len(rows)) - 1
        masks = []
        for x in range(domain_size):
            m1 = 0
            for i, row in enumerate(rows):
                if row[x]:
                    m1 |= 1 << i
            masks.append((full ^ m1, m1))
        self._masks: tuple[tuple[int, int], ...] = tuple(masks)
        self._full_mask = full
        # insert-only memo tables for canonical encodings and derived values
        self._canon_cache: dict[int, object] = {}
        self._derived: dict[str, object] = {}

    def __len__(self) -> int:
        return len(self.hypotheses)

    def __repr__(self) -> str:
        return f"FiniteClass(m={self.domain_size}, hypotheses={len(self.hypotheses)})"

    @property
    def full_mask(self) -> int:
        return self._full_mask

    def pair_mask(self, x: int, y: int) -> int:
        return self._masks[x][y]

    def vs_mask(self, pairs: Iterable[Pair]) -> int:
        """Bitmask of hypotheses consistent with every given pair."""
        mask = self._full_mask
        for x, y in pairs:
            _check_pair((x, y), self.domain_size)
            mask &= self._masks[x][y]
            if not mask:
                return 0
        return mask

    def mask_to_indices(self, mask: int) -> frozenset[int]:
        return frozenset(i for i in range(len(self.hypotheses)) if mask >> i & 1)

    def indices_to_mask(self, indices: Iterable[int]) -> int:
        mask = 0
        for i in indices:
            if not (0 <= i < len(self.hypotheses)):
                raise ValueError(f"hypothesis index {i} out of range")
            mask |= 1 << i
        return mask

    def is_realizable_pairs(self, pairs: Iterable[Pair]) -> bool:
        return self.vs_mask(pairs) != 0


class FiniteClassOracle:
    """Wraps a FiniteClass exposing only the realizability-oracle surface."""

    __slots__ = ("domain_size", "_fc")

    def __init__(self, fc: FiniteClass):
        self._fc = fc
        self.domain_size = fc.domain_size

    def is_realizable_pairs(self, pairs: Iterable[Pair]) -> bool:
        return self._fc.is_realizable_pairs(pairs)


def as_oracle(fc: FiniteClass) -> FiniteClassOracle:
    return FiniteClassOracle(fc)


# A ClassHandle is either a FiniteClass or any realizability oracle.
ClassHandle = FiniteClass | RealizabilityOracle


class Dataset:
    """An indexed multiset of labeled pairs.

    Each item carries a stable id. Fresh datasets number items 1..n by
    position; removal keeps the surviving items' original ids, which is
    what deletion-by-index semantics require.
    """

    __slots__ = ("entries", "_by_id", "_support")

    def __init__(self, entries: Iterable[Entry]):
        ent = tuple((int(i), (int(x), int(y))) for i, (x, y) in entries)
        by_id = {}
        for i, pair in ent:
            if i < 1:
                raise ValueError("item ids must be positive")
            if i in by_id:
                raise ValueError(f"duplicate item id {i}")
            if pair[1] not in (0, 1):
                raise ValueError("labels must be 0 or 1")
            by_id[i] = pair
        self.entries: tuple[Entry, ...] = ent
        self._by_id = by_id
        self._support: Counter | None = None

    @classmethod
    def from_pairs(cls, pairs: Iterable[Pair]) -> "Dataset":
        return cls((i + 1, pair) for i, pair in enumerate(pairs))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self) -> str:
        return f"Dataset({list(self.entries)!r})"

    def ids(self) -> frozenset[int]:
        return frozenset(self._by_id)

    def pair(self, item_id: int) -> Pair:
        try:
            return self._by_id[item_id]
        except KeyError:
            raise UnknownItemError(item_id) from None

    def pairs(self) -> tuple[Pair, ...]:
        return tuple(pair for _, pair in self.entries)

    def support(self) -> Counter:
        if self._support is None:
            self._support = Counter(pair for _, pair in self.entries)
        return self._support

    def distinct_pairs(self) -> frozenset[Pair]:
        return frozenset(self.support())

    def remove(self, indices: Iterable[int]) -> "Dataset":
        idx = validate_query(self, indices)
        return Dataset(e for e in self.entries if e[0] not in idx)

    def entries_for(self, indices: Iterable[int]) -> tuple[Entry, ...]:
        idx = validate_query(self, indices)
        return tuple((i, self._by_id[i]) for i in sorted(idx))


def validate_query(data: Dataset, indices: Iterable[int]) -> frozenset[int]:
    """Check an index set against a dataset: ids known, no duplicates."""
    seen = set()
    for i in indices:
        if i in seen:
            raise ValueError(f"duplicate index {i} in query")
        seen.add(i)
        if i not in data._by_id:
            raise UnknownItemError(i)
    return frozenset(seen)


def support_pairs(data: Dataset | Iterable[Pair]) -> frozenset[Pair]:
    if isinstance(data, Dataset):
        return data.distinct_pairs()
    return frozenset((int(x), int(y)) for x, y in data)


def is_realizable(handle: ClassHandle, data: Dataset | Iterable[Pair]) -> bool:
    """True iff some hypothesis agrees with every distinct pair of the data.

    Multiplicities are irrelevant; the empty dataset is always realizable.
    Oracle failures propagate as OracleError.
    """
    pairs = support_pairs(data)
    if any((x, 1 - y) in pairs for x, y in pairs):
        return False
    return handle.is_realizable_pairs(pairs)


def version_space(fc: FiniteClass, data: Dataset | Iterable[Pair]) -> frozenset[int]:
    """Exact set of hypothesis indices consistent with the data."""
    return fc.mask_to_indices(fc.vs_mask(support_pairs(data)))


def remove(data: Dataset, indices: Iterable[int]) -> Dataset:
    return data.remove(indices)


def erm_lexmin(fc: FiniteClass, data: Dataset | Iterable[Pair]) -> int:
    """Smallest hypothesis index among 0-1-loss minimizers.

    Loss weights each distinct pair by its multiplicity. On realizable
    data this returns the minimum index of the version space, which makes
    the answer canonical under permutation of items.
    """
    if isinstance(data, Dataset):
        weights = data.support()
    else:
        weights = Counter((int(x), int(y)) for x, y in data)
    best_i = 0
    best_loss = None
    for i, row in enumerate(fc.hypotheses):
        loss = 0
        for (x, y), c in weights.items():
            _check_pair((x, y), fc.domain_size)
            if row[x] != y:
                loss += c
        if best_loss is None or loss < best_loss:
            best_loss = loss
            best_i = i
    return best_i


# Bit-cost model. Storage is never serialized; these formulas make
# "number of bits" a deterministic measurable.

def pair_bits(m: int) -> int:
    """Cost of one labeled pair: ceil(log2(2m))."""
    if m < 1:
        raise ValueError("domain size must be at least 1")
    return (2 * m - 1).bit_length()


def count_bits(n: int) -> int:
    """Cost of a count in 0..n: ceil(log2(n+1))."""
    if n < 0:
        raise ValueError("counts are nonnegative")
    return n.bit_length()


def encoding_bits(n_pairs: int, m: int, cap: int) -> int:
    """Length header for a pair list of at most `cap` pairs, plus payload."""
    if n_pairs > cap:
        raise ValueError(f"encoding of {n_pairs} pairs exceeds configured cap {cap}")
    return count_bits(cap) + n_pairs * pair_bits(m)


def dataset_bits(n: int, m: int) -> int:
    """Cost of storing an n-item dataset verbatim."""
    return count_bits(n) + n * pair_bits(m)
