"""Ticketed learning-unlearning schemes.

A ticketed scheme's learn returns (answer, aux, tickets): aux lives in
central memory, each ticket with the item's owner. Unlearn sees only the
deleted entries, aux, and the deleted items' tickets, and must answer
exactly as retraining on the survivors would. Tickets are trusted
structural values; their bit sizes come from the cost model, not from
serialization.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .compression import VsEncoding, merge, mergeable_decode, vs_decode, vs_encode
from .core import ClassHandle, Dataset, Entry, FiniteClass, count_bits
from .schemes_central import PreconditionError


class TicketError(ValueError):
    """A ticket needed by unlearning is missing or inconsistent."""


@dataclass(frozen=True)
class Ticket:
    """Per-item payload of a tree scheme.

    `siblings` holds the encoding of the off-path subtree at every level,
    root side first; a tree over 2**depth padded leaves yields exactly
    `depth` entries.
    """

    leaf: int
    siblings: tuple[VsEncoding, ...]


def _pad_size(n: int) -> int:
    size = 1
    while size < n:
        size *= 2
    return size


class _AggregationTreeScheme:
    """Shared machinery: a full binary tree of mergeable encodings.

    Leaves hold encodings of single items (identity encodings pad the
    leaf count to a power of two); every internal node is the merge of
    its children, hence the encoding of its whole subtree. The ticket of
    leaf i lists the sibling encodings along the root-to-i path, which is
    exactly what unlearning needs to re-encode any survivor set that
    excludes leaf i.
    """

    ticketed = True

    def __init__(self, handle: ClassHandle, encoding_cap: int | None = None):
        self.handle = handle
        self.encoding_cap = (
            encoding_cap if encoding_cap is not None else 2 * handle.domain_size
        )

    def _learn_tree(self, data: Dataset) -> tuple[VsEncoding, dict[int, Ticket]]:
        n = len(data)
        size = _pad_size(max(n, 1))
        empty = vs_encode(self.handle, ())
        nodes: list[VsEncoding | None] = [None] * (2 * size)
        pairs = data.pairs()
        for leaf in range(size):
            if leaf < n:
                nodes[size + leaf] = vs_encode(self.handle, (pairs[leaf],))
            else:
                nodes[size + leaf] = empty
        for v in range(size - 1, 0, -1):
            nodes[v] = merge(self.handle, nodes[2 * v], nodes[2 * v + 1])
        tickets: dict[int, Ticket] = {}
        for item_id, _ in data.entries:
            heap = size + item_id - 1
            sibs = []
            path = []
            v = heap
            while v > 1:
                path.append(v)
                v //= 2
            for v in reversed(path):
                sibs.append(nodes[v ^ 1])
            tickets[item_id] = Ticket(item_id, tuple(sibs))
        return nodes[1], tickets

    def _fold_survivor(
        self, deleted: Sequence[Entry], tickets: Mapping[int, Ticket]
    ) -> VsEncoding:
        ids = []
        seen = set()
        for i, _ in deleted:
            if i in seen:
                raise ValueError(f"duplicate index {i} in query")
            seen.add(i)
            ids.append(i)
        provided: dict[int, VsEncoding] = {}
        depth = None
        for i in ids:
            t = tickets.get(i)
            if t is None:
                raise TicketError(f"missing ticket for deleted item {i}")
            if depth is None:
                depth = len(t.siblings)
            elif len(t.siblings) != depth:
                raise TicketError("tickets disagree on tree depth")
        assert depth is not None
        size = 1 << depth
        for i in ids:
            t = tickets[i]
            if not (1 <= t.leaf <= size) or t.leaf != i:
                raise TicketError(f"ticket leaf {t.leaf} does not match item {i}")
            v = size + i - 1
            path = []
            while v > 1:
                path.append(v)
                v //= 2
            for enc, node in zip(t.siblings, reversed(path)):
                sib = node ^ 1
                if sib in provided and provided[sib] != enc:
                    raise TicketError(f"inconsistent encodings for tree node {sib}")
                provided[sib] = enc
        dirty = set()
        for i in ids:
            v = size + i - 1
            while v >= 1:
                dirty.add(v)
                v //= 2
        keep: list[int] = []
        for v in range(2, 2 * size):
            if v not in dirty and v // 2 in dirty:
                keep.append(v)
        folded = vs_encode(self.handle, ())
        for v in keep:
            folded = merge(self.handle, folded, provided[v])
        return folded

    def ticket_bits(self, ticket: Ticket) -> int:
        m = self.handle.domain_size
        size = 1 << len(ticket.siblings)
        bits = count_bits(size - 1)
        for enc in ticket.siblings:
            bits += enc.bits(m, self.encoding_cap)
        return bits


class MerkleScheme(_AggregationTreeScheme):
    """Tree scheme for realizability testing: central memory is one bit."""

    def learn(self, data: Dataset) -> tuple[bool, bool, dict[int, Ticket]]:
        root, tickets = self._learn_tree(data)
        answer = mergeable_decode(self.handle, root)
        return answer, answer, tickets

    def unlearn(
        self, deleted: Sequence[Entry], aux: bool, tickets: Mapping[int, Ticket]
    ) -> bool:
        if not deleted:
            return aux
        folded = self._fold_survivor(deleted, tickets)
        return mergeable_decode(self.handle, folded)

    def aux_bits(self, aux: bool) -> int:
        return 1


class ErmMerkleScheme(_AggregationTreeScheme):
    """Tree scheme returning the lexicographically minimal consistent hypothesis.

    Valid only while the dataset and every queried survivor stay
    realizable; central memory holds the answer index.
    """

    def __init__(self, fc: FiniteClass, encoding_cap: int | None = None):
        if not isinstance(fc, FiniteClass):
            raise TypeError("the ERM tree scheme needs an explicit finite class")
        super().__init__(fc, encoding_cap)

    def _decode_erm(self, enc: VsEncoding) -> int:
        members = vs_decode(self.handle, enc)
        if not members:
            raise PreconditionError("survivor dataset is not realizable")
        return min(members)

    def learn(self, data: Dataset) -> tuple[int, int, dict[int, Ticket]]:
        root, tickets = self._learn_tree(data)
        answer = self._decode_erm(root)
        return answer, answer, tickets

    def unlearn(
        self, deleted: Sequence[Entry], aux: int, tickets: Mapping[int, Ticket]
    ) -> int:
        if not deleted:
            return aux
        folded = self._fold_survivor(deleted, tickets)
        return self._decode_erm(folded)

    def aux_bits(self, aux: int) -> int:
        return (len(self.handle.hypotheses) - 1).bit_length()


@dataclass(frozen=True)
class BlockerInfo:
    """One conflict point and its label counts in the learned dataset."""

    x: int
    n0: int
    n1: int


@dataclass(frozen=True)
class ChainAux:
    n: int
    first: BlockerInfo | None
    second: BlockerInfo | None


@dataclass(frozen=True)
class ChainTicket:
    """Held by items sitting on a blocker: its info plus the successor's."""

    n: int
    current: BlockerInfo
    successor: BlockerInfo | None


class ChainScheme:
    """Logarithmic-size ticketed scheme for the free-prefix class.

    The class realizes every labeling on points 0..d-1 and forces label 0
    beyond. A dataset is unrealizable exactly at its blockers: points
    below d holding both labels, and points at d or above holding a
    1-label. Aux stores the first two blockers; each blocker's items
    carry a ticket naming the next one, so unlearning can walk the chain
    using only tickets of deleted items. Discharging a blocker requires
    deleting every copy of one of its conflicting sides, which guarantees
    the walk always finds the next ticket it needs.
    """

    ticketed = True

    def __init__(self, d: int, domain_size: int):
        if not (1 <= d <= domain_size):
            raise ValueError("need 1 <= d <= domain size")
        self.d = d
        self.domain_size = domain_size

    def _blockers(self, counts0: dict[int, int], counts1: dict[int, int]) -> list[BlockerInfo]:
        out = []
        for x in range(self.domain_size):
            n0 = counts0.get(x, 0)
            n1 = counts1.get(x, 0)
            if x < self.d:
                if n0 and n1:
                    out.append(BlockerInfo(x, n0, n1))
            elif n1:
                out.append(BlockerInfo(x, n0, n1))
        return out

    def learn(self, data: Dataset) -> tuple[bool, ChainAux, dict[int, ChainTicket | None]]:
        n = len(data)
        counts0: dict[int, int] = {}
        counts1: dict[int, int] = {}
        for _, (x, y) in data.entries:
            if not (0 <= x < self.domain_size):
                raise ValueError(f"point id {x} outside domain")
            (counts1 if y else counts0)[x] = (counts1 if y else counts0).get(x, 0) + 1
        chain = self._blockers(counts0, counts1)
        by_x = {info.x: i for i, info in enumerate(chain)}
        aux = ChainAux(
            n,
            chain[0] if chain else None,
            chain[1] if len(chain) > 1 else None,
        )
        tickets: dict[int, ChainTicket | None] = {}
        for item_id, (x, _) in data.entries:
            pos = by_x.get(x)
            if pos is None:
                tickets[item_id] = None
            else:
                succ = chain[pos + 1] if pos + 1 < len(chain) else None
                tickets[item_id] = ChainTicket(n, chain[pos], succ)
        return not chain, aux, tickets

    def _discharged(self, info: BlockerInfo, rem0: dict[int, int], rem1: dict[int, int]) -> bool:
        if info.x < self.d and rem0.get(info.x, 0) == info.n0:
            return True
        return rem1.get(info.x, 0) == info.n1

    def unlearn(
        self,
        deleted: Sequence[Entry],
        aux: ChainAux,
        tickets: Mapping[int, ChainTicket | None],
    ) -> bool:
        rem0: dict[int, int] = {}
        rem1: dict[int, int] = {}
        seen = set()
        for i, (x, y) in deleted:
            if i in seen:
                raise ValueError(f"duplicate index {i} in query")
            if not (1 <= i <= aux.n):
                raise ValueError(f"item id {i} out of range 1..{aux.n}")
            seen.add(i)
            (rem1 if y else rem0)[x] = (rem1 if y else rem0).get(x, 0) + 1
        if aux.first is None:
            return True
        if not self._discharged(aux.first, rem0, rem1):
            return False
        if aux.second is None:
            return True
        current = aux.second
        while True:
            if not self._discharged(current, rem0, rem1):
                return False
            ticket = None
            for i, (x, _) in deleted:
                t = tickets.get(i)
                if t is not None and t.current.x == current.x:
                    ticket = t
                    break
            if ticket is None:
                raise TicketError(
                    f"no deleted item carries the ticket of blocker {current.x}"
                )
            if ticket.successor is None:
                return True
            current = ticket.successor

    def _slot_bits(self, n: int) -> int:
        return count_bits(self.domain_size) + 2 * count_bits(n)

    def aux_bits(self, aux: ChainAux) -> int:
        return count_bits(aux.n) + 2 * self._slot_bits(aux.n)

    def ticket_bits(self, ticket: ChainTicket | None) -> int:
        if ticket is None:
            return 0
        return 2 * self._slot_bits(ticket.n)
