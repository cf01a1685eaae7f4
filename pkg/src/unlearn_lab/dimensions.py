"""Exact combinatorial dimensions by bounded exhaustive search.

Computes VC dimension, Littlestone dimension, star number, hollow star
number, eluder dimension, and the minimum identification set, each with a
witness that the matching verifier accepts. Searches run over any
realizability oracle except Littlestone and the identification set, whose
recursions need an explicit hypothesis list.

Every search takes a cap and returns the CAP_EXCEEDED sentinel when a
witness of size cap+1 exists. At desk scale (m up to ~10, |H| up to ~64)
the DFS with memoization is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable

from .core import ClassHandle, FiniteClass, Pair

CAP_EXCEEDED = "cap-exceeded"

DimValue = int | str  # a natural or the CAP_EXCEEDED sentinel


class _Search:
    """Realizability-query layer; memoizes oracle answers on supports."""

    def __init__(self, handle: ClassHandle):
        self.handle = handle
        self.m = handle.domain_size
        self.finite = isinstance(handle, FiniteClass)
        self._memo: dict[frozenset[Pair], bool] = {}

    def realizable(self, pairs: frozenset[Pair]) -> bool:
        if self.finite:
            return self.handle.vs_mask(pairs) != 0
        cached = self._memo.get(pairs)
        if cached is None:
            if any((x, 1 - y) in pairs for x, y in pairs):
                cached = False
            else:
                cached = self.handle.is_realizable_pairs(pairs)
            self._memo[pairs] = cached
        return cached

    def ambiguous(self, pairs: frozenset[Pair], x: int) -> bool:
        """Both labels at x stay realizable together with `pairs`."""
        return self.realizable(pairs | {(x, 0)}) and self.realizable(pairs | {(x, 1)})


class _CapHit(Exception):
    def __init__(self, witness):
        self.witness = witness


def _shatters(ctx: _Search, points: tuple[int, ...]) -> bool:
    for labels in product((0, 1), repeat=len(points)):
        if not ctx.realizable(frozenset(zip(points, labels))):
            return False
    return True


def _vc_search(ctx: _Search, cap: int) -> tuple[DimValue, tuple[int, ...]]:
    best, witness = 0, ()
    for k in range(1, cap + 2):
        found = None
        for points in combinations(range(ctx.m), k):
            if _shatters(ctx, points):
                found = points
                break
        if found is None:
            break  # shattering is downward closed
        if k == cap + 1:
            return CAP_EXCEEDED, found
        best, witness = k, found
    return best, witness


def _is_star_set(ctx: _Search, pairs: tuple[Pair, ...]) -> bool:
    fs = frozenset(pairs)
    if not ctx.realizable(fs):
        return False
    for x, y in pairs:
        if not ctx.realizable((fs - {(x, y)}) | {(x, 1 - y)}):
            return False
    return True


def _star_search(ctx: _Search, cap: int) -> tuple[DimValue, tuple[Pair, ...]]:
    # Star sets are downward closed under removing a pair, so DFS over
    # point-sorted extensions with the full property check is exhaustive.
    best: tuple[int, tuple[Pair, ...]] = (0, ())

    def extend(pairs: tuple[Pair, ...], next_x: int):
        nonlocal best
        for x in range(next_x, ctx.m):
            for y in (0, 1):
                cand = pairs + ((x, y),)
                if _is_star_set(ctx, cand):
                    if len(cand) == cap + 1:
                        raise _CapHit(cand)
                    if len(cand) > best[0]:
                        best = (len(cand), cand)
                    extend(cand, x + 1)

    try:
        extend((), 0)
    except _CapHit as hit:
        return CAP_EXCEEDED, hit.witness
    return best[0], best[1]


def _is_hollow_star_set(ctx: _Search, pairs: Iterable[Pair]) -> bool:
    fs = frozenset(pairs)
    if not fs or ctx.realizable(fs):
        return False
    for x, y in fs:
        if not ctx.realizable((fs - {(x, y)}) | {(x, 1 - y)}):
            return False
    return True


def _find_hollow(ctx: _Search, size: int) -> tuple[Pair, ...] | None:
    # A set holding both labels of one point is unrealizable outright; any
    # further pair keeps it unrealizable under flips, so such sets only
    # qualify at size exactly 2. Larger candidates have distinct points.
    if size == 2:
        for x in range(ctx.m):
            cand = ((x, 0), (x, 1))
            if _is_hollow_star_set(ctx, cand):
                return cand
    for points in combinations(range(ctx.m), size):
        for labels in product((0, 1), repeat=size):
            cand = tuple(zip(points, labels))
            if _is_hollow_star_set(ctx, cand):
                return cand
    return None


def _hollow_search(ctx: _Search, cap: int) -> tuple[DimValue, tuple[Pair, ...] | None]:
    for size in range(cap + 1, 0, -1):
        witness = _find_hollow(ctx, size)
        if witness is not None:
            if size == cap + 1:
                return CAP_EXCEEDED, witness
            return size, witness
    return 0, None


def _eluder_search(ctx: _Search, cap: int) -> tuple[DimValue, tuple[Pair, ...]]:
    # Longest extension depth from a realizable constraint support. The
    # depth of a support does not depend on how it was reached, so the
    # memo key is the support alone. No point can recur in a sequence
    # (once constrained, it is never ambiguous again), so depth <= m.
    memo: dict[frozenset[Pair], tuple[int, Pair | None]] = {}

    def depth(fs: frozenset[Pair]) -> tuple[int, Pair | None]:
        hit = memo.get(fs)
        if hit is not None:
            return hit
        best, move = 0, None
        for x in range(ctx.m):
            if ctx.ambiguous(fs, x):
                for y in (0, 1):
                    d, _ = depth(fs | {(x, y)})
                    if 1 + d > best:
                        best, move = 1 + d, (x, y)
        memo[fs] = (best, move)
        return best, move

    total, _ = depth(frozenset())
    seq: list[Pair] = []
    fs: frozenset[Pair] = frozenset()
    while True:
        _, move = memo[fs]
        if move is None:
            break
        seq.append(move)
        fs = fs | {move}
    witness = tuple(seq)
    if total > cap:
        return CAP_EXCEEDED, witness[: cap + 1]
    return total, witness


def _littlestone(fc: FiniteClass) -> tuple[int, object]:
    memo: dict[int, tuple[int, int | None]] = {}

    def ldim(mask: int) -> tuple[int, int | None]:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        best, pick = 0, None
        for x in range(fc.domain_size):
            m0 = mask & fc.pair_mask(x, 0)
            m1 = mask & fc.pair_mask(x, 1)
            if m0 and m1:
                cand = 1 + min(ldim(m0)[0], ldim(m1)[0])
                if cand > best:
                    best, pick = cand, x
        memo[mask] = (best, pick)
        return best, pick

    value, _ = ldim(fc.full_mask)

    def tree(mask: int, depth: int):
        if depth == 0:
            return None
        for x in range(fc.domain_size):
            m0 = mask & fc.pair_mask(x, 0)
            m1 = mask & fc.pair_mask(x, 1)
            if m0 and m1 and min(ldim(m0)[0], ldim(m1)[0]) >= depth - 1:
                return (x, tree(m0, depth - 1), tree(m1, depth - 1))
        raise AssertionError("no splitting point at positive remaining depth")

    return value, tree(fc.full_mask, value)


def littlestone_dimension(fc: FiniteClass) -> int:
    return _littlestone(fc)[0]


def _mis_search(fc: FiniteClass) -> tuple[int, ...]:
    n_h = len(fc.hypotheses)
    for size in range(fc.domain_size + 1):
        for points in combinations(range(fc.domain_size), size):
            restrictions = {tuple(row[x] for x in points) for row in fc.hypotheses}
            if len(restrictions) == n_h:
                return points
    raise AssertionError("full domain always identifies a deduplicated class")


def min_identification_set(fc: FiniteClass) -> tuple[int, ...]:
    """Smallest point set on which hypothesis labels are pairwise distinct."""
    cached = fc._derived.get("mis")
    if cached is None:
        cached = _mis_search(fc)
        fc._derived["mis"] = cached
    return cached  # type: ignore[return-value]


def vc_dimension(handle: ClassHandle, cap: int | None = None) -> DimValue:
    cap = handle.domain_size if cap is None else cap
    return _vc_search(_Search(handle), cap)[0]


def star_number(handle: ClassHandle, cap: int | None = None) -> DimValue:
    cap = handle.domain_size if cap is None else cap
    return _star_search(_Search(handle), cap)[0]


def hollow_star_number(handle: ClassHandle, cap: int | None = None) -> DimValue:
    cap = handle.domain_size + 1 if cap is None else cap
    return _hollow_search(_Search(handle), cap)[0]


def eluder_dimension(handle: ClassHandle, cap: int | None = None) -> DimValue:
    if cap is None:
        cap = handle.domain_size
        if isinstance(handle, FiniteClass):
            cap = min(cap, len(handle.hypotheses) - 1)
    return _eluder_search(_Search(handle), cap)[0]


# Witness verifiers. Each checks a certificate independently of the
# search that produced it.

def verify_shattered(handle: ClassHandle, points: Iterable[int]) -> bool:
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        return False
    return _shatters(_Search(handle), pts)


def verify_star_set(handle: ClassHandle, pairs: Iterable[Pair]) -> bool:
    return _is_star_set(_Search(handle), tuple(pairs))


def verify_hollow_star_set(handle: ClassHandle, pairs: Iterable[Pair]) -> bool:
    return _is_hollow_star_set(_Search(handle), pairs)


def verify_eluder_sequence(handle: ClassHandle, seq: Iterable[Pair]) -> bool:
    ctx = _Search(handle)
    fs: frozenset[Pair] = frozenset()
    for x, y in seq:
        if not ctx.ambiguous(fs, x):
            return False
        fs = fs | {(x, y)}
    return True


def verify_identification_set(fc: FiniteClass, points: Iterable[int]) -> bool:
    pts = tuple(points)
    restrictions = {tuple(row[x] for x in pts) for row in fc.hypotheses}
    return len(restrictions) == len(fc.hypotheses)


def verify_littlestone_tree(fc: FiniteClass, tree: object, depth: int) -> bool:
    """A complete depth-d tree all of whose branches are realizable."""

    def walk(node, pairs: frozenset[Pair], remaining: int) -> bool:
        if remaining == 0:
            return fc.vs_mask(pairs) != 0
        if node is None:
            return False
        x, left, right = node
        return walk(left, pairs | {(x, 0)}, remaining - 1) and walk(
            right, pairs | {(x, 1)}, remaining - 1
        )

    return walk(tree, frozenset(), depth)


@dataclass(frozen=True)
class DimReport:
    """All computed dimensions plus the certifying witnesses."""

    vc: DimValue
    littlestone: int | None
    star: DimValue
    hollow_star: DimValue
    eluder: DimValue
    mis: int | None
    witnesses: dict | None
    caps: dict

    def to_json_dict(self) -> dict:
        out = {
            "vc": self.vc,
            "littlestone": self.littlestone,
            "star": self.star,
            "hollow_star": self.hollow_star,
            "eluder": self.eluder,
            "mis": self.mis,
            "caps": dict(self.caps),
        }
        if self.witnesses is not None:
            out["witnesses"] = {
                k: _witness_json(v) for k, v in self.witnesses.items()
            }
        return out


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, tuple) and w and isinstance(w[0], tuple):
        return [list(p) for p in w]
    if isinstance(w, tuple):
        return list(w)
    return w


def compute_dims(
    handle: ClassHandle, cap: int | None = None, witnesses: bool = True
) -> DimReport:
    """Compute every dimension the handle supports, with witnesses.

    For finite classes the default caps are the provable maxima, so the
    values are exact and the sentinel cannot appear. Oracle classes use
    `cap` (default 6) for every search and skip Littlestone and the
    identification set.
    """
    ctx = _Search(handle)
    m = handle.domain_size
    finite = isinstance(handle, FiniteClass)
    if finite:
        vc_cap = cap if cap is not None else m
        star_cap = cap if cap is not None else m
        hollow_cap = cap if cap is not None else m + 1
        eluder_cap = cap if cap is not None else min(m, len(handle.hypotheses) - 1)
    else:
        c = cap if cap is not None else 6
        vc_cap = star_cap = hollow_cap = eluder_cap = c

    vc, vc_w = _vc_search(ctx, vc_cap)
    star, star_w = _star_search(ctx, star_cap)
    hollow, hollow_w = _hollow_search(ctx, hollow_cap)
    eluder, eluder_w = _eluder_search(ctx, eluder_cap)
    if finite:
        ls, ls_tree = _littlestone(handle)
        mis_w = _mis_search(handle)
        mis: int | None = len(mis_w)
    else:
        ls, ls_tree, mis_w, mis = None, None, None, None

    wit = None
    if witnesses:
        wit = {
            "vc": vc_w,
            "littlestone": ls_tree,
            "star": star_w,
            "hollow_star": hollow_w,
            "eluder": eluder_w,
            "mis": mis_w,
        }
    return DimReport(
        vc=vc,
        littlestone=ls,
        star=star,
        hollow_star=hollow,
        eluder=eluder,
        mis=mis,
        witnesses=wit,
        caps={
            "vc": vc_cap,
            "star": star_cap,
            "hollow_star": hollow_cap,
            "eluder": eluder_cap,
        },
    )
