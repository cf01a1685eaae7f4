"""Version-space compression and mergeable encodings.

An encoding is a short canonical pair list (or an unrealizable marker)
from which the exact version space of the original dataset can be
recovered. For finite classes encodings are pure functions of the
version space, which makes Merge(Enc(S1), Enc(S2)) = Enc(S1 u S2) hold
structurally. For oracle classes the same operations run on
realizability queries alone; encodings then satisfy the merge laws
semantically (equal decoded version spaces) rather than structurally.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

from .core import (
    ClassHandle,
    Dataset,
    FiniteClass,
    Pair,
    encoding_bits,
    is_realizable,
    support_pairs,
)
from .dimensions import min_identification_set


class NotAVersionSpaceError(ValueError):
    """The given hypothesis subset is not the version space of any dataset."""


@dataclass(frozen=True)
class VsEncoding:
    """Compressed dataset: canonical sorted pairs, or the unrealizable marker.

    The unrealizable marker stores both labels of the lexicographically
    first domain point, which decodes to the empty version space.
    """

    realizable: bool
    pairs: tuple[Pair, ...]

    def bits(self, m: int, cap: int) -> int:
        return encoding_bits(len(self.pairs), m, cap)


def unrealizable_marker() -> VsEncoding:
    return VsEncoding(False, ((0, 0), (0, 1)))


def _pairs_in_order(data: Dataset | Iterable[Pair]) -> list[Pair]:
    if isinstance(data, Dataset):
        return list(data.pairs())
    return [(int(x), int(y)) for x, y in data]


def eluder_subsequence(handle: ClassHandle, data: Dataset | Iterable[Pair]) -> list[Pair]:
    """Scan items in order, keeping a pair only while it is still informative.

    A pair (x, y) is kept when the hypotheses consistent with the kept
    prefix disagree at x. If they instead force the opposite label, the
    pair is kept and the scan stops: the data is unrealizable and the
    kept set already witnesses it. The kept set always has the same
    version space as the input and at most eluder+1 pairs.
    """
    kept: list[Pair] = []
    kept_fs: frozenset[Pair] = frozenset()
    for x, y in _pairs_in_order(data):
        if (x, y) in kept_fs:
            continue
        with_y = handle.is_realizable_pairs(kept_fs | {(x, y)})
        with_flip = handle.is_realizable_pairs(kept_fs | {(x, 1 - y)})
        if with_y and with_flip:
            kept.append((x, y))
            kept_fs = kept_fs | {(x, y)}
        elif not with_y:
            kept.append((x, y))
            return kept
    return kept


def star_prune(handle: ClassHandle, kept: Sequence[Pair]) -> list[Pair]:
    """Drop, in order, every pair whose removal leaves the version space unchanged.

    Removal leaves the version space unchanged exactly when replacing the
    pair by its flip is unrealizable alongside the rest. When the result
    is realizable it is a star set, so its size is at most the star number.
    """
    # duplicates never change the version space, drop them up front
    current = list(dict.fromkeys(kept))
    i = 0
    while i < len(current):
        x, y = current[i]
        rest = frozenset(current[:i] + current[i + 1 :])
        if not handle.is_realizable_pairs(rest | {(x, 1 - y)}):
            del current[i]
        else:
            i += 1
    return current


def _canonical_from_mask(fc: FiniteClass, mask: int) -> VsEncoding:
    cached = fc._canon_cache.get(mask)
    if cached is not None:
        return cached  # type: ignore[return-value]
    if mask == 0:
        enc = unrealizable_marker()
        fc._canon_cache[mask] = enc
        return enc
    kept: list[Pair] = []
    full = fc.full_mask
    for x in range(fc.domain_size):
        for y in (0, 1):
            agree = fc.pair_mask(x, y)
            if mask & agree == mask and agree != full:
                kept.append((x, y))
                break
    # lexicographic-order prune, so the result is a function of the mask
    i = 0
    while i < len(kept):
        x, y = kept[i]
        rest_mask = full
        for j, (px, py) in enumerate(kept):
            if j != i:
                rest_mask &= fc.pair_mask(px, py)
        if rest_mask == mask:
            del kept[i]
        else:
            i += 1
    check = full
    for px, py in kept:
        check &= fc.pair_mask(px, py)
    if check != mask:
        raise NotAVersionSpaceError(
            "hypothesis subset is not the version space of any dataset"
        )
    enc = VsEncoding(True, tuple(kept))
    fc._canon_cache[mask] = enc
    return enc


def canonical_dataset(fc: FiniteClass, vs: Iterable[int]) -> VsEncoding:
    """Canonical compressed dataset of a version space.

    Scans the domain in lexicographic order, adding a pair wherever the
    version space is unanimous but the full class is not, then prunes.
    Raises NotAVersionSpaceError when the given subset is not a version
    space; the empty subset maps to the unrealizable marker.
    """
    return _canonical_from_mask(fc, fc.indices_to_mask(vs))


def vs_encode(handle: ClassHandle, data: Dataset | Iterable[Pair]) -> VsEncoding:
    """Compress a dataset to a canonical encoding of its version space."""
    if isinstance(handle, FiniteClass):
        return _canonical_from_mask(handle, handle.vs_mask(support_pairs(data)))
    kept = eluder_subsequence(handle, data)
    if not is_realizable(handle, kept):
        return unrealizable_marker()
    pruned = star_prune(handle, kept)
    return VsEncoding(True, tuple(sorted(pruned)))


def decode_mask(fc: FiniteClass, enc: VsEncoding) -> int:
    if not enc.realizable:
        return 0
    return fc.vs_mask(enc.pairs)


def vs_decode(fc: FiniteClass, enc: VsEncoding) -> frozenset[int]:
    """Exact version space represented by an encoding."""
    return fc.mask_to_indices(decode_mask(fc, enc))


def merge(handle: ClassHandle, e1: VsEncoding, e2: VsEncoding) -> VsEncoding:
    """Encoding of the union of the two encoded datasets."""
    if isinstance(handle, FiniteClass):
        return _canonical_from_mask(handle, decode_mask(handle, e1) & decode_mask(handle, e2))
    return vs_encode(handle, tuple(e1.pairs) + tuple(e2.pairs))


def mergeable_decode(handle: ClassHandle, enc: VsEncoding) -> bool:
    """Yes iff the encoded dataset is realizable."""
    if isinstance(handle, FiniteClass):
        return decode_mask(handle, enc) != 0
    return enc.realizable


def mergeable_triple(
    handle: ClassHandle,
) -> tuple[Callable, Callable, Callable]:
    """(Encode, Merge, Decode) closures over this module's encodings."""

    def encode(data):
        return vs_encode(handle, data)

    def merge_fn(e1, e2):
        return merge(handle, e1, e2)

    def decode(enc):
        return mergeable_decode(handle, enc)

    return encode, merge_fn, decode


def mergeable_to_vs_decode(
    fc: FiniteClass,
    triple: tuple[Callable, Callable, Callable],
    enc,
) -> frozenset[int]:
    """Recover a version space from any mergeable triple's encoding.

    Tests each hypothesis by merging the encoding with the encoding of
    that hypothesis' full graph: the merge decodes to yes exactly when
    the hypothesis was consistent with the originally encoded data.
    """
    encode, merge_fn, decode = triple
    members = set()
    for i, row in enumerate(fc.hypotheses):
        graph = tuple((x, row[x]) for x in range(fc.domain_size))
        if decode(merge_fn(enc, encode(graph))):
            members.add(i)
    return frozenset(members)


def lu_to_vs_adapter(scheme, fc: FiniteClass, data: Dataset | Iterable[Pair]):
    """Turn an exact central scheme into a version-space compression.

    Encodes S as the scheme's auxiliary state on the dataset made of S's
    informative subsequence plus both labels of every identification-set
    point. The returned decoder deletes, per hypothesis, the label it
    disagrees with on the identification set; the scheme answers yes
    exactly for members of the version space of S.

    Returns (aux, decoder) where decoder(aux) yields hypothesis indices.
    """
    kept = eluder_subsequence(fc, data)
    ident = min_identification_set(fc)
    pairs = list(kept)
    for x in ident:
        pairs.append((x, 0))
        pairs.append((x, 1))
    learned = Dataset.from_pairs(pairs)
    _, aux = scheme.learn(learned)
    base = len(kept)

    def decoder(encoding) -> frozenset[int]:
        members = set()
        for i, row in enumerate(fc.hypotheses):
            deleted = []
            for pos, x in enumerate(ident):
                bad = 1 - row[x]
                deleted.append((base + 2 * pos + 1 + bad, (x, bad)))
            if scheme.unlearn(deleted, encoding):
                members.add(i)
        return frozenset(members)

    return aux, decoder
