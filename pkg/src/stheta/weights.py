"""Signatures, weights, and their combinatorial predicates.

A signature records, for each archimedean place, a pair (a_+, a_-) with a
place-independent total n = a_+ + a_-.  Weights are per-place integer
vectors of length n; the predicates implemented here (dominant,
sum-symmetric, symmetric, pure) gate every theta-operator construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Signature:
    """Ordered per-place dimension pairs (a_+, a_-) with constant total n.

    A single place with (a_+, a_-) = (1, 1) is degenerate in the geometric
    theory (Koecher's principle fails there); the coordinate algebra built
    here is still perfectly well defined, so construction is allowed and the
    case is merely flagged via :attr:`koecher_degenerate`.
    """

    places: tuple

    def __post_init__(self):
        places = tuple((int(a), int(b)) for a, b in self.places)
        object.__setattr__(self, "places", places)
        if not places:
            raise ValueError("signature needs at least one place")
        totals = {a + b for a, b in places}
        if len(totals) != 1:
            raise ValueError("a_+ + a_- must be identical across places")
        if any(a < 0 or b < 0 for a, b in places):
            raise ValueError("signature entries must be nonnegative")

    @property
    def n(self) -> int:
        a, b = self.places[0]
        return a + b

    @property
    def num_places(self) -> int:
        return len(self.places)

    @property
    def koecher_degenerate(self) -> bool:
        """Single place of signature (1, 1), excluded in the geometric theory."""
        return self.places == ((1, 1),)

    def a_plus(self, place: int) -> int:
        return self.places[place][0]

    def a_minus(self, place: int) -> int:
        return self.places[place][1]

    def to_json(self) -> list:
        return [list(pair) for pair in self.places]

    @staticmethod
    def from_json(obj) -> "Signature":
        return Signature(tuple((int(a), int(b)) for a, b in obj))


@dataclass(frozen=True)
class Weight:
    """Per-place integer vector (kappa_1, ..., kappa_n) relative to a signature."""

    sig: Signature
    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in vec) for vec in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.sig.num_places:
            raise ValueError("one entry vector per place required")
        if any(len(vec) != self.sig.n for vec in entries):
            raise ValueError(f"each place vector must have length n = {self.sig.n}")

    def plus_part(self, place: int) -> tuple:
        return self.entries[place][: self.sig.a_plus(place)]

    def minus_part(self, place: int) -> tuple:
        return self.entries[place][self.sig.a_plus(place):]

    def is_zero(self) -> bool:
        return all(x == 0 for vec in self.entries for x in vec)

    def mul(self, other: "Weight") -> "Weight":
        """Entrywise sum, the product of the corresponding torus characters."""
        if self.sig != other.sig:
            raise ValueError("signature mismatch")
        return Weight(self.sig, tuple(
            tuple(a + b for a, b in zip(u, v))
            for u, v in zip(self.entries, other.entries)))

    def to_json(self) -> list:
        return [list(vec) for vec in self.entries]

    @staticmethod
    def from_json(sig: Signature, obj) -> "Weight":
        return Weight(sig, tuple(tuple(int(x) for x in vec) for vec in obj))


def is_positive(kappa: Weight) -> bool:
    return all(x >= 0 for vec in kappa.entries for x in vec)


def is_dominant(kappa: Weight) -> bool:
    """kappa_i >= kappa_{i+1} for all i except i = a_+ of the place."""
    for place, vec in enumerate(kappa.entries):
        a_plus = kappa.sig.a_plus(place)
        for i in range(1, kappa.sig.n):
            if i == a_plus:
                continue
            if vec[i - 1] < vec[i]:
                return False
    return True


def block_sums(kappa: Weight, place: int) -> tuple:
    a_plus = kappa.sig.a_plus(place)
    vec = kappa.entries[place]
    return sum(vec[:a_plus]), sum(vec[a_plus:])


def is_sum_symmetric(kappa: Weight):
    """(flag, depth): positive dominant with equal +/- block sums per place.

    The depth is half the total entry sum, i.e. the common block sum added
    over places; it is returned only when the flag is true.
    """
    if not (is_positive(kappa) and is_dominant(kappa)):
        return False, None
    depth = 0
    for place in range(kappa.sig.num_places):
        d_plus, d_minus = block_sums(kappa, place)
        if d_plus != d_minus:
            return False, None
        depth += d_plus
    return True, depth


def is_symmetric(kappa: Weight) -> bool:
    """Sum-symmetric with kappa_i = kappa_{a_+ + i} for i <= min(a_+, a_-)."""
    flag, _ = is_sum_symmetric(kappa)
    if not flag:
        return False
    for place, vec in enumerate(kappa.entries):
        a_plus = kappa.sig.a_plus(place)
        a_minus = kappa.sig.a_minus(place)
        for i in range(1, min(a_plus, a_minus) + 1):
            if vec[i - 1] != vec[a_plus + i - 1]:
                return False
    return True


def weight_congruent(kappa: Weight, kappa_prime: Weight, p: int, m: int) -> bool:
    """Hypotheses of the congruence theorem for a pair of symmetric weights.

    Checks, for every place:
      * entrywise congruence mod p^m (p - 1);
      * (i)  min of the successive gaps > m at each i < a_+ where the two
             gaps differ;
      * (ii) min of the a_+ entries > m where those entries differ.

    Only the stated conditions are checked, and only symmetric weights are
    accepted (mirrored indices are then covered automatically).
    """
    if kappa.sig != kappa_prime.sig:
        raise ValueError("signature mismatch")
    if not (is_symmetric(kappa) and is_symmetric(kappa_prime)):
        raise ValueError("weight_congruent is defined for symmetric weights")
    if m < 1:
        raise ValueError("m must be >= 1")
    modulus = p ** m * (p - 1)
    for place in range(kappa.sig.num_places):
        u = kappa.entries[place]
        v = kappa_prime.entries[place]
        a_plus = kappa.sig.a_plus(place)
        if any((x - y) % modulus != 0 for x, y in zip(u, v)):
            return False
        for i in range(1, a_plus):
            gap_u = u[i - 1] - u[i]
            gap_v = v[i - 1] - v[i]
            if gap_u != gap_v and min(gap_u, gap_v) <= m:
                return False
        if u[a_plus - 1] != v[a_plus - 1] and min(u[a_plus - 1], v[a_plus - 1]) <= m:
            return False
    return True


@dataclass(frozen=True)
class PartitionedSignature:
    """Ordered list of sub-signatures whose per-place pairs sum to the ambient ones.

    The degenerate partition with a single part equal to the whole signature
    is allowed; restriction along it is the identity.
    """

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("partition needs at least one part")
        num_places = parts[0].num_places
        if any(part.num_places != num_places for part in parts):
            raise ValueError("all parts must share one place set")

    @property
    def ambient(self) -> Signature:
        num_places = self.parts[0].num_places
        pairs = []
        for place in range(num_places):
            a = sum(part.a_plus(place) for part in self.parts)
            b = sum(part.a_minus(place) for part in self.parts)
            pairs.append((a, b))
        return Signature(tuple(pairs))

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def plus_offsets(self, place: int) -> list:
        """Start offset of each part inside the ambient + index range."""
        offs, acc = [], 0
        for part in self.parts:
            offs.append(acc)
            acc += part.a_plus(place)
        return offs

    def minus_offsets(self, place: int) -> list:
        offs, acc = [], 0
        for part in self.parts:
            offs.append(acc)
            acc += part.a_minus(place)
        return offs

    def plus_block_of(self, place: int, i: int) -> int:
        """Part index owning ambient + row i (1-based, i <= a_+)."""
        acc = 0
        for q, part in enumerate(self.parts):
            acc += part.a_plus(place)
            if i <= acc:
                return q
        raise ValueError("row index out of range")

    def minus_block_of(self, place: int, j: int) -> int:
        """Part index owning ambient - column j (1-based, a_+ < j <= n)."""
        a_plus = self.ambient.a_plus(place)
        acc = 0
        for q, part in enumerate(self.parts):
            acc += part.a_minus(place)
            if j - a_plus <= acc:
                return q
        raise ValueError("column index out of range")

    def to_json(self) -> list:
        return [part.to_json() for part in self.parts]

    @staticmethod
    def from_json(obj) -> "PartitionedSignature":
        return PartitionedSignature(tuple(Signature.from_json(part) for part in obj))


def restrict_components(lam: Weight, part: PartitionedSignature) -> list:
    """Split each place vector into the partition's blocks.

    The + segment is cut by the parts' a_+ sizes and the - segment by their
    a_- sizes, so each component is a weight for the corresponding part.
    """
    if part.ambient != lam.sig:
        raise ValueError("partition does not match the weight's signature")
    components = []
    for q, sub in enumerate(part.parts):
        vectors = []
        for place in range(lam.sig.num_places):
            plus = lam.plus_part(place)
            minus = lam.minus_part(place)
            po = part.plus_offsets(place)[q]
            mo = part.minus_offsets(place)[q]
            vectors.append(plus[po:po + sub.a_plus(place)]
                           + minus[mo:mo + sub.a_minus(place)])
        components.append(Weight(sub, tuple(vectors)))
    return components


def is_pure(lam: Weight, part: PartitionedSignature):
    """(flag, index): at most one nontrivial component, and it is sum-symmetric.

    The zero weight is pure with index None.  Indices are 0-based part
    positions.
    """
    components = restrict_components(lam, part)
    nontrivial = [q for q, comp in enumerate(components) if not comp.is_zero()]
    if not nontrivial:
        return True, None
    if len(nontrivial) > 1:
        return False, None
    q = nontrivial[0]
    flag, _ = is_sum_symmetric(components[q])
    return (True, q) if flag else (False, None)


@dataclass(frozen=True)
class BlockPermutation:
    """Permutation of the parts of a partitioned signature.

    ``perm[k]`` is the original part placed in slot k of the new layout; the
    induced maps on ambient row/column indices move each part's index range
    to its new offset.  Only transpositions (1 i) are ever produced by the
    Weyl-conjugation helper, matching the restriction machinery.
    """

    part: PartitionedSignature
    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(self.part.num_parts)):
            raise ValueError("not a permutation of the parts")

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.part.num_parts))

    def permuted_partition(self) -> PartitionedSignature:
        return PartitionedSignature(tuple(self.part.parts[q] for q in self.perm))

    def inverse(self) -> "BlockPermutation":
        inv = [0] * len(self.perm)
        for slot, q in enumerate(self.perm):
            inv[q] = slot
        # the inverse lives on the permuted layout
        return BlockPermutation(self.permuted_partition(), tuple(inv))

    def plus_index_map(self, place: int) -> dict:
        """Old ambient + row index -> new ambient + row index (1-based)."""
        old_offs = self.part.plus_offsets(place)
        new_part = self.permuted_partition()
        new_offs = new_part.plus_offsets(place)
        mapping = {}
        for slot, q in enumerate(self.perm):
            size = self.part.parts[q].a_plus(place)
            for r in range(size):
                mapping[old_offs[q] + r + 1] = new_offs[slot] + r + 1
        return mapping

    def minus_index_map(self, place: int) -> dict:
        """Old ambient - column index -> new one (1-based, offset past a_+)."""
        a_plus = self.part.ambient.a_plus(place)
        old_offs = self.part.minus_offsets(place)
        new_offs = self.permuted_partition().minus_offsets(place)
        mapping = {}
        for slot, q in enumerate(self.perm):
            size = self.part.parts[q].a_minus(place)
            for r in range(size):
                mapping[a_plus + old_offs[q] + r + 1] = a_plus + new_offs[slot] + r + 1
        return mapping

    def apply_to_weight(self, lam: Weight) -> Weight:
        """Move each part's entries along with the part."""
        components = restrict_components(lam, self.part)
        new_components = [components[q] for q in self.perm]
        new_part = self.permuted_partition()
        vectors = []
        for place in range(lam.sig.num_places):
            plus, minus = [], []
            for slot, comp in enumerate(new_components):
                sub = new_part.parts[slot]
                plus.extend(comp.entries[place][: sub.a_plus(place)])
                minus.extend(comp.entries[place][sub.a_plus(place):])
            vectors.append(tuple(plus) + tuple(minus))
        return Weight(lam.sig, tuple(vectors))


def identity_block_permutation(part: PartitionedSignature) -> BlockPermutation:
    return BlockPermutation(part, tuple(range(part.num_parts)))


def weyl_conjugate_to_dominant(lam: Weight, part: PartitionedSignature):
    """Conjugate a pure weight to its dominant representative by a block swap.

    For lam pure with nontrivial part i, the transposition (1 i) moves that
    part to the front; the result is dominant for the ambient group and pure
    sum-symmetric for the permuted partition.  Dominant or zero input is
    returned unchanged with the identity permutation.
    """
    pure, index = is_pure(lam, part)
    if not pure:
        raise ValueError("weight is not pure for the partition")
    if index is None or is_dominant(lam):
        return lam, identity_block_permutation(part)
    perm = list(range(part.num_parts))
    perm[0], perm[index] = perm[index], perm[0]
    sigma = BlockPermutation(part, tuple(perm))
    lam0 = sigma.apply_to_weight(lam)
    if not is_dominant(lam0):
        raise AssertionError("block transposition failed to reach the dominant chamber")
    return lam0, sigma


@dataclass(frozen=True)
class PAdicCharacterApprox:
    """Finite-level approximation of a p-adic character of the torus.

    The character is pinned modulo p^m (p - 1) by an integer representative
    weight at level ``m``; an optional finite-order twist may be attached per
    (place, index).  Every claim made about the character is a claim modulo
    p^{m+1}.
    """

    representative: Weight
    level: int
    twists: Optional[tuple] = None
    symmetric: bool = True

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("character level must be >= 1")
        if self.symmetric and not is_symmetric(self.representative):
            raise ValueError("declared symmetric but the representative is not")


# ---------------------------------------------------------------------------
# desk-scale enumeration helpers used by the verification sweeps


def _dominant_pairs(a_plus: int, a_minus: int, d: int):
    """Weakly decreasing nonnegative vectors of the two blocks, sums both d."""

    def partitions_into(length: int, total: int, bound: int):
        if length == 0:
            if total == 0:
                yield ()
            return
        for first in range(min(total, bound), -1, -1):
            for rest in partitions_into(length - 1, total - first, first):
                yield (first,) + rest

    for plus in partitions_into(a_plus, d, d):
        for minus in partitions_into(a_minus, d, d):
            yield plus + minus


def sum_symmetric_weights(sig: Signature, max_depth: int):
    """All sum-symmetric weights of total depth <= max_depth, canonical order."""
    per_place = []
    for place in range(sig.num_places):
        a_plus, a_minus = sig.places[place]
        options = []
        for d in range(0, max_depth + 1):
            options.extend(_dominant_pairs(a_plus, a_minus, d))
        per_place.append(options)
    for combo in itertools.product(*per_place):
        kappa = Weight(sig, tuple(combo))
        flag, depth = is_sum_symmetric(kappa)
        if flag and depth <= max_depth:
            yield kappa


def symmetric_weights(sig: Signature, entry_cap: int):
    """All symmetric weights with entries <= entry_cap, canonical order.

    A symmetric weight is determined per place by a weakly decreasing
    nonnegative vector of length min(a_+, a_-): the mirror condition forces
    the remaining entries of both blocks to zero.
    """

    def decreasing(length: int, bound: int):
        if length == 0:
            yield ()
            return
        for first in range(bound, -1, -1):
            for rest in decreasing(length - 1, first):
                yield (first,) + rest

    per_place = []
    for place in range(sig.num_places):
        a_plus, a_minus = sig.places[place]
        s = min(a_plus, a_minus)
        options = []
        for core in decreasing(s, entry_cap):
            plus = core + (0,) * (a_plus - s)
            minus = core + (0,) * (a_minus - s)
            options.append(plus + minus)
        per_place.append(options)
    for combo in itertools.product(*per_place):
        kappa = Weight(sig, tuple(combo))
        assert is_symmetric(kappa)
        yield kappa


def signatures_up_to(n_max: int, max_places: int = 2):
    """All signatures with 2 <= n <= n_max and at most max_places places."""
    for n in range(2, n_max + 1):
        pairs = [(a, n - a) for a in range(0, n + 1)]
        for r in range(1, max_places + 1):
            for combo in itertools.product(pairs, repeat=r):
                yield Signature(combo)


def signature_partitions(sig: Signature, max_parts: int = 4):
    """Ordered partitions of a signature into nonzero parts (plus the trivial one).

    Parts are cut independently in the + and - blocks per place; a part must
    be nonzero in at least one place.
    """

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    seen = set()
    for s in range(1, max_parts + 1):
        per_place_options = []
        for place in range(sig.num_places):
            a_plus, a_minus = sig.places[place]
            options = [(cp, cm)
                       for cp in compositions(a_plus, s)
                       for cm in compositions(a_minus, s)]
            per_place_options.append(options)
        for combo in itertools.product(*per_place_options):
            parts = []
            ok = True
            for q in range(s):
                pairs = tuple((combo[place][0][q], combo[place][1][q])
                              for place in range(sig.num_places))
                totals = {a + b for a, b in pairs}
                if len(totals) != 1 or totals == {0}:
                    ok = False
                    break
                parts.append(Signature(pairs))
            if not ok:
                continue
            candidate = PartitionedSignature(tuple(parts))
            if candidate in seen:
                continue
            seen.add(candidate)
            yield candidate
