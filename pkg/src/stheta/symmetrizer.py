"""Young symmetrizers and the canonical highest-weight functional.

The canonical functional attached to a sum-symmetric weight kappa is an
integer linear combination of tuples of Serre-Tate variable labels.  It is
computed by acting with the generalized Young symmetrizer on the canonical
tensor word of dual basis vectors, restricting to the paired-variable
summand, and dividing by the product of entry factorials.

Conventions (fixed here, validated by the test suite against the worked
(2,2) example and the unit-coefficient claim):

* canonical tableau: rows filled left to right, top to bottom, blocks
  ordered (place, +) then (place, -) in place order;
* the symmetric group acts on tensor words on the right by permuting
  factors, and the row symmetrizer is applied to the word first; since the
  canonical word is constant along rows, that application contributes
  exactly the factor prod kappa_i! which the normalization divides out;
* tuples of labels are stored sorted; the distinct orderings of one tuple
  always carry a single sign (or cancel outright), which becomes the stored
  unit coefficient, while the number of orderings is kept separately in
  ``class_orders``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .padic import factorial_exact
from .series import VarLabel
from .weights import Signature, Weight, is_sum_symmetric


# ---------------------------------------------------------------------------
# symmetric group algebra


def perm_sign(perm: tuple) -> int:
    """Sign of a permutation given as a tuple of images of 0..d-1."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def perm_compose(g: tuple, h: tuple) -> tuple:
    """g after h in the sense (g * h)[k] = g[h[k]], matching the right action."""
    return tuple(g[h[k]] for k in range(len(g)))


def word_act(word: tuple, perm: tuple) -> tuple:
    """Right action on tensor words: position k receives factor perm[k]."""
    return tuple(word[perm[k]] for k in range(len(word)))


@dataclass(frozen=True)
class GroupAlgebraElement:
    """Finite integer combination of permutations of {0..d-1}."""

    d: int
    coeffs: Mapping

    def __post_init__(self):
        clean = {}
        for perm, c in self.coeffs.items():
            perm = tuple(perm)
            if sorted(perm) != list(range(self.d)):
                raise ValueError("not a permutation")
            c = int(c)
            if c:
                clean[perm] = c
        object.__setattr__(self, "coeffs", clean)

    @staticmethod
    def identity(d: int) -> "GroupAlgebraElement":
        return GroupAlgebraElement(d, {tuple(range(d)): 1})

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if self.d != other.d:
            raise ValueError("mixed symmetric groups")
        coeffs = dict(self.coeffs)
        for perm, c in other.coeffs.items():
            coeffs[perm] = coeffs.get(perm, 0) + c
        return GroupAlgebraElement(self.d, coeffs)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        """Product with w . (a * b) = (w . a) . b for the right word action."""
        if self.d != other.d:
            raise ValueError("mixed symmetric groups")
        coeffs = {}
        for g, cg in self.coeffs.items():
            for h, ch in other.coeffs.items():
                k = perm_compose(g, h)
                coeffs[k] = coeffs.get(k, 0) + cg * ch
        return GroupAlgebraElement(self.d, coeffs)

    def scale(self, k: int) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.d, {p: c * k for p, c in self.coeffs.items()})

    def apply_to_word(self, word: tuple) -> dict:
        """Resulting word -> integer coefficient after the right action."""
        out = {}
        for perm, c in self.coeffs.items():
            w = word_act(word, perm)
            out[w] = out.get(w, 0) + c
        return {w: c for w, c in out.items() if c}

    def is_multiple_of(self, other: "GroupAlgebraElement"):
        """Return k with self = k * other, or None."""
        if not other.coeffs:
            return 0 if not self.coeffs else None
        perm, base = next(iter(other.coeffs.items()))
        c = self.coeffs.get(perm, 0)
        if c % base:
            return None
        k = c // base
        return k if self == other.scale(k) else None


# ---------------------------------------------------------------------------
# tableaux


def tableau_rows(partition: tuple) -> list:
    """Row-major canonical tableau; returns rows of 0-based cell positions."""
    rows, pos = [], 0
    for length in partition:
        rows.append(list(range(pos, pos + length)))
        pos += length
    return rows


def tableau_columns(partition: tuple) -> list:
    rows = tableau_rows(partition)
    width = max((len(r) for r in rows), default=0)
    return [[row[c] for row in rows if len(row) > c] for c in range(width)]


def _group_from_cells(cells: list, d: int, signed: bool):
    """All permutations of {0..d-1} moving each listed cell set within itself."""
    perms = [tuple(range(d))] if not cells else None
    blocks = [list(itertools.permutations(cell)) for cell in cells]
    out = []
    for choice in itertools.product(*blocks) if cells else [()]:
        perm = list(range(d))
        for cell, image in zip(cells, choice):
            for src, dst in zip(cell, image):
                perm[src] = dst
        perm = tuple(perm)
        out.append((perm, perm_sign(perm) if signed else 1))
    return out


def row_symmetrizer(partition: tuple, d: int) -> GroupAlgebraElement:
    cells = [row for row in tableau_rows(partition) if len(row) > 1]
    return GroupAlgebraElement(d, dict(_group_from_cells(cells, d, signed=False)))


def column_antisymmetrizer(partition: tuple, d: int) -> GroupAlgebraElement:
    cells = [col for col in tableau_columns(partition) if len(col) > 1]
    return GroupAlgebraElement(d, dict(_group_from_cells(cells, d, signed=True)))


def young_symmetrizer(partition: tuple, d: int) -> GroupAlgebraElement:
    """Quasi-idempotent symmetrizer of the canonical row-major tableau.

    Composed so that, under the right action on words, the row symmetrizer
    acts first and the signed column group second.
    """
    partition = tuple(int(x) for x in partition)
    if any(x < 0 for x in partition) or sum(partition) != d:
        raise ValueError("partition must consist of nonnegative parts summing to d")
    return row_symmetrizer(partition, d) * column_antisymmetrizer(partition, d)


# ---------------------------------------------------------------------------
# the canonical functional


@dataclass(frozen=True)
class SymmetrizedFunctional:
    """Unit-coefficient combination of sorted label tuples.

    ``terms`` maps each canonically sorted tuple to its coefficient in
    {-1, +1}; tuples whose orderings cancel are absent.  ``class_orders``
    records, for each stored tuple, how many distinct orderings carried that
    coefficient in the raw expansion; the multiplicity-weighted evaluation
    (see :meth:`weighted_apply`) recovers the un-normalized expansion.
    """

    sig: Signature
    depth: int
    terms: Mapping
    weight: Weight = None
    class_orders: Mapping = field(default_factory=dict)

    def __post_init__(self):
        terms = {tuple(t): int(c) for t, c in self.terms.items()}
        for t, c in terms.items():
            if tuple(sorted(t)) != t:
                raise ValueError("tuples must be stored sorted")
            if len(t) != self.depth:
                raise ValueError("tuple length differs from depth")
            if c not in (-1, 1):
                raise ValueError("stored coefficients must be +-1")
        object.__setattr__(self, "terms", terms)
        orders = {tuple(t): int(k) for t, k in self.class_orders.items()}
        if orders and set(orders) != set(terms):
            raise ValueError("class_orders must cover exactly the stored tuples")
        object.__setattr__(self, "class_orders",
                           orders or {t: 1 for t in terms})

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "terms": [{"tuple": [l.to_json() for l in t], "coeff": c}
                      for t, c in self.sorted_terms()],
        }


def apply_functional(functional: SymmetrizedFunctional, alpha: Mapping) -> int:
    """Eigenvalue sum_t coeff(t) * prod_k alpha(t_k) as an exact integer.

    ``alpha`` maps variable labels to nonnegative integers; missing labels
    count as zero.  This is the definitional (oracle) form of the eigenvalue
    polynomial of the functional's theta operator.
    """
    total = 0
    for t, coeff in functional.terms.items():
        prod = coeff
        for label in t:
            prod *= alpha.get(label, 0)
            if prod == 0:
                break
        total += prod
    return total


def weighted_apply(functional: SymmetrizedFunctional, alpha: Mapping) -> int:
    """Like :func:`apply_functional` but weighted by ordering multiplicities."""
    total = 0
    for t, coeff in functional.terms.items():
        prod = coeff * functional.class_orders[t]
        for label in t:
            prod *= alpha.get(label, 0)
            if prod == 0:
                break
        total += prod
    return total


def _signed_column_group(partition: tuple):
    """(permutation, sign) pairs of the column group, as local tuples."""
    d = sum(partition)
    cells = [col for col in tableau_columns(partition) if len(col) > 1]
    return _group_from_cells(cells, d, signed=True)


def lcan_ordered(kappa: Weight) -> dict:
    """Raw expansion of the canonical functional over ordered label tuples.

    Returns a map from ordered tuples (place-major entry order) to
    coefficients; by construction each ordered tuple arises from exactly one
    signed column-group element, so all values lie in {-1, +1}.
    """
    flag, depth = is_sum_symmetric(kappa)
    if not flag:
        raise ValueError("functional does not restrict to the paired-variable "
                         "summand: weight is not sum-symmetric")
    sig = kappa.sig

    place_data = []
    for place in range(sig.num_places):
        a_plus = sig.a_plus(place)
        vec = kappa.entries[place]
        plus_word = tuple(i for i in range(1, a_plus + 1)
                          for _ in range(vec[i - 1]))
        minus_word = tuple(j for j in range(a_plus + 1, sig.n + 1)
                           for _ in range(vec[j - 1]))
        plus_group = _signed_column_group(vec[:a_plus])
        minus_group = _signed_column_group(vec[a_plus:])
        place_data.append((plus_word, minus_word, plus_group, minus_group))

    # The full symmetrizer is (row group) * (signed column group).  The
    # canonical word is fixed by every row permutation, so the row factor is
    # the exact integer prod kappa_i!, divided out below against the same
    # normalization; only the signed column group needs enumerating.
    row_order = 1
    norm = 1
    for vec in kappa.entries:
        for entry in vec:
            row_order *= factorial_exact(entry)
            norm *= factorial_exact(entry)

    ordered = {}
    per_place_choices = []
    for plus_word, minus_word, plus_group, minus_group in place_data:
        choices = []
        for (qp, sp), (qm, sm) in itertools.product(plus_group, minus_group):
            pw = word_act(plus_word, qp)
            mw = word_act(minus_word, qm)
            choices.append((pw, mw, sp * sm))
        per_place_choices.append(choices)

    for combo in itertools.product(*per_place_choices):
        entries = []
        sign = 1
        for place, (pw, mw, s) in enumerate(combo):
            sign *= s
            entries.extend(VarLabel(place, i, j) for i, j in zip(pw, mw))
        t = tuple(entries)
        numerator = sign * row_order
        if numerator % norm:
            raise AssertionError("factorial normalization failed to divide exactly")
        coeff = numerator // norm
        if t in ordered:
            raise AssertionError("ordered tuple produced twice; convention error")
        ordered[t] = coeff
    return ordered


def lcan_expand(kappa: Weight) -> SymmetrizedFunctional:
    """Canonical highest-weight functional of a sum-symmetric weight.

    The ordered expansion is collapsed onto sorted tuples: the orderings of
    one tuple either all carry a single sign, which is stored, or they cancel
    exactly and the tuple is dropped.  A sum-symmetric weight that is not
    symmetric cancels completely, giving the zero functional.
    """
    ordered = lcan_ordered(kappa)
    _, depth = is_sum_symmetric(kappa)

    classes = {}
    for t, coeff in ordered.items():
        classes.setdefault(tuple(sorted(t)), []).append(coeff)

    terms, orders = {}, {}
    for t, coeffs in sorted(classes.items()):
        values = set(coeffs)
        if len(values) == 1:
            terms[t] = coeffs[0]
            orders[t] = len(coeffs)
        elif sum(coeffs) == 0:
            continue
        else:
            raise AssertionError(
                f"orderings of {t} carry inconsistent coefficients {coeffs}")
    return SymmetrizedFunctional(kappa.sig, depth, terms, kappa, orders)


def functional_product(f: SymmetrizedFunctional,
                       g: SymmetrizedFunctional) -> SymmetrizedFunctional:
    """Concatenation-of-tuples product, canonically reordered.

    Collisions of sorted tuples must agree in sign (they do for canonical
    functionals); ordering multiplicities accumulate additively across the
    colliding pairs.
    """
    if f.sig != g.sig:
        raise ValueError("signature mismatch")
    merged = {}
    for tf, cf in f.terms.items():
        for tg, cg in g.terms.items():
            t = tuple(sorted(tf + tg))
            coeff = cf * cg
            count = f.class_orders[tf] * g.class_orders[tg]
            if t in merged:
                prev_coeff, prev_count = merged[t]
                if prev_coeff != coeff:
                    raise AssertionError(
                        f"colliding products disagree in sign at {t}")
                merged[t] = (coeff, prev_count + count)
            else:
                merged[t] = (coeff, count)
    weight = None
    if f.weight is not None and g.weight is not None:
        weight = f.weight.mul(g.weight)
    return SymmetrizedFunctional(
        f.sig, f.depth + g.depth,
        {t: c for t, (c, _n) in merged.items()},
        weight,
        {t: n for t, (_c, n) in merged.items()})


def unit_functional(sig: Signature) -> SymmetrizedFunctional:
    """Depth-0 functional acting as the constant 1 (the empty tuple)."""
    return SymmetrizedFunctional(sig, 0, {(): 1}, None, {(): 1})
