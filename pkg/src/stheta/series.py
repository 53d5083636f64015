"""Truncated multivariate series in Serre-Tate variables over Z/p^M.

Variables t_l are indexed by labels l = (place, i, j) coupling a row of the
+ block (1 <= i <= a_+) with a column of the - block (a_+ < j <= n).  The
primary representation is the *shifted* basis

    f = sum_alpha c_alpha (1 + t)^alpha,

in which every theta operator acts diagonally.  The plain monomial basis
exists for substitution cross-checks and display.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .padic import PAdicInt, RingCtx
from .weights import Signature


class VarLabel(NamedTuple):
    """Serre-Tate variable label l^tau_{i,j}; 1-based i <= a_+ < j <= n."""

    place: int
    i: int
    j: int

    def to_json(self) -> list:
        return [self.place, self.i, self.j]


def variable_labels(sig: Signature) -> tuple:
    """All variable labels of a signature in canonical (place, i, j) order."""
    labels = []
    for place in range(sig.num_places):
        a_plus = sig.a_plus(place)
        for i in range(1, a_plus + 1):
            for j in range(a_plus + 1, sig.n + 1):
                labels.append(VarLabel(place, i, j))
    return tuple(labels)


def check_label(sig: Signature, label: VarLabel) -> None:
    a_plus = sig.a_plus(label.place)
    if not (0 < label.i <= a_plus < label.j <= sig.n):
        raise ValueError(f"label {label} out of range for signature {sig.places}")


def alpha_map(vars_: tuple, alpha: tuple) -> dict:
    """Exponent tuple (relative to ``vars_``) as a label -> exponent mapping."""
    return {l: a for l, a in zip(vars_, alpha) if a}


def _zeros(n: int) -> tuple:
    return (0,) * n


@dataclass(frozen=True)
class ShiftedSeries:
    """Finite sum of c_alpha (1 + t)^alpha with coefficients in Z/p^M.

    ``vars`` fixes the variable universe and the exponent-tuple layout;
    ``terms`` maps exponent tuples to nonzero coefficients.  ``truncated``
    records that some multiplication dropped terms beyond the degree cap.
    Instances are immutable; all operations return new series.
    """

    ctx: RingCtx
    vars: tuple
    terms: Mapping
    cap: int = 8
    truncated: bool = False

    def __post_init__(self):
        clean = {}
        for alpha, coeff in self.terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != len(self.vars):
                raise ValueError("exponent tuple length mismatch")
            if any(a < 0 for a in alpha):
                raise ValueError("negative exponent")
            if sum(alpha) > self.cap:
                raise ValueError("term exceeds degree cap")
            if not isinstance(coeff, PAdicInt):
                coeff = self.ctx(int(coeff))
            if coeff.residue:
                clean[alpha] = coeff
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx: RingCtx, vars_: tuple, cap: int = 8) -> "ShiftedSeries":
        return ShiftedSeries(ctx, vars_, {}, cap)

    @staticmethod
    def constant(ctx: RingCtx, vars_: tuple, value: int, cap: int = 8) -> "ShiftedSeries":
        return ShiftedSeries(ctx, vars_, {_zeros(len(vars_)): ctx(value)}, cap)

    @staticmethod
    def shifted_power(ctx: RingCtx, vars_: tuple, exponents: Mapping,
                      cap: int = 8, coeff: int = 1) -> "ShiftedSeries":
        """coeff * (1 + t)^alpha for alpha given as a label -> exponent map."""
        alpha = tuple(int(exponents.get(l, 0)) for l in vars_)
        return ShiftedSeries(ctx, vars_, {alpha: ctx(coeff)}, cap)

    # -- basic algebra -----------------------------------------------------

    def _check(self, other: "ShiftedSeries") -> None:
        if self.ctx != other.ctx or self.vars != other.vars or self.cap != other.cap:
            raise ValueError("series context mismatch")

    def __add__(self, other: "ShiftedSeries") -> "ShiftedSeries":
        self._check(other)
        terms = dict(self.terms)
        for alpha, coeff in other.terms.items():
            acc = terms.get(alpha)
            terms[alpha] = coeff if acc is None else acc + coeff
        return ShiftedSeries(self.ctx, self.vars, terms, self.cap,
                             self.truncated or other.truncated)

    def __neg__(self) -> "ShiftedSeries":
        return self.map_coefficients(lambda c, _alpha: -c)

    def __sub__(self, other: "ShiftedSeries") -> "ShiftedSeries":
        return self + (-other)

    def __mul__(self, other: "ShiftedSeries") -> "ShiftedSeries":
        """Convolution in alpha; (1+t)^a (1+t)^b = (1+t)^{a+b}.

        Products beyond the degree cap are dropped and flagged.
        """
        self._check(other)
        terms = {}
        dropped = False
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                s = tuple(x + y for x, y in zip(a, b))
                if sum(s) > self.cap:
                    dropped = True
                    continue
                prod = ca * cb
                acc = terms.get(s)
                terms[s] = prod if acc is None else acc + prod
        return ShiftedSeries(self.ctx, self.vars, terms, self.cap,
                             self.truncated or other.truncated or dropped)

    def scale(self, k: int) -> "ShiftedSeries":
        return self.map_coefficients(lambda c, _alpha: c.scale(k))

    def map_coefficients(self, fn) -> "ShiftedSeries":
        """Apply ``fn(coeff, alpha_as_label_map) -> PAdicInt`` to every term."""
        terms = {}
        for alpha, coeff in self.terms.items():
            terms[alpha] = fn(coeff, alpha_map(self.vars, alpha))
        return ShiftedSeries(self.ctx, self.vars, terms, self.cap, self.truncated)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShiftedSeries):
            return NotImplemented
        return (self.ctx == other.ctx and self.vars == other.vars
                and dict(self.terms) == dict(other.terms))

    def congruent(self, other: "ShiftedSeries", m: int) -> bool:
        """Coefficientwise congruence mod p^m over the union of supports."""
        self._check(other)
        zero = self.ctx.zero()
        for alpha in set(self.terms) | set(other.terms):
            a = self.terms.get(alpha, zero)
            b = other.terms.get(alpha, zero)
            if not a.congruent(b, m):
                return False
        return True

    # -- theta, restriction, relabeling ------------------------------------

    def theta_elementary(self, label: VarLabel) -> "ShiftedSeries":
        """(1 + t_l) d/dt_l, which is c_alpha -> alpha(l) c_alpha here."""
        pos = self.vars.index(label)
        return ShiftedSeries(
            self.ctx, self.vars,
            {alpha: coeff.scale(alpha[pos]) for alpha, coeff in self.terms.items()},
            self.cap, self.truncated)

    def restrict_vars(self, keep) -> "ShiftedSeries":
        """Set t_l = 0 for every variable not in ``keep``.

        In the shifted basis this folds c_alpha into the coefficient of the
        kept part of alpha: (1 + t)^alpha |-> (1 + t)^{alpha restricted}.
        """
        keep = set(keep)
        if not keep <= set(self.vars):
            raise ValueError("keep-set contains foreign variables")
        new_vars = tuple(l for l in self.vars if l in keep)
        positions = [self.vars.index(l) for l in new_vars]
        terms = {}
        for alpha, coeff in self.terms.items():
            restricted = tuple(alpha[p] for p in positions)
            acc = terms.get(restricted)
            terms[restricted] = coeff if acc is None else acc + coeff
        return ShiftedSeries(self.ctx, new_vars, terms, self.cap, self.truncated)

    def weyl_act(self, var_map: Mapping) -> "ShiftedSeries":
        """Relabel variables along a bijection of the variable universe."""
        if set(var_map) != set(self.vars) or set(var_map.values()) != set(self.vars):
            raise ValueError("relabeling must be a bijection of the variables")
        index_of = {l: k for k, l in enumerate(self.vars)}
        terms = {}
        for alpha, coeff in self.terms.items():
            moved = [0] * len(self.vars)
            for pos, l in enumerate(self.vars):
                moved[index_of[var_map[l]]] = alpha[pos]
            terms[tuple(moved)] = coeff
        return ShiftedSeries(self.ctx, self.vars, terms, self.cap, self.truncated)

    # -- conversions & serialization ----------------------------------------

    def to_monomial(self) -> "MonomialSeries":
        """Expand every (1 + t)^alpha with exact binomials."""
        terms = {}
        for alpha, coeff in self.terms.items():
            for beta, mult in _binomial_expansions(alpha):
                acc = terms.get(beta)
                add = coeff.scale(mult)
                terms[beta] = add if acc is None else acc + add
        return MonomialSeries(self.ctx, self.vars, terms, self.cap, self.truncated)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {
            "basis": "shifted",
            "p": self.ctx.p,
            "M": self.ctx.M,
            "degree_cap": self.cap,
            "truncated": self.truncated,
            "vars": [l.to_json() for l in self.vars],
            "terms": [{"alpha": list(alpha), "coeff": str(coeff.residue)}
                      for alpha, coeff in self.sorted_terms()],
        }

    @staticmethod
    def from_json(obj: dict, ctx: RingCtx = None) -> "ShiftedSeries":
        if obj.get("basis") != "shifted":
            raise ValueError("expected a shifted-basis series")
        if ctx is None:
            ctx = RingCtx(int(obj["p"]), int(obj["M"]))
        vars_ = tuple(VarLabel(*entry) for entry in obj["vars"])
        terms = {tuple(term["alpha"]): ctx(int(term["coeff"]))
                 for term in obj["terms"]}
        return ShiftedSeries(ctx, vars_, terms, int(obj.get("degree_cap", 8)),
                             bool(obj.get("truncated", False)))


def random_series(ctx: RingCtx, vars_: tuple, cap: int = 8, seed: int = 0,
                  num_terms: int = 6, max_entry: int = 2) -> ShiftedSeries:
    """Deterministic pseudo-random series for witnesses and property sweeps."""
    rng = random.Random(seed)
    terms = {}
    for _ in range(num_terms):
        while True:
            alpha = tuple(rng.randint(0, max_entry) for _ in vars_)
            if sum(alpha) <= cap:
                break
        terms[alpha] = ctx(rng.randrange(1, ctx.modulus))
    return ShiftedSeries(ctx, vars_, terms, cap)


def _binomial_expansions(alpha: tuple):
    """All (beta, prod C(alpha_i, beta_i)) with beta <= alpha componentwise."""

    def rec(k: int):
        if k == len(alpha):
            yield (), 1
            return
        for rest, mult in rec(k + 1):
            for b in range(alpha[k] + 1):
                yield (b,) + rest, math.comb(alpha[k], b) * mult

    yield from rec(0)


@dataclass(frozen=True)
class MonomialSeries:
    """The same data in the plain t^beta basis; conversion target only."""

    ctx: RingCtx
    vars: tuple
    terms: Mapping
    cap: int = 8
    truncated: bool = False

    def __post_init__(self):
        clean = {}
        for beta, coeff in self.terms.items():
            beta = tuple(int(b) for b in beta)
            if sum(beta) > self.cap:
                raise ValueError("term exceeds degree cap")
            if not isinstance(coeff, PAdicInt):
                coeff = self.ctx(int(coeff))
            if coeff.residue:
                clean[beta] = coeff
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonomialSeries):
            return NotImplemented
        return (self.ctx == other.ctx and self.vars == other.vars
                and dict(self.terms) == dict(other.terms))

    def __mul__(self, other: "MonomialSeries") -> "MonomialSeries":
        if self.ctx != other.ctx or self.vars != other.vars or self.cap != other.cap:
            raise ValueError("series context mismatch")
        terms = {}
        dropped = False
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                s = tuple(x + y for x, y in zip(a, b))
                if sum(s) > self.cap:
                    dropped = True
                    continue
                prod = ca * cb
                acc = terms.get(s)
                terms[s] = prod if acc is None else acc + prod
        return MonomialSeries(self.ctx, self.vars, terms, self.cap,
                              self.truncated or other.truncated or dropped)

    def substitute_zero(self, drop) -> "MonomialSeries":
        """Set t_l = 0 for l in ``drop``: delete terms using those variables."""
        drop = set(drop)
        keep_positions = [k for k, l in enumerate(self.vars) if l not in drop]
        new_vars = tuple(self.vars[k] for k in keep_positions)
        terms = {}
        for beta, coeff in self.terms.items():
            if any(beta[k] for k, l in enumerate(self.vars) if l in drop):
                continue
            terms[tuple(beta[k] for k in keep_positions)] = coeff
        return MonomialSeries(self.ctx, new_vars, terms, self.cap, self.truncated)

    def to_shifted(self, cap: int = None) -> ShiftedSeries:
        """Invert the binomial change of basis: t^beta = ((1+t) - 1)^beta."""
        cap = self.cap if cap is None else cap
        terms = {}
        for beta, coeff in self.terms.items():
            for gamma, mult in _binomial_expansions(beta):
                sign = -1 if (sum(beta) - sum(gamma)) % 2 else 1
                add = coeff.scale(sign * mult)
                acc = terms.get(gamma)
                terms[gamma] = add if acc is None else acc + add
        return ShiftedSeries(self.ctx, self.vars, terms, cap, self.truncated)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {
            "basis": "monomial",
            "p": self.ctx.p,
            "M": self.ctx.M,
            "degree_cap": self.cap,
            "truncated": self.truncated,
            "vars": [l.to_json() for l in self.vars],
            "terms": [{"alpha": list(beta), "coeff": str(coeff.residue)}
                      for beta, coeff in self.sorted_terms()],
        }
