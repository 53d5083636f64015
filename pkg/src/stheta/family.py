"""Desk-scale model of the Eisenstein coefficient functional and its measure.

The CM coefficient field is modeled at a split prime: O_K tensor Z_p is a
product of two copies of Z/p^M, with conjugation swapping the factors.
Coefficient tables of the explicit family are indexed by positive Hermitian
exponent matrices; theta operators act diagonally on them exactly as on
shifted series, with the exponent matrix in place of the variable exponents.
Kummer congruences between linear combinations of moments certify the
measure at finite precision.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .padic import PAdicInt, RingCtx
from .pullback import build_restriction
from .series import VarLabel
from .theta import (CharacterZeta, FiniteOrderCharacter, det_int,
                    functional_of, phi_zeta_blocks)
from .symmetrizer import apply_functional
from .weights import Signature, Weight, is_symmetric


@dataclass(frozen=True)
class ToyCMContext:
    """Split-prime model of O_K tensor Z_p: a product of two copies of Z/p^M.

    Elements are integer pairs (first factor, second factor); conjugation
    swaps them, so the relative norm is the componentwise product pushed to
    the diagonal.  The finite group of global units is modeled by the
    torsion pairs (u, u^{-1}) with u of order dividing p - 1.
    """

    ctx: RingCtx

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def modulus(self) -> int:
        return self.ctx.modulus

    def reduce(self, x) -> tuple:
        return (x[0] % self.modulus, x[1] % self.modulus)

    def conj(self, x) -> tuple:
        return (x[1] % self.modulus, x[0] % self.modulus)

    def mul(self, x, y) -> tuple:
        return ((x[0] * y[0]) % self.modulus, (x[1] * y[1]) % self.modulus)

    def inv(self, x) -> tuple:
        return (pow(x[0], -1, self.modulus), pow(x[1], -1, self.modulus))

    def is_unit(self, x) -> bool:
        return x[0] % self.p != 0 and x[1] % self.p != 0

    def norm(self, x) -> int:
        """Relative norm x * conj(x), landing in the diagonal copy of Z/p^M."""
        return (x[0] * x[1]) % self.modulus

    def global_units(self) -> list:
        """Torsion pairs (u, u^{-1}) with u ranging over the order-(p-1) subgroup."""
        proj = self.p ** (self.ctx.M - 1)
        roots = sorted({pow(a, proj, self.modulus) for a in range(1, self.p)})
        return [(u, pow(u, -1, self.modulus)) for u in roots]

    def random_unit(self, rng: random.Random) -> tuple:
        while True:
            x = (rng.randrange(self.modulus), rng.randrange(self.modulus))
            if self.is_unit(x):
                return x


def norm_knu(b, k: int, nu: int, toy: ToyCMContext) -> PAdicInt:
    """sigma(b)^k (sigma(b) / conj-sigma(b))^nu in Z/p^M."""
    ctx = toy.ctx
    b1, b2 = toy.reduce(b)
    if (k < 0 or nu != 0) and not toy.is_unit(b):
        raise ZeroDivisionError("non-unit with negative exponent")
    value = ctx(pow(b1, k, toy.modulus)) if k >= 0 else ctx(b1).inv() ** (-k)
    if nu:
        ratio = ctx(b1) * ctx(b2).inv()
        value = value * ratio ** nu
    return value


@dataclass(frozen=True)
class UnitCharacter:
    """Character of the toy unit group: exponents on both factors plus twists."""

    a: int
    b: int
    twist1: Optional[FiniteOrderCharacter] = None
    twist2: Optional[FiniteOrderCharacter] = None

    @staticmethod
    def from_infinity_type(k: int, nu: int) -> "UnitCharacter":
        """The character extending the norm form of the same (k, nu)."""
        return UnitCharacter(k + nu, -nu)

    def value(self, x, toy: ToyCMContext) -> PAdicInt:
        ctx = toy.ctx
        x1, x2 = toy.reduce(x)
        out = ctx(pow(x1, self.a, toy.modulus)) if self.a >= 0 \
            else ctx(x1).inv() ** (-self.a)
        out = out * (ctx(pow(x2, self.b, toy.modulus)) if self.b >= 0
                     else ctx(x2).inv() ** (-self.b))
        if self.twist1 is not None and not self.twist1.is_trivial():
            out = out * self.twist1.value(x1, ctx)
        if self.twist2 is not None and not self.twist2.is_trivial():
            out = out * self.twist2.value(x2, ctx)
        return out


@dataclass(frozen=True)
class HermitianExponent:
    """Hermitian matrix over the split model, stored by its first components.

    With conjugation swapping the factors, the (i, j) entry is the pair
    (A[i][j], A[j][i]); diagonal entries are conjugation-fixed scalars and
    the determinant lands in the diagonal copy of the base ring.
    """

    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise ValueError("square matrix required")

    @property
    def n(self) -> int:
        return len(self.entries)

    def det(self) -> int:
        return det_int([list(row) for row in self.entries])

    def leading_minors(self) -> list:
        return [det_int([list(row[:i]) for row in self.entries[:i]])
                for i in range(1, self.n + 1)]

    def is_positive(self) -> bool:
        return all(m > 0 for m in self.leading_minors())

    def transpose(self) -> "HermitianExponent":
        return HermitianExponent(tuple(zip(*self.entries)))

    def scaled_mod(self, scalar: int, modulus: int):
        return [[(scalar * x) % modulus for x in row] for row in self.entries]

    def exponent_map(self) -> dict:
        """Serre-Tate exponents for the doubled signature (n, n), one place."""
        n = self.n
        return {VarLabel(0, i, n + r + 1): self.entries[r][i - 1]
                for i in range(1, n + 1) for r in range(n)
                if self.entries[r][i - 1]}

    def to_json(self) -> list:
        return [list(row) for row in self.entries]


def doubled_signature(n: int) -> Signature:
    return Signature(((n, n),))


def enumerate_hermitian(n: int, cap: int) -> list:
    """Positive Hermitian exponents with entries of height <= cap, lex order."""
    if cap <= 0:
        return []
    if n == 1:
        return [HermitianExponent(((d,),)) for d in range(1, cap + 1)]
    if n == 2:
        out = []
        for d1, d2 in itertools.product(range(1, cap + 1), repeat=2):
            for x12, x21 in itertools.product(range(-cap, cap + 1), repeat=2):
                cand = HermitianExponent(((d1, x12), (x21, d2)))
                if cand.is_positive():
                    out.append(cand)
        return out
    raise ValueError("Hermitian enumeration implemented for n <= 2")


@dataclass(frozen=True)
class FData:
    """Data cut out the coefficient functional of the explicit family."""

    k: int
    nu: int
    chi_u: UnitCharacter
    zeta: CharacterZeta
    level: int = 1

    def __post_init__(self):
        if self.zeta.sig.num_places != 1:
            raise ValueError("family model works at a single place")


def build_F(data: FData, toy: ToyCMContext, validate: bool = True) -> Callable:
    """Coefficient kernel F(x, y) = chi_u(x) phi_zeta(norm(x) y^T), extended by 0.

    Support is the unit pairs x and the matrices y whose leading minors are
    all units.  With ``validate`` the unit character is checked to restrict
    on the toy global units to the norm form of (k, nu), which is exactly
    what makes the transformation law hold.
    """
    ctx = toy.ctx
    if validate:
        for e in toy.global_units():
            lhs = data.chi_u.value(e, toy)
            rhs = norm_knu(e, data.k, data.nu, toy)
            if lhs != rhs:
                raise ValueError(
                    "chi_u is incompatible with the norm form on global units")

    n = data.zeta.sig.a_plus(0)

    def F(x, y) -> PAdicInt:
        if not toy.is_unit(x):
            return ctx.zero()
        rows = [[int(v) % toy.modulus for v in row] for row in y]
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError("matrix argument of wrong size")
        scalar = toy.norm(x)
        arg = [[(scalar * rows[c][r]) % toy.modulus for c in range(n)]
               for r in range(n)]  # norm(x) * transpose(y)
        value = phi_zeta_blocks(data.zeta, [arg], ctx)
        if value.residue == 0:
            return ctx.zero()
        return data.chi_u.value(x, toy) * value

    return F


def coefficient(alpha: HermitianExponent, a_set: Sequence, data: FData,
                toy: ToyCMContext) -> PAdicInt:
    """Sum over a of F(a, norm(a)^{-1} alpha) N_{k,nu}(a^{-1} det) N(det)^{-n}.

    Zero whenever det alpha is not a p-adic unit, matching the support of F.
    """
    ctx = toy.ctx
    det = alpha.det()
    if det % toy.p == 0:
        return ctx.zero()
    F = build_F(data, toy, validate=False)
    det_inv_n = (ctx(det).inv()) ** alpha.n
    total = ctx.zero()
    for a in a_set:
        a = toy.reduce(a)
        if not toy.is_unit(a):
            continue
        y = alpha.scaled_mod(pow(toy.norm(a), -1, toy.modulus), toy.modulus)
        dd = (det % toy.modulus, det % toy.modulus)
        factor = norm_knu(toy.mul(toy.inv(a), dd), data.k, data.nu, toy)
        total = total + F(a, y) * factor * det_inv_n
    return total


@dataclass(frozen=True)
class QExpansion:
    """Finite coefficient table over positive Hermitian exponents."""

    ctx: RingCtx
    n: int
    terms: Mapping
    meta: tuple = ()

    def __post_init__(self):
        clean = {}
        for key, coeff in self.terms.items():
            if not isinstance(key, HermitianExponent):
                key = HermitianExponent(key)
            if not isinstance(coeff, PAdicInt):
                coeff = self.ctx(int(coeff))
            if coeff.residue:
                clean[key] = coeff
        object.__setattr__(self, "terms", clean)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.ctx == other.ctx and dict(self.terms) == dict(other.terms)

    def congruent(self, other: "QExpansion", m: int) -> bool:
        zero = self.ctx.zero()
        for key in set(self.terms) | set(other.terms):
            a = self.terms.get(key, zero)
            b = other.terms.get(key, zero)
            if not a.congruent(b, m):
                return False
        return True

    def combine(self, other: "QExpansion", b_self: int = 1, b_other: int = 1):
        terms = {}
        for key in set(self.terms) | set(other.terms):
            zero = self.ctx.zero()
            terms[key] = (self.terms.get(key, zero).scale(b_self)
                          + other.terms.get(key, zero).scale(b_other))
        return QExpansion(self.ctx, self.n, terms, self.meta)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.ctx.p,
            "M": self.ctx.M,
            "meta": list(self.meta),
            "entries": [{"alpha": key.to_json(), "coeff": str(coeff.residue)}
                        for key, coeff in self.sorted_terms()],
        }


def apply_theta_q(q: QExpansion, kappa: Weight) -> QExpansion:
    """Multiply each coefficient by the eigenvalue polynomial at its exponent."""
    if kappa.sig != doubled_signature(q.n):
        raise ValueError("weight signature must be the doubled (n, n) signature")
    if not is_symmetric(kappa):
        raise ValueError("theta action on coefficient tables needs symmetric weights")
    functional = functional_of(kappa)
    terms = {key: coeff.scale(apply_functional(functional, key.exponent_map()))
             for key, coeff in q.terms.items()}
    return QExpansion(q.ctx, q.n, terms, q.meta)


def res_qexpansion(q: QExpansion, part) -> QExpansion:
    """Restriction along a partition of the doubled signature.

    Exponent entries at dropped variable positions are set to zero and the
    coefficients of colliding keys accumulate, mirroring the shifted-basis
    restriction of series.
    """
    if part is None:
        return q
    keep = build_restriction(part).keep
    n = q.n
    kept_positions = {(label.j - n - 1, label.i - 1) for label in keep}
    terms = {}
    for key, coeff in q.terms.items():
        zeroed = tuple(tuple(key.entries[r][c] if (r, c) in kept_positions else 0
                             for c in range(n)) for r in range(n))
        new_key = HermitianExponent(zeroed)
        acc = terms.get(new_key)
        terms[new_key] = coeff if acc is None else acc + coeff
    return QExpansion(q.ctx, q.n, terms, q.meta + ("restricted",))


@dataclass(frozen=True)
class MomentChar:
    """Character datum of one measure moment: (k, nu, psi, chi_u) plus kappa."""

    k: int
    nu: int
    psi: CharacterZeta
    chi_u: UnitCharacter

    @staticmethod
    def basic(k: int, nu: int, n: int, twists: Mapping = None) -> "MomentChar":
        sig = doubled_signature(n)
        zero = Weight(sig, (tuple([0] * (2 * n)),))
        psi = CharacterZeta.classical(zero, twists)
        return MomentChar(k, nu, psi, UnitCharacter.from_infinity_type(k, nu))


def measure_moment(char: MomentChar, kappa: Weight, bound: int,
                   toy: ToyCMContext, a_set: Sequence = ((1, 1),),
                   part=None) -> QExpansion:
    """Moment table of the measure: res of theta^kappa applied to the family.

    Enumerates positive Hermitian exponents up to the height cap, evaluates
    the coefficient functional built from (chi_u, psi), applies the diagonal
    theta action for kappa, and restricts along the partition (identity by
    default).  The enumeration lattice is a desk-scale stand-in, recorded in
    the table metadata.
    """
    n = kappa.sig.a_plus(0)
    if kappa.sig != doubled_signature(n) or kappa.sig.num_places != 1:
        raise ValueError("kappa must live on the doubled one-place signature")
    if char.k < n:
        raise ValueError("below Eisenstein range")
    if not is_symmetric(kappa):
        raise ValueError("kappa must be symmetric")
    data = FData(char.k, char.nu, char.chi_u, char.psi)
    build_F(data, toy)  # validate chi_u compatibility once per moment
    terms = {}
    for alpha in enumerate_hermitian(n, bound):
        coeff = coefficient(alpha, a_set, data, toy)
        if coeff.residue:
            terms[alpha] = coeff
    table = QExpansion(toy.ctx, n, terms,
                       ("stand_in_lattice", f"k={char.k}", f"nu={char.nu}"))
    table = apply_theta_q(table, kappa)
    return res_qexpansion(table, part)


def torus_character_value(char: MomentChar, kappa: Weight, x, t,
                          toy: ToyCMContext) -> PAdicInt:
    """Toy value of the integrand character at a point of X_p x T(Z_p).

    The ray-class part contributes the inverse norm form and the finite
    twists of chi_u; the torus part contributes psi and the weight.
    """
    ctx = toy.ctx
    value = norm_knu(x, char.k, char.nu, toy).inv()
    finite = UnitCharacter(0, 0, char.chi_u.twist1, char.chi_u.twist2)
    value = value * finite.value(x, toy)
    sig = kappa.sig
    flat = 0
    for place in range(sig.num_places):
        for i in range(sig.n):
            u = t[flat] % toy.modulus
            if u % toy.p == 0:
                raise ZeroDivisionError("torus points must be units")
            comp = char.psi.components[place][i]
            value = value * comp.value(u, ctx)
            value = value * ctx(pow(u, kappa.entries[place][i], toy.modulus))
            flat += 1
    return value


def sample_points(toy: ToyCMContext, n: int, count: int, seed: int = 0) -> list:
    """Deterministic sample of (x, t) points with unit coordinates."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        x = toy.random_unit(rng)
        t = tuple(rng.choice([u for u in range(1, toy.modulus)
                              if u % toy.p != 0]) for _ in range(2 * n))
        out.append((x, t))
    return out


def kummer_certify(tests, m: int, samples, bound: int, toy: ToyCMContext,
                   part=None) -> dict:
    """Check the abstract Kummer mechanism on explicit linear combinations.

    Each test is a list of (b, MomentChar, kappa) triples.  When the
    combination of character values vanishes mod p^m at every sampled point,
    the same combination of moment tables must vanish mod p^m entrywise;
    a premise that fails at some sample yields no claim for that test.
    """
    ctx = toy.ctx
    results = []
    status = "ok"
    for combo in tests:
        premise_ok = True
        for x, t in samples:
            acc = ctx.zero()
            for b, char, kappa in combo:
                acc = acc + torus_character_value(char, kappa, x, t, toy).scale(b)
            if not acc.congruent(ctx.zero(), m):
                premise_ok = False
                break
        entry = {"premise_ok": premise_ok}
        if not premise_ok:
            entry["moments_ok"] = None
            entry["note"] = "premise not satisfied, no claim"
        else:
            combined = None
            for b, char, kappa in combo:
                table = measure_moment(char, kappa, bound, toy, part=part)
                scaled = QExpansion(ctx, table.n,
                                    {k: v.scale(b) for k, v in table.terms.items()},
                                    table.meta)
                combined = scaled if combined is None else combined.combine(scaled)
            zero_table = QExpansion(ctx, combined.n, {})
            ok = combined.congruent(zero_table, m)
            entry["moments_ok"] = ok
            if not ok:
                status = "counterexample"
                worst = max(combined.sorted_terms(),
                            key=lambda kv: kv[1].residue % ctx.p ** m)
                entry["witness"] = {"alpha": worst[0].to_json(),
                                    "value": str(worst[1].residue)}
        results.append(entry)
    return {"status": status, "m": m, "tests": results}
