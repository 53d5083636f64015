"""Exact arithmetic in Z/p^M with valuation and congruence predicates.

Every other module uses :class:`PAdicInt` as its coefficient scalar.  All
arithmetic is performed on exact Python integers and reduced mod p^M; there
is no floating point anywhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Sentinel returned by :meth:`PAdicInt.valuation` for the zero residue,
#: meaning "divisible by p^M, valuation unknown beyond working precision".
INFINITY = math.inf


def is_prime(n: int) -> bool:
    """Trial-division primality check; fine for the desk-scale primes used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorial_exact(k: int) -> int:
    """k! as an exact unbounded integer, reduced only at the point of use."""
    if k < 0:
        raise ValueError("factorial of negative integer")
    return math.factorial(k)


@dataclass(frozen=True)
class RingCtx:
    """Working ring Z/p^M serving signatures with n up to ``n_bound``.

    Requires p prime and p > n_bound, so that i! is a unit for every block
    size i that can occur, and M >= 1.
    """

    p: int
    M: int
    n_bound: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.M < 1:
            raise ValueError("precision exponent M must be >= 1")
        if self.n_bound < 1:
            raise ValueError("n_bound must be >= 1")
        if self.p <= self.n_bound:
            raise ValueError(f"need p > n (got p = {self.p}, n_bound = {self.n_bound})")

    @property
    def modulus(self) -> int:
        return self.p ** self.M

    def __call__(self, value: int) -> "PAdicInt":
        """Reduce an exact integer into this ring."""
        return PAdicInt(value % self.modulus, self)

    def zero(self) -> "PAdicInt":
        return PAdicInt(0, self)

    def one(self) -> "PAdicInt":
        return PAdicInt(1, self)


@dataclass(frozen=True)
class PAdicInt:
    """Residue in [0, p^M) together with its ring context.

    Immutable; all operators return new values.  Mixed-context arithmetic is
    an error rather than a silent coercion.
    """

    residue: int
    ctx: RingCtx

    def __post_init__(self):
        if not 0 <= self.residue < self.ctx.modulus:
            raise ValueError("residue out of range [0, p^M)")

    def _check(self, other: "PAdicInt") -> None:
        if self.ctx != other.ctx:
            raise ValueError("ring context mismatch")

    def __add__(self, other: "PAdicInt") -> "PAdicInt":
        self._check(other)
        return PAdicInt((self.residue + other.residue) % self.ctx.modulus, self.ctx)

    def __sub__(self, other: "PAdicInt") -> "PAdicInt":
        self._check(other)
        return PAdicInt((self.residue - other.residue) % self.ctx.modulus, self.ctx)

    def __mul__(self, other: "PAdicInt") -> "PAdicInt":
        self._check(other)
        return PAdicInt((self.residue * other.residue) % self.ctx.modulus, self.ctx)

    def __neg__(self) -> "PAdicInt":
        return PAdicInt((-self.residue) % self.ctx.modulus, self.ctx)

    def scale(self, k: int) -> "PAdicInt":
        """Multiply by an exact integer scalar."""
        return PAdicInt((self.residue * k) % self.ctx.modulus, self.ctx)

    def inv(self) -> "PAdicInt":
        """Multiplicative inverse; requires valuation 0."""
        if self.residue % self.ctx.p == 0:
            raise ZeroDivisionError("non-unit")
        return PAdicInt(pow(self.residue, -1, self.ctx.modulus), self.ctx)

    def __pow__(self, k: int) -> "PAdicInt":
        if k < 0:
            return self.inv() ** (-k)
        return PAdicInt(pow(self.residue, k, self.ctx.modulus), self.ctx)

    def valuation(self):
        """Largest v <= M with p^v dividing the residue; INFINITY for zero.

        Zero reports saturated INFINITY rather than M, so callers can
        distinguish "exactly divisible by p^M" from "unknown beyond
        working precision".
        """
        if self.residue == 0:
            return INFINITY
        v = 0
        r = self.residue
        while r % self.ctx.p == 0:
            r //= self.ctx.p
            v += 1
        return v

    def is_unit(self) -> bool:
        return self.residue % self.ctx.p != 0

    def congruent(self, other: "PAdicInt", m: int) -> bool:
        """True iff p^m divides (self - other).  Requires m <= M."""
        self._check(other)
        if m > self.ctx.M:
            raise ValueError("insufficient precision")
        return (self.residue - other.residue) % self.ctx.p ** m == 0

    def to_json(self) -> dict:
        return {"residue": str(self.residue), "p": self.ctx.p, "M": self.ctx.M}

    @staticmethod
    def from_json(obj: dict, n_bound: int = 1) -> "PAdicInt":
        ctx = RingCtx(int(obj["p"]), int(obj["M"]), n_bound)
        return ctx(int(obj["residue"]))

    def __repr__(self) -> str:
        return f"{self.residue} (mod {self.ctx.p}^{self.ctx.M})"
