"""Theta operators, their eigenvalue polynomials, and congruence sweeps.

Every operator here is diagonal in the shifted basis: it multiplies the
coefficient of (1 + t)^alpha by an integer polynomial in the exponent matrix
alpha.  The normative polynomial is the symmetrizer expansion
(:func:`phi_oracle`); the leading-minor product formula is kept as an
independent cross-check whose normalization constant is measured, not
assumed.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .padic import PAdicInt, RingCtx, factorial_exact
from .series import ShiftedSeries, VarLabel, variable_labels
from .symmetrizer import (SymmetrizedFunctional, apply_functional, lcan_expand,
                          weighted_apply)
from .weights import (PAdicCharacterApprox, Signature, Weight, is_sum_symmetric,
                      is_symmetric, weight_congruent)


@dataclass(frozen=True)
class ThetaWord:
    """Finite exponent vector d over the elementary operators theta_{i,j}."""

    d: Mapping

    def __post_init__(self):
        clean = {}
        for label, exp in self.d.items():
            exp = int(exp)
            if exp < 0:
                raise ValueError("negative theta exponent")
            if exp:
                clean[VarLabel(*label)] = exp
        object.__setattr__(self, "d", clean)

    @staticmethod
    def from_tuple(labels: tuple) -> "ThetaWord":
        return ThetaWord(dict(Counter(labels)))


def theta_word_apply(s: ShiftedSeries, word: ThetaWord) -> ShiftedSeries:
    """c_alpha -> (prod_l alpha(l)^{d(l)}) c_alpha."""

    def scale(coeff, amap):
        k = 1
        for label, exp in word.d.items():
            k *= amap.get(label, 0) ** exp
            if k == 0:
                break
        return coeff.scale(k)

    return s.map_coefficients(scale)


_FUNCTIONAL_CACHE = {}


def functional_of(kappa: Weight) -> SymmetrizedFunctional:
    """Cached canonical functional of a sum-symmetric weight."""
    cached = _FUNCTIONAL_CACHE.get(kappa)
    if cached is None:
        cached = _FUNCTIONAL_CACHE[kappa] = lcan_expand(kappa)
    return cached


def phi_oracle(kappa: Weight, alpha: Mapping) -> int:
    """Eigenvalue of theta^kappa on (1 + t)^alpha, from the symmetrizer expansion."""
    return apply_functional(functional_of(kappa), alpha)


def theta_kappa_apply(s: ShiftedSeries, kappa: Weight) -> ShiftedSeries:
    """Diagonal action of theta^kappa on a shifted series."""
    functional = functional_of(kappa)
    return s.map_coefficients(
        lambda coeff, amap: coeff.scale(apply_functional(functional, amap)))


def theta_chi_apply(s: ShiftedSeries, chi: PAdicCharacterApprox) -> ShiftedSeries:
    """Action of the interpolated operator attached to a p-adic character.

    Computed through the integer representative; the result is canonical
    only modulo p^{chi.level + 1}, which must fit inside the working
    precision.
    """
    if not chi.symmetric:
        raise ValueError("interpolated theta operators need symmetric characters")
    if chi.level + 1 > s.ctx.M:
        raise ValueError("insufficient precision for the character level")
    return theta_kappa_apply(s, chi.representative)


# ---------------------------------------------------------------------------
# minor formula and character-twisted eigenvalues


def det_int(matrix) -> int:
    """Exact integer determinant by cofactor expansion (desk-scale sizes)."""
    size = len(matrix)
    if size == 0:
        return 1
    if size == 1:
        return matrix[0][0]
    total = 0
    for col in range(size):
        minor = [row[:col] + row[col + 1:] for row in matrix[1:]]
        term = matrix[0][col] * det_int(minor)
        total += -term if col % 2 else term
    return total


def exponent_block(sig: Signature, place: int, alpha: Mapping):
    """Per-place exponent matrix: rows follow the - index j, columns the + index i."""
    a_plus = sig.a_plus(place)
    a_minus = sig.a_minus(place)
    return [[alpha.get(VarLabel(place, i, a_plus + r + 1), 0)
             for i in range(1, a_plus + 1)]
            for r in range(a_minus)]


def leading_minors(sig: Signature, place: int, alpha: Mapping) -> list:
    """[m_1, ..., m_{a_+}]; a minor larger than the block is taken to be 0."""
    block = exponent_block(sig, place, alpha)
    a_plus = sig.a_plus(place)
    a_minus = sig.a_minus(place)
    out = []
    for i in range(1, a_plus + 1):
        if i > a_minus:
            out.append(0)
        else:
            out.append(det_int([row[:i] for row in block[:i]]))
    return out


def phi_kappa_minor(kappa: Weight, alpha: Mapping) -> int:
    """Leading-minor product formula for the eigenvalue polynomial.

    Evaluates prod over places of (a_+! m_{a_+})^{kappa_{a_+}} times
    prod_{i<a_+} (i! m_i)^{kappa_i - kappa_{i+1}}, as an exact integer.
    """
    flag, _ = is_sum_symmetric(kappa)
    if not flag:
        raise ValueError("minor formula applies to sum-symmetric weights")
    total = 1
    for place in range(kappa.sig.num_places):
        a_plus = kappa.sig.a_plus(place)
        if a_plus == 0:
            continue
        vec = kappa.entries[place]
        minors = leading_minors(kappa.sig, place, alpha)
        total *= (factorial_exact(a_plus) * minors[a_plus - 1]) ** vec[a_plus - 1]
        for i in range(1, a_plus):
            gap = vec[i - 1] - vec[i]
            total *= (factorial_exact(i) * minors[i - 1]) ** gap
    return total


def minor_factorial_constant(kappa: Weight) -> int:
    """The factorial content of the minor formula, with the minors set to 1."""
    total = 1
    for place in range(kappa.sig.num_places):
        a_plus = kappa.sig.a_plus(place)
        if a_plus == 0:
            continue
        vec = kappa.entries[place]
        total *= factorial_exact(a_plus) ** vec[a_plus - 1]
        for i in range(1, a_plus):
            total *= factorial_exact(i) ** (vec[i - 1] - vec[i])
    return total


@dataclass(frozen=True)
class FiniteOrderCharacter:
    """Finite-order character of (Z/p^r)^* with values in (Z/p^M)^*.

    Split into a tame exponent s modulo p-1 and a wild exponent t modulo
    p^{r-1}; evaluation raises the unit argument to the matching power of
    the cyclic unit group of Z/p^M, so no root-of-unity tables are needed.
    """

    p: int
    r: int
    s: int
    t: int = 0

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("character level r must be >= 1")
        object.__setattr__(self, "s", self.s % (self.p - 1) if self.p > 2 else 0)
        object.__setattr__(self, "t", self.t % self.p ** (self.r - 1))

    def is_trivial(self) -> bool:
        return self.s == 0 and self.t == 0

    def value(self, u: int, ctx: RingCtx) -> PAdicInt:
        if ctx.p != self.p:
            raise ValueError("prime mismatch")
        if ctx.M < self.r:
            raise ValueError("working precision below character level")
        if u % self.p == 0:
            raise ZeroDivisionError("finite-order character of a non-unit")
        exponent = (self.s * self.p ** (ctx.M - 1)
                    + self.t * (self.p - 1) * self.p ** (ctx.M - self.r))
        return ctx(pow(u % ctx.modulus, exponent, ctx.modulus))

    def __mul__(self, other: "FiniteOrderCharacter") -> "FiniteOrderCharacter":
        if (self.p, self.r) != (other.p, other.r):
            if self.p != other.p:
                raise ValueError("prime mismatch")
            r = max(self.r, other.r)
            return FiniteOrderCharacter(self.p, r, self.s, self.t) * \
                FiniteOrderCharacter(other.p, r, other.s, other.t)
        return FiniteOrderCharacter(self.p, self.r, self.s + other.s, self.t + other.t)

    def inverse(self) -> "FiniteOrderCharacter":
        return FiniteOrderCharacter(self.p, self.r, -self.s, -self.t)

    @staticmethod
    def trivial(p: int) -> "FiniteOrderCharacter":
        return FiniteOrderCharacter(p, 1, 0, 0)


@dataclass(frozen=True)
class ZetaComponent:
    """One unit-group character x -> x^exponent * twist(x)."""

    exponent: int
    twist: Optional[FiniteOrderCharacter] = None

    def value(self, u: int, ctx: RingCtx) -> PAdicInt:
        if u % ctx.p == 0:
            raise ZeroDivisionError("character of a non-unit")
        out = ctx(pow(u % ctx.modulus, self.exponent, ctx.modulus)
                  if self.exponent >= 0 else
                  pow(pow(u % ctx.modulus, -1, ctx.modulus), -self.exponent, ctx.modulus))
        if self.twist is not None and not self.twist.is_trivial():
            out = out * self.twist.value(u, ctx)
        return out

    def over(self, other: "ZetaComponent", p: int) -> "ZetaComponent":
        """Quotient character self * other^{-1}."""
        twist = None
        if self.twist is not None or other.twist is not None:
            a = self.twist or FiniteOrderCharacter.trivial(p)
            b = other.twist or FiniteOrderCharacter.trivial(p)
            twist = a * b.inverse()
            if twist.is_trivial():
                twist = None
        return ZetaComponent(self.exponent - other.exponent, twist)


@dataclass(frozen=True)
class CharacterZeta:
    """Per-(place, index) unit characters entering the twisted eigenvalue.

    ``components[place][i-1]`` is the character attached to torus coordinate
    i at the given place; only indices up to a_+ enter the eigenvalue
    formula, through successive quotients and the a_+ component itself.
    """

    sig: Signature
    components: tuple

    def __post_init__(self):
        components = tuple(tuple(comp) for comp in self.components)
        object.__setattr__(self, "components", components)
        if len(components) != self.sig.num_places:
            raise ValueError("one component list per place required")
        if any(len(comp) != self.sig.n for comp in components):
            raise ValueError("n component characters per place required")

    @staticmethod
    def classical(kappa: Weight, twists: Mapping = None) -> "CharacterZeta":
        """The character given by integer powers from a weight, with optional twists."""
        twists = twists or {}
        comps = []
        for place in range(kappa.sig.num_places):
            comps.append(tuple(
                ZetaComponent(kappa.entries[place][i - 1], twists.get((place, i)))
                for i in range(1, kappa.sig.n + 1)))
        return CharacterZeta(kappa.sig, comps)

    def mul_weight(self, kappa: Weight) -> "CharacterZeta":
        """Shift every component exponent by the corresponding weight entry."""
        if kappa.sig != self.sig:
            raise ValueError("signature mismatch")
        comps = []
        for place in range(self.sig.num_places):
            comps.append(tuple(
                ZetaComponent(c.exponent + kappa.entries[place][i], c.twist)
                for i, c in enumerate(self.components[place])))
        return CharacterZeta(self.sig, comps)


def _leading_minors_of(block, width: int) -> list:
    """[m_1..m_width] of an explicit integer matrix; oversize minors are 0."""
    out = []
    for i in range(1, width + 1):
        if i > len(block) or (block and i > len(block[0])):
            out.append(0)
        else:
            out.append(det_int([list(row[:i]) for row in block[:i]]))
    return out


def phi_zeta_blocks(zeta: CharacterZeta, blocks, ctx: RingCtx) -> PAdicInt:
    """Character-twisted eigenvalue on explicit per-place integer matrices.

    Every argument i! m_i must be a p-adic unit for the character values to
    make sense; any non-unit argument short-circuits to 0, the support
    convention of the coefficient functionals downstream.
    """
    total = ctx.one()
    for place in range(zeta.sig.num_places):
        a_plus = zeta.sig.a_plus(place)
        if a_plus == 0:
            continue
        minors = _leading_minors_of(blocks[place], a_plus)
        args = [factorial_exact(i) * minors[i - 1] for i in range(1, a_plus + 1)]
        if any(arg % ctx.p == 0 for arg in args):
            return ctx.zero()
        comps = zeta.components[place]
        total = total * comps[a_plus - 1].value(args[a_plus - 1] % ctx.modulus, ctx)
        for i in range(1, a_plus):
            quotient = comps[i - 1].over(comps[i], ctx.p)
            total = total * quotient.value(args[i - 1] % ctx.modulus, ctx)
    return total


def phi_zeta(zeta: CharacterZeta, alpha: Mapping, ctx: RingCtx) -> PAdicInt:
    """Character-twisted eigenvalue of an exponent map; see phi_zeta_blocks."""
    blocks = [exponent_block(zeta.sig, place, alpha)
              for place in range(zeta.sig.num_places)]
    return phi_zeta_blocks(zeta, blocks, ctx)


def zeta_congruent(a: CharacterZeta, b: CharacterZeta, p: int, m: int) -> bool:
    """Exponents congruent mod p^m (p - 1) and identical twists, per component."""
    if a.sig != b.sig:
        return False
    modulus = p ** m * (p - 1)
    for ca, cb in zip(a.components, b.components):
        for x, y in zip(ca, cb):
            if (x.exponent - y.exponent) % modulus != 0:
                return False
            tx = x.twist or FiniteOrderCharacter.trivial(p)
            ty = y.twist or FiniteOrderCharacter.trivial(p)
            if (tx.s, tx.t, tx.r) != (ty.s, ty.t, ty.r):
                return False
    return True


# ---------------------------------------------------------------------------
# equivalence report: symmetrizer expansion vs minor formula


def spanning_grid(sig: Signature, points: int):
    """All exponent maps with each variable below ``points``, canonical order."""
    labels = variable_labels(sig)
    for combo in itertools.product(range(points), repeat=len(labels)):
        yield {l: v for l, v in zip(labels, combo) if v}


def phi_equivalence_report(kappa: Weight, grid=None) -> dict:
    """Compare the minor formula against the symmetrizer expansion on a grid.

    Reports whether the two agree exactly, up to a single constant, or not
    at all, and separately whether the minor formula coincides with the
    multiplicity-weighted expansion (it does; the constant then measures the
    collapsed normalization).  Nothing is hidden: a non-constant ratio is
    reported with a witness.
    """
    functional = functional_of(kappa)
    if grid is None:
        grid = list(spanning_grid(kappa.sig, functional.depth + 2))
    else:
        grid = list(grid)

    ratio = None
    constant = True
    weighted_equal = True
    witness = None
    oracle_all_zero = True
    for alpha in grid:
        oracle = apply_functional(functional, alpha)
        minor = phi_kappa_minor(kappa, alpha)
        if weighted_apply(functional, alpha) != minor:
            weighted_equal = False
        if oracle == 0:
            if minor != 0:
                constant = False
                witness = witness or {"alpha": _alpha_json(alpha),
                                      "oracle": 0, "minor": minor}
            continue
        oracle_all_zero = False
        current = Fraction(minor, oracle)
        if ratio is None:
            ratio = current
        elif current != ratio:
            constant = False
            witness = witness or {"alpha": _alpha_json(alpha),
                                  "oracle": oracle, "minor": minor}

    predicted = minor_factorial_constant(kappa)
    if oracle_all_zero:
        status = "zero_oracle"
    elif not constant:
        status = "nonconstant_ratio"
    elif ratio == 1:
        status = "equal"
    else:
        status = "constant_ratio"
    ratio_json = None
    if constant and ratio is not None:
        ratio_json = int(ratio) if ratio.denominator == 1 else \
            [ratio.numerator, ratio.denominator]
    return {
        "status": status,
        "grid_size": len(grid),
        "constant": ratio_json,
        "predicted_factorial_constant": predicted,
        "matches_prediction": bool(constant and ratio == predicted),
        "weighted_equal": weighted_equal,
        "witness": witness,
    }


def _alpha_json(alpha: Mapping) -> dict:
    return {repr(list(l)): v for l, v in sorted(alpha.items())}


# ---------------------------------------------------------------------------
# congruence sweeps


def thread_count() -> int:
    """Worker count for batch sweeps, from the STHETA_THREADS environment."""
    try:
        return max(1, int(os.environ.get("STHETA_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items, threads: int = None) -> list:
    """Order-preserving map, threaded when more than one worker is requested."""
    threads = thread_count() if threads is None else threads
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _powmod_vec(base, exponent: int, mod: int):
    base = np.mod(base, mod)
    result = np.ones_like(base)
    e = exponent
    while e:
        if e & 1:
            result = result * base % mod
        base = base * base % mod
        e >>= 1
    return result


def _phi_vec(functional: SymmetrizedFunctional, arrays: dict, mod: int):
    """Vectorized collapsed eigenvalue over broadcastable exponent arrays."""
    total = None
    for t, coeff in functional.sorted_terms():
        term = None
        for label, count in sorted(Counter(t).items()):
            factor = _powmod_vec(arrays[label], count, mod)
            term = factor if term is None else term * factor % mod
        if term is None:
            term = np.ones((), dtype=np.int64)
        term = term * (coeff % mod) % mod
        total = term if total is None else (total + term) % mod
    if total is None:
        return np.zeros((), dtype=np.int64)
    return total


def congruence_sweep(kappa: Weight, kappa_prime: Weight, m: int, p: int,
                     bound: int = None, max_points: int = 10 ** 6,
                     seed: int = 0, exact: bool = False) -> dict:
    """Verify phi values of two weights agree mod p^{m+1} across a grid.

    The grid is the full box [0, bound)^{vars} (bound defaults to p^2) in
    canonical variable order; above ``max_points`` a deterministic seeded
    subsample is used and recorded.  The weight-congruence hypotheses are
    checked first; when they fail, the sweep still runs and the report is
    labeled informational, which is how sharpness witnesses are produced.
    """
    if kappa.sig != kappa_prime.sig:
        raise ValueError("signature mismatch")
    labels = variable_labels(kappa.sig)
    bound = p ** 2 if bound is None else bound
    modulus = p ** (m + 1)
    hypotheses = weight_congruent(kappa, kappa_prime, p, m)

    report = {
        "p": p, "m": m, "modulus": modulus, "bound": bound,
        "hypotheses_met": hypotheses,
        "kappa": kappa.to_json(), "kappa_prime": kappa_prime.to_json(),
        "sig": kappa.sig.to_json(),
    }

    if kappa == kappa_prime:
        # identical weights give identical polynomials; nothing to sweep
        report.update(status="ok", grid_size=bound ** len(labels),
                      subsampled=False, witness=None, identical=True)
        return report

    total = bound ** len(labels)
    f = functional_of(kappa)
    g = functional_of(kappa_prime)

    if exact or not labels:
        count = 0
        witness = None
        for combo in itertools.product(range(bound), repeat=len(labels)):
            if count >= max_points:
                break
            alpha = {l: v for l, v in zip(labels, combo) if v}
            lhs = phi_oracle(kappa, alpha) % modulus
            rhs = phi_oracle(kappa_prime, alpha) % modulus
            count += 1
            if lhs != rhs:
                witness = {"alpha": list(combo), "phi": lhs, "phi_prime": rhs}
                break
        report.update(status="counterexample" if witness else "ok",
                      grid_size=count, subsampled=total > max_points,
                      witness=witness, identical=False)
        return report

    if total <= max_points:
        shape = [np.arange(bound, dtype=np.int64).reshape(
            (1,) * k + (-1,) + (1,) * (len(labels) - k - 1))
            for k in range(len(labels))]
        arrays = dict(zip(labels, shape))
        diff = (_phi_vec(f, arrays, modulus)
                - _phi_vec(g, arrays, modulus)) % modulus
        # the compact broadcast shape carries every distinct value; the full
        # grid is only materialized to locate a witness
        if diff.any():
            full = np.broadcast_to(diff, (bound,) * len(labels))
            bad = np.nonzero(full.ravel())[0][:1]
        else:
            bad = np.empty(0, dtype=np.int64)
        subsampled = False
        grid_size = total
    else:
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(total, size=max_points, replace=False))
        coords = []
        rest = idx.copy()
        for _ in range(len(labels)):
            rest, digit = np.divmod(rest, bound)
            coords.append(digit)
        coords = coords[::-1]  # first label = most significant digit
        arrays = dict(zip(labels, coords))
        diff = (_phi_vec(f, arrays, modulus)
                - _phi_vec(g, arrays, modulus)) % modulus
        bad = np.nonzero(diff)[0]
        subsampled = True
        grid_size = max_points

    witness = None
    if bad.size:
        first = int(bad[0])
        if subsampled:
            flat = int(idx[first])
        else:
            flat = first
        combo = []
        for _ in range(len(labels)):
            flat, digit = divmod(flat, bound)
            combo.append(digit)
        combo = combo[::-1]
        alpha = {l: v for l, v in zip(labels, combo) if v}
        witness = {"alpha": combo,
                   "phi": phi_oracle(kappa, alpha) % modulus,
                   "phi_prime": phi_oracle(kappa_prime, alpha) % modulus}
    report.update(status="counterexample" if witness else "ok",
                  grid_size=int(grid_size), subsampled=bool(subsampled),
                  witness=witness, identical=False)
    return report
