"""Character sums over GF(p^n): exact cyclotomic values, Gauss sums, Weil checks.

Sums whose terms are p-th roots of unity (possibly weighted by +-1) are held
exactly as :class:`CyclotomicInteger` count vectors.  Sums involving a
general multiplicative character live in a larger cyclotomic ring and are
returned as complex floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .finite_field import FieldCtx, FieldElement


class MixedModulus(ValueError):
    pass


class DegenerateG(ValueError):
    """Raised when g(x) cannot be certified as not a constant times an M-th power."""


class DegreeDivisibleByP(ValueError):
    pass


def roots_of_unity(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


def canonical_counts(counts: np.ndarray) -> np.ndarray:
    """Subtract the row minimum; 1 + w + ... + w^(p-1) = 0 makes this value-preserving."""
    counts = np.asarray(counts, dtype=np.int64)
    return counts - counts.min(axis=-1, keepdims=True)


def magnitudes(counts: np.ndarray) -> np.ndarray:
    """|sum_k counts[..., k] w^k| for count vectors along the last axis."""
    counts = np.asarray(counts)
    return np.abs(counts @ roots_of_unity(counts.shape[-1]))


@dataclass(frozen=True)
class CyclotomicInteger:
    """The value sum_k counts[k] * w^k, w = exp(2 pi i / p), in canonical form.

    For prime p the only integer relation among 1, w, ..., w^(p-1) is the
    all-ones vector, so two canonical count vectors are equal exactly when
    the complex values are.
    """

    counts: tuple

    def __post_init__(self):
        c = [int(x) for x in self.counts]
        m = min(c)
        object.__setattr__(self, "counts", tuple(x - m for x in c))

    @classmethod
    def from_exponents(cls, exponents, p: int) -> "CyclotomicInteger":
        e = np.asarray(exponents, dtype=np.int64) % p
        return cls(tuple(np.bincount(e.ravel(), minlength=p)))

    @classmethod
    def from_int(cls, value: int, p: int) -> "CyclotomicInteger":
        return cls((value,) + (0,) * (p - 1))

    @property
    def p(self) -> int:
        return len(self.counts)

    def __add__(self, other: "CyclotomicInteger") -> "CyclotomicInteger":
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        if other.p != self.p:
            raise MixedModulus(f"cannot add values over p={self.p} and p={other.p}")
        return CyclotomicInteger(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __neg__(self):
        return CyclotomicInteger(tuple(-a for a in self.counts))

    def __sub__(self, other):
        return self + (-other)

    def conjugate(self) -> "CyclotomicInteger":
        c = self.counts
        return CyclotomicInteger((c[0],) + tuple(reversed(c[1:])))

    def times_root(self, k: int) -> "CyclotomicInteger":
        """Multiply by w^k (a cyclic rotation of the counts)."""
        k %= self.p
        c = self.counts
        return CyclotomicInteger(c[-k:] + c[:-k] if k else c)

    def as_integer(self):
        """The rational integer value, or None if the value is not in Z."""
        if all(x == self.counts[1] for x in self.counts[1:]):
            return self.counts[0] - self.counts[1]
        return None

    def __complex__(self):
        return complex(sum(c * w for c, w in zip(self.counts, roots_of_unity(self.p))))

    def magnitude(self) -> float:
        return cyc_magnitude(self)

    def __abs__(self):
        return self.magnitude()


def cyc_add(u: CyclotomicInteger, v: CyclotomicInteger) -> CyclotomicInteger:
    return u + v


def cyc_magnitude(u: CyclotomicInteger) -> float:
    # |z|^2 = sum_m A_m cos(2 pi m / p), A_m the cyclic autocorrelation of the counts
    c = u.counts
    p = len(c)
    total = 0.0
    for m in range(p):
        a_m = sum(c[k] * c[(k + m) % p] for k in range(p))
        total += a_m * math.cos(2 * math.pi * m / p)
    return math.sqrt(max(total, 0.0))


# -- characters ------------------------------------------------------------------

@dataclass(frozen=True)
class AdditiveCharacter:
    """psi_beta(x) = w^Tr(beta x)."""

    beta: FieldElement

    @property
    def trivial(self) -> bool:
        return self.beta.is_zero()

    def exponent(self, x: FieldElement) -> int:
        return (self.beta * x).trace()

    def exponents(self, codes) -> np.ndarray:
        ctx = self.beta.ctx
        return ctx.tr[ctx.mul_codes(np.full_like(codes, self.beta.value), codes)]

    def __call__(self, x: FieldElement) -> complex:
        return complex(np.exp(2j * np.pi * self.exponent(x) / self.beta.ctx.p))


@dataclass(frozen=True)
class MultiplicativeCharacter:
    """chi_j(alpha^k) = exp(2 pi i j k / (q-1)), chi_j(0) = 0."""

    j: int
    ctx: FieldCtx

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % (self.ctx.q - 1))

    @classmethod
    def quadratic(cls, ctx: FieldCtx) -> "MultiplicativeCharacter":
        return cls(ctx.N, ctx)

    @property
    def trivial(self) -> bool:
        return self.j == 0

    @property
    def is_quadratic(self) -> bool:
        return self.j == self.ctx.N

    @property
    def order(self) -> int:
        return (self.ctx.q - 1) // gcd(self.j, self.ctx.q - 1)

    def real_values(self, codes) -> np.ndarray:
        """Integer values on codes; only defined for the trivial and quadratic characters."""
        codes = np.asarray(codes, dtype=np.int64)
        if self.is_quadratic:
            return self.ctx.eta[codes]
        if self.trivial:
            return (codes != 0).astype(np.int64)
        raise ValueError(f"chi_{self.j} is not real valued")

    def values(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        ctx = self.ctx
        k = ctx.log[codes]
        ph = np.exp(2j * np.pi * ((self.j * k) % (ctx.q - 1)) / (ctx.q - 1))
        return np.where(codes == 0, 0, ph)

    def __call__(self, x: FieldElement) -> complex:
        return complex(self.values(np.array([x.value]))[0])


# -- sums ------------------------------------------------------------------------

def _weighted_counts(exponents: np.ndarray, weights: np.ndarray, p: int) -> CyclotomicInteger:
    counts = np.zeros(p, dtype=np.int64)
    np.add.at(counts, exponents % p, weights)
    return CyclotomicInteger(tuple(counts))


def gauss_sum(psi: AdditiveCharacter, chi: MultiplicativeCharacter, ctx: FieldCtx):
    """G(psi, chi) = sum_x psi(x) chi(x) with chi(0) = 0.

    Exact :class:`CyclotomicInteger` when chi is trivial or quadratic, complex
    otherwise (phases are reduced mod p(q-1) in integers before exponentiation).
    """
    xs = np.arange(ctx.q, dtype=np.int64)
    e = psi.exponents(xs)
    if chi.trivial or chi.is_quadratic:
        return _weighted_counts(e, chi.real_values(xs), ctx.p)
    nz = xs[1:]
    m = ctx.p * (ctx.q - 1)
    phase = (e[1:] * (ctx.q - 1) + chi.j * ctx.log[nz] * ctx.p) % m
    return complex(np.exp(2j * np.pi * phase / m).sum())


def _as_codes(poly, ctx: FieldCtx) -> list[int]:
    out = []
    for c in poly:
        out.append(c.value if isinstance(c, FieldElement) else int(c))
    return out


def _degree(coeffs: Sequence[int]) -> int:
    for k in range(len(coeffs) - 1, -1, -1):
        if coeffs[k]:
            return k
    return -1


def hybrid_sum(g, f, chi: MultiplicativeCharacter, psi: AdditiveCharacter, ctx: FieldCtx):
    """sum_{x in F_q} chi(g(x)) psi(f(x)) by direct evaluation.

    g and f are coefficient sequences (constant first) of codes or elements.
    """
    if psi.trivial:
        raise ValueError("psi must be nontrivial")
    xs = np.arange(ctx.q, dtype=np.int64)
    gx = ctx.eval_poly_codes(_as_codes(g, ctx), xs)
    e = psi.exponents(ctx.eval_poly_codes(_as_codes(f, ctx), xs))
    if chi.trivial or chi.is_quadratic:
        return _weighted_counts(e, chi.real_values(gx), ctx.p)
    return complex((chi.values(gx) * np.exp(2j * np.pi * e / ctx.p)).sum())


def additive_sum(f, ctx: FieldCtx, psi: AdditiveCharacter | None = None, *, nonzero_only=False):
    """sum_x psi(f(x)) over F_q (or F_q^* with ``nonzero_only``), exactly."""
    psi = psi or AdditiveCharacter(ctx.one())
    xs = np.arange(1 if nonzero_only else 0, ctx.q, dtype=np.int64)
    e = psi.exponents(ctx.eval_poly_codes(_as_codes(f, ctx), xs))
    return CyclotomicInteger.from_exponents(e, ctx.p)


@dataclass(frozen=True)
class WeilCheck:
    magnitude: float
    bound: float
    passed: bool


WEIL_TOL = 1e-6


def _magnitude(value) -> float:
    return value.magnitude() if isinstance(value, CyclotomicInteger) else abs(value)


def root_count_certified(g: Sequence[int], order: int) -> int:
    """Number of distinct roots of g when g = c x^k with order not dividing k.

    Such g is never c*h^M. Anything else is rejected as uncertifiable.
    """
    k = _degree(g)
    if k < 1 or any(g[:k]):
        raise DegenerateG(f"cannot certify g = {list(g)}: only monomials c*x^k are supported")
    if k % order == 0:
        raise DegenerateG(f"g = c*x^{k} is a constant times an {order}-th power")
    return 1


def check_hybrid_weil(g, f, chi: MultiplicativeCharacter, ctx: FieldCtx,
                      psi: AdditiveCharacter | None = None) -> WeilCheck:
    if chi.trivial:
        raise ValueError("chi must be nontrivial")
    psi = psi or AdditiveCharacter(ctx.one())
    g_codes = _as_codes(g, ctx)
    f_codes = _as_codes(f, ctx)
    s = root_count_certified(g_codes, chi.order)
    e = max(_degree(f_codes), 0)
    mag = _magnitude(hybrid_sum(g_codes, f_codes, chi, psi, ctx))
    bound = (e + s - 1) * math.sqrt(ctx.q)
    return WeilCheck(mag, bound, mag <= bound + WEIL_TOL)


def check_additive_weil(f, ctx: FieldCtx, psi: AdditiveCharacter | None = None) -> WeilCheck:
    f_codes = _as_codes(f, ctx)
    deg = _degree(f_codes)
    if deg < 1:
        raise ValueError("f must have degree >= 1")
    if deg % ctx.p == 0:
        raise DegreeDivisibleByP(f"deg f = {deg} is divisible by p = {ctx.p}")
    mag = additive_sum(f_codes, ctx, psi).magnitude()
    bound = (deg - 1) * math.sqrt(ctx.q)
    return WeilCheck(mag, bound, mag <= bound + WEIL_TOL)


# -- sweeps ----------------------------------------------------------------------

def _record(ctx, f, g, chi_index, check: WeilCheck) -> dict:
    return {
        "p": ctx.p,
        "n": ctx.n,
        "f_coeffs": [ctx.element(c).coeffs for c in f],
        "g_coeffs": None if g is None else [ctx.element(c).coeffs for c in g],
        "chi_index": chi_index,
        "magnitude": round(check.magnitude, 12),
        "bound": round(check.bound, 12),
        "pass": bool(check.passed),
    }


def random_weil_sweep(ctx: FieldCtx, trials: int, seed: int, max_degree: int = 4) -> Iterator[dict]:
    """Seeded random f of degree <= max_degree; one hybrid record (g = x, chi = eta)
    per trial plus an additive record whenever deg f is admissible."""
    rng = np.random.default_rng(seed)
    eta = MultiplicativeCharacter.quadratic(ctx)
    g = [0, 1]
    for _ in range(trials):
        f = [int(c) for c in rng.integers(0, ctx.q, size=max_degree + 1)]
        yield _record(ctx, f, g, eta.j, check_hybrid_weil(g, f, eta, ctx))
        deg = _degree(f)
        if deg >= 1 and deg % ctx.p:
            yield _record(ctx, f, None, None, check_additive_weil(f, ctx))


def exhaustive_weil_counts(ctx: FieldCtx, max_degree: int = 4, batch: int = 1 << 14):
    """Exact sums for every f with deg <= max_degree, with g(x) = x, chi = eta, psi = psi_1.

    Yields ``(coeff_codes, hybrid_counts, additive_counts)`` in batches, with
    coeff_codes of shape (B, max_degree + 1).  The constant term only rotates
    both count vectors by Tr(c0), so the non-constant part is evaluated
    directly and every c0 is then applied as an exact rotation.
    """
    p, q = ctx.p, ctx.q
    xs = np.arange(q, dtype=np.int64)
    # tr_tab[k][c, x] = Tr(c x^k)
    tr_tab = []
    for k in range(1, max_degree + 1):
        xk = ctx.eval_poly_codes([0] * k + [1], xs)
        tr_tab.append(ctx.tr[ctx.mul_codes(xs[:, None], xk[None, :])])
    eta_x = ctx.eta[xs]
    tr_c0 = ctx.tr[xs]
    upper = np.stack(np.unravel_index(np.arange(q**max_degree), (q,) * max_degree), axis=1)[:, ::-1]
    rows = np.arange(batch)
    for start in range(0, len(upper), batch):
        coeffs = upper[start:start + batch]
        b = len(coeffs)
        e = np.zeros((b, q), dtype=np.int64)
        for k in range(max_degree):
            e += tr_tab[k][coeffs[:, k]]
        e %= p
        idx = (rows[:b, None] * p + e).ravel()
        hyb = np.bincount(idx, weights=np.broadcast_to(eta_x, e.shape).ravel(),
                          minlength=b * p).reshape(b, p).astype(np.int64)
        add = np.bincount(idx, minlength=b * p).reshape(b, p)
        for c0 in range(q):
            shift = int(tr_c0[c0])
            full = np.concatenate([np.full((b, 1), c0), coeffs], axis=1)
            yield full, np.roll(hyb, shift, axis=1), np.roll(add, shift, axis=1)


def exhaustive_weil_sweep(ctx: FieldCtx, max_degree: int = 4) -> dict:
    """Check the hybrid (g = x, chi = eta) and additive Weil bounds for every admissible f.

    Returns a summary with check and violation counts per bound type.
    """
    sq = math.sqrt(ctx.q)
    powers = np.arange(max_degree + 1)
    summary = {"hybrid_checked": 0, "hybrid_violations": 0,
               "additive_checked": 0, "additive_violations": 0,
               "max_hybrid_ratio": 0.0, "max_additive_ratio": 0.0}
    for coeffs, hyb, add in exhaustive_weil_counts(ctx, max_degree):
        deg = np.where(coeffs != 0, powers, -1).max(axis=1)
        e = np.maximum(deg, 0)
        hm = magnitudes(hyb)
        hb = e * sq
        summary["hybrid_checked"] += len(coeffs)
        summary["hybrid_violations"] += int((hm > hb + WEIL_TOL).sum())
        pos = hb > 0
        if pos.any():
            summary["max_hybrid_ratio"] = max(summary["max_hybrid_ratio"], float((hm[pos] / hb[pos]).max()))
        ok = (deg >= 1) & (deg % ctx.p != 0)
        am = magnitudes(add[ok])
        ab = (deg[ok] - 1) * sq
        summary["additive_checked"] += int(ok.sum())
        summary["additive_violations"] += int((am > ab + WEIL_TOL).sum())
        pos = ab > 0
        if pos.any():
            summary["max_additive_ratio"] = max(summary["max_additive_ratio"], float((am[pos] / ab[pos]).max()))
    return summary
