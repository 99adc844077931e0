"""Correlation spectra of the family via the kernel character sum

    T(u, v) = sum_{x in QR} w^Tr(u x + v x^2).

The correlation of members (i1, j1, l1) and (i2, j2, l2) at shift tau equals
T(a, b) for the d = 4 family and T(b, a) for the d = N+1 family, where
a = beta (alpha^i1 - alpha^(2 tau + i2)) and
b = beta (alpha^(d l1 + j1) - alpha^(d (tau + l2) + j2)).
T is invariant under (u, v) -> (u c, v c^2) for c in QR, so the spectrum is
computed on one representative per scaling class.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import NamedTuple

import numpy as np

from .char_sums import CyclotomicInteger, canonical_counts, magnitudes, roots_of_unity
from .finite_field import FieldCtx, FieldElement, ScaleTooLarge
from .sequences import FamilySpec, PSequence, UnsupportedD, family_matrix

MAX_SPECTRUM_ORDER = 10**6
NAIVE_VALIDATE_LIMIT = 343
BOUND_TOL = 1e-9
_CHUNK_ELEMS = 1 << 22


class PeriodMismatch(ValueError):
    pass


class TrivialCase(ValueError):
    pass


class TrivialPair(ValueError):
    pass


class ParamPair(NamedTuple):
    a: FieldElement
    b: FieldElement


def bound_value(N: int) -> float:
    """(3/sqrt 2) sqrt(N + 1/2) + 1/2."""
    return 3 / math.sqrt(2) * math.sqrt(N + 0.5) + 0.5


def subcase_bound(q: int) -> float:
    """Bound for the b = 0 correlations: (sqrt q + 1) / 2."""
    return (math.sqrt(q) + 1) / 2


def round_half_up(x: float, places: int = 4) -> str:
    return str(Decimal(repr(x)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP))


# -- direct correlation -----------------------------------------------------------

def naive_correlation(s1: PSequence, s2: PSequence, tau: int) -> CyclotomicInteger:
    """sum_t w^(s1(t) - s2(t + tau)) as an exact count vector."""
    if s1.period != s2.period or s1.p != s2.p:
        raise PeriodMismatch(f"periods {s1.period} and {s2.period} differ")
    N = s1.period
    t = np.arange(N)
    return CyclotomicInteger.from_exponents(s1.symbols - s2.symbols[(t + tau) % N], s1.p)


class ShiftCorrelator:
    """Exact correlations of one row against many rows at every shift at once.

    For k = 1..(p-1)/2 the conjugate value sum_t w^(k(x(t) - y(t+tau))) is
    obtained by FFT; conjugates k and p-k are complex conjugates and the k = 0
    value is N, so the count vector is the inverse DFT over k, rounded.
    """

    def __init__(self, rows: np.ndarray, p: int):
        self.rows = np.asarray(rows, dtype=np.int64)
        self.p = p
        self.N = self.rows.shape[1]
        ks = np.arange(1, (p - 1) // 2 + 1)
        w = roots_of_unity(p)
        # (R, K, N) spectra of w^(k * row)
        self._spectra = np.stack([np.fft.fft(w[(k * self.rows) % p], axis=1) for k in ks], axis=1)
        # counts[m] = N/p + (2/p) sum_k (Re s_k cos(2 pi k m/p) + Im s_k sin(2 pi k m/p))
        theta = 2 * np.pi * np.outer(ks, np.arange(p)) / p
        self._basis = np.concatenate([np.cos(theta), np.sin(theta)]) * (2 / p)

    def counts(self, u: int, rows=None) -> np.ndarray:
        """Count vectors (R, N, p): entry [v, tau] is C_{u,v}(tau)."""
        spec = self._spectra if rows is None else self._spectra[rows]
        sigma = np.fft.fft(self._spectra[u][None] * np.conj(spec), axis=2) / self.N   # (R, K, N)
        parts = np.concatenate([sigma.real, sigma.imag], axis=1).transpose(0, 2, 1)     # (R, N, 2K)
        total = parts @ self._basis + self.N / self.p
        out = np.rint(total)
        if np.abs(total - out).max() > 0.25:
            raise ArithmeticError("FFT correlation lost integrality")
        return out.astype(np.int64)


# -- parameter reduction ----------------------------------------------------------

def param_reduce(i1, j1, l1, i2, j2, l2, tau, spec: FamilySpec) -> ParamPair:
    if tau == 0 and (i1, j1, l1) == (i2, j2, l2):
        raise TrivialCase("in-phase autocorrelation is excluded")
    ctx, d, beta = spec.ctx, spec.d, spec.beta
    a = beta * (ctx.from_log(i1) - ctx.from_log(2 * tau + i2))
    b = beta * (ctx.from_log(d * l1 + j1) - ctx.from_log(d * (tau + l2) + j2))
    return ParamPair(a, b)


def param_reduce_codes(spec: FamilySpec, i1, j1, l1, i2, j2, l2, tau):
    """Vectorized param_reduce on integer codes (no trivial-case check)."""
    ctx, d = spec.ctx, spec.d
    e = ctx.q - 1
    lb = spec.beta.dlog()
    arr = [np.asarray(x, dtype=np.int64) for x in (i1, j1, l1, i2, j2, l2, tau)]
    i1, j1, l1, i2, j2, l2, tau = np.broadcast_arrays(*arr)
    a = ctx.sub_codes(ctx.exp[(i1 + lb) % e], ctx.exp[(2 * tau + i2 + lb) % e])
    b = ctx.sub_codes(ctx.exp[(d * l1 + j1 + lb) % e], ctx.exp[(d * (tau + l2) + j2 + lb) % e])
    return a, b


def kernel_args(spec: FamilySpec, a, b):
    """Map (a, b) to the arguments (u, v) of T for the family's d."""
    if spec.d == 4:
        return a, b
    if spec.d == spec.N + 1:
        return b, a
    raise UnsupportedD(spec.d)


# -- kernel -------------------------------------------------------------------------

def _kernel_chunk(ctx: FieldCtx, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    N, e, p = ctx.N, ctx.q - 1, ctx.p
    s = np.arange(N, dtype=np.int64)
    tu = np.where(u[:, None] == 0, 0, ctx.tr_exp[(ctx.log[u][:, None] + 2 * s) % e])
    tv = np.where(v[:, None] == 0, 0, ctx.tr_exp[(ctx.log[v][:, None] + 4 * s) % e])
    ex = (tu + tv) % p
    idx = (np.arange(len(u))[:, None] * p + ex).ravel()
    return np.bincount(idx, minlength=len(u) * p).reshape(len(u), p)


def kernel_counts(ctx: FieldCtx, u_codes, v_codes, threads: int = 1) -> np.ndarray:
    """Canonical count vectors of T(u, v) for paired code arrays, shape (K, p)."""
    u = np.asarray(u_codes, dtype=np.int64).ravel()
    v = np.asarray(v_codes, dtype=np.int64).ravel()
    step = max(1, _CHUNK_ELEMS // max(ctx.N, 1))
    chunks = [(u[s:s + step], v[s:s + step]) for s in range(0, len(u), step)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda c: _kernel_chunk(ctx, *c), chunks))
    else:
        parts = [_kernel_chunk(ctx, *c) for c in chunks]
    if not parts:
        return np.zeros((0, ctx.p), dtype=np.int64)
    return canonical_counts(np.concatenate(parts))


def kernel_eval(pair: ParamPair, ctx: FieldCtx) -> CyclotomicInteger:
    """T(a, b) = sum_{x in QR} w^Tr(a x + b x^2)."""
    a, b = pair
    if a.is_zero() and b.is_zero():
        raise TrivialPair("(a, b) = (0, 0)")
    return CyclotomicInteger(tuple(kernel_counts(ctx, [a.value], [b.value])[0]))


def kernel_for_family(pair: ParamPair, d: int) -> CyclotomicInteger:
    ctx = pair.a.ctx
    if d == 4:
        return kernel_eval(pair, ctx)
    if d == ctx.N + 1:
        return kernel_eval(ParamPair(pair.b, pair.a), ctx)
    raise UnsupportedD(f"d must be 4 or N+1, got {d}")


# -- reachable parameters -------------------------------------------------------------

def _a_values(spec: FamilySpec) -> np.ndarray:
    """Distinct codes of beta(alpha^i1 - alpha^(2 tau + i2)) over all (i1, i2, tau)."""
    i1, i2, tau = np.meshgrid([0, 1], [0, 1], np.arange(spec.N), indexing="ij")
    zero = np.zeros_like(i1)
    a, _ = param_reduce_codes(spec, i1, zero, zero, i2, zero, zero, tau)
    return np.unique(a)


def _phase_points(spec: FamilySpec) -> np.ndarray:
    ctx = spec.ctx
    l, j = np.meshgrid(np.arange(spec.N), [0, 1], indexing="ij")
    return ctx.exp[(spec.d * l + j + spec.beta.dlog()) % (ctx.q - 1)].ravel()


def _difference_mask(ctx: FieldCtx, points: np.ndarray) -> np.ndarray:
    """mask[c] is True iff c = x - y for distinct x, y in points."""
    mask = np.zeros(ctx.q, dtype=bool)
    for x in points:
        d = ctx.sub_codes(np.full_like(points, x), points)
        mask[d[points != x]] = True
        if mask[1:].all():
            break
    return mask


def reachable_blocks(spec: FamilySpec):
    """The reachable (a, b) set as a union of product blocks (A_block, B_block).

    b = beta(alpha^(d l1 + j1) - alpha^(d(tau + l2) + j2)) runs over all
    differences of phase points; with a = 0 (tau = 0, i1 = i2) the trivial
    case removes exactly the zero difference.
    """
    a_vals = _a_values(spec)
    diffs = _difference_mask(spec.ctx, _phase_points(spec))
    b_nonzero = np.flatnonzero(diffs)
    b_all = np.flatnonzero(diffs | (np.arange(spec.ctx.q) == 0))
    blocks = []
    a_nz = a_vals[a_vals != 0]
    if len(a_nz):
        blocks.append((a_nz, b_all))
    if (a_vals == 0).any() and len(b_nonzero):
        blocks.append((np.array([0]), b_nonzero))
    return blocks


@dataclass(frozen=True)
class ParamClass:
    """One scaling class of reachable pairs: representative, a reachable witness, orbit size."""

    rep: ParamPair
    witness: ParamPair
    orbit_size: int


def _canonical_kernel(ctx: FieldCtx, u: int, v: np.ndarray):
    """Representative (u', v') of (u, v) under (u c, v c^2), c in QR."""
    e = ctx.q - 1
    if u != 0:
        lu = int(ctx.log[u])
        par = lu % 2
        log_c = par - lu               # even, so c is a square
        return int(ctx.exp[par]), ctx.scale_codes(v, 2 * log_c)
    lv = ctx.log[v]
    par = lv % 2
    return 0, np.where(v == 0, 0, ctx.exp[par % e])


def _rep_tables(spec: FamilySpec):
    """Representative kernel pairs with witnesses, as code arrays in a fixed order."""
    ctx = spec.ctx
    q = ctx.q
    # key space: u' in {0, 1, alpha} times v' in F_q
    u_reps = np.array([0, 1, int(ctx.alpha.value)])
    slot = {0: 0, 1: 1, int(ctx.alpha.value): 2}
    seen = np.zeros((3, q), dtype=bool)
    wit_u = np.zeros((3, q), dtype=np.int64)
    wit_v = np.zeros((3, q), dtype=np.int64)
    for a_block, b_block in reachable_blocks(spec):
        u_set, v_set = kernel_args(spec, a_block, b_block)
        for u in u_set.tolist():
            if u != 0 and seen[slot[int(ctx.exp[ctx.log[u] % 2])]].all():
                continue
            ur, vr = _canonical_kernel(ctx, u, v_set)
            row = slot[ur]
            new = ~seen[row, vr]
            if new.any():
                seen[row, vr[new]] = True
                wit_u[row, vr[new]] = u
                wit_v[row, vr[new]] = v_set[new]
    rows, cols = np.nonzero(seen)
    return u_reps[rows], cols, wit_u[rows, cols], wit_v[rows, cols]


def reachable_params(spec: FamilySpec) -> list[ParamClass]:
    """One representative per scaling class of reachable (a, b), in (a, b) coordinates."""
    ctx = spec.ctx
    u, v, wu, wv = _rep_tables(spec)
    out = []
    for uu, vv, wuu, wvv in zip(u.tolist(), v.tolist(), wu.tolist(), wv.tolist()):
        ra, rb = kernel_args(spec, uu, vv)
        wa, wb = kernel_args(spec, wuu, wvv)
        # (u, v) != (0, 0) has trivial stabilizer in QR: -1 is a nonsquare
        out.append(ParamClass(ParamPair(ctx.element(ra), ctx.element(rb)),
                              ParamPair(ctx.element(wa), ctx.element(wb)), ctx.N))
    return out


# -- spectra ----------------------------------------------------------------------------

def _row_words(counts: np.ndarray) -> list[np.ndarray]:
    """Pack nonnegative rows into int64 words, most significant column first."""
    base = int(counts.max()) + 1 if counts.size else 1
    per_word = max(1, int(62 // math.log2(base + 1)))
    words = []
    for start in range(0, counts.shape[1], per_word):
        w = np.zeros(len(counts), dtype=np.int64)
        for col in range(start, min(start + per_word, counts.shape[1])):
            w = w * base + counts[:, col]
        words.append(w)
    return words


def _unique_rows(counts: np.ndarray) -> np.ndarray:
    """Distinct rows in lexicographic order (rows must be nonnegative)."""
    if len(counts) == 0:
        return counts
    words = _row_words(counts)
    if len(words) == 1:
        _, first = np.unique(words[0], return_index=True)
        return counts[first]
    order = np.lexsort(words[::-1])
    stacked = np.stack([w[order] for w in words], axis=1)
    keep = np.ones(len(order), dtype=bool)
    keep[1:] = (stacked[1:] != stacked[:-1]).any(axis=1)
    return counts[order[keep]]


@dataclass
class SpectrumValues:
    """Exact distinct values (lexicographically sorted canonical count rows)."""

    values: np.ndarray
    b_zero_max: float
    n_representatives: int


def spectrum_values(spec: FamilySpec, threads: int = 1) -> SpectrumValues:
    ctx = spec.ctx
    if ctx.q > MAX_SPECTRUM_ORDER:
        raise ScaleTooLarge(f"q = {ctx.q} exceeds {MAX_SPECTRUM_ORDER}")
    u, v, _, _ = _rep_tables(spec)
    counts = kernel_counts(ctx, u, v, threads=threads)
    _, b = kernel_args(spec, u, v)
    bz = counts[b == 0]
    b_zero_max = float(magnitudes(bz).max()) if len(bz) else 0.0
    return SpectrumValues(_unique_rows(counts), b_zero_max, len(u))


def unreduced_spectrum(spec: FamilySpec) -> np.ndarray:
    """Distinct values over every reachable pair, without class reduction."""
    parts = []
    for a_block, b_block in reachable_blocks(spec):
        aa, bb = np.meshgrid(a_block, b_block, indexing="ij")
        u, v = kernel_args(spec, aa.ravel(), bb.ravel())
        parts.append(_unique_rows(kernel_counts(spec.ctx, u, v)))
    return _unique_rows(np.concatenate(parts))


def conjugate_rows(counts: np.ndarray) -> np.ndarray:
    """Count vectors of the complex conjugates (k -> -k mod p)."""
    p = counts.shape[-1]
    return counts[..., (-np.arange(p)) % p]


def naive_spectrum(spec: FamilySpec) -> np.ndarray:
    """Distinct values over all member pairs and shifts, by direct correlation.

    Only pairs v >= u are correlated: C_{v,u}(tau) is the conjugate of
    C_{u,v}(-tau), so the other half of the value set is the conjugate set.
    """
    rows = family_matrix(spec)
    p = spec.ctx.p
    corr = ShiftCorrelator(rows, p)
    acc = []
    for u in range(len(rows)):
        flat = canonical_counts(corr.counts(u, slice(u, None))).reshape(-1, p)
        acc.append(_unique_rows(flat[1:]))  # flat[0] is C_{u,u}(0)
        if len(acc) > 64:
            acc = [_unique_rows(np.concatenate(acc))]
    vals = _unique_rows(np.concatenate(acc))
    return _unique_rows(np.concatenate([vals, conjugate_rows(vals)]))


def full_kernel_table(ctx: FieldCtx) -> np.ndarray:
    """T(u, v) for every (u, v) in F_q^2, rows indexed by u * q + v."""
    u, v = np.divmod(np.arange(ctx.q * ctx.q, dtype=np.int64), ctx.q)
    return kernel_counts(ctx, u, v)


def oracle_mismatches(spec: FamilySpec) -> tuple[int, int]:
    """Compare direct correlation with T at the reduced parameters, for all
    member pairs and shifts except the trivial one. Returns (mismatches, checked).

    T is taken from a table over all of F_q^2, independent of class reduction.
    """
    ctx = spec.ctx
    rows = family_matrix(spec)
    R, N = rows.shape
    table = full_kernel_table(ctx)
    corr = ShiftCorrelator(rows, ctx.p)
    idx = np.arange(R)
    i2, j2, l2 = idx // (2 * N), (idx // N) % 2, idx % N
    tau = np.arange(N)
    bad = 0
    checked = 0
    for u in range(R):
        i1, j1, l1 = u // (2 * N), (u // N) % 2, u % N
        a, b = param_reduce_codes(spec, i1, j1, l1, i2[:, None], j2[:, None], l2[:, None], tau[None, :])
        ku, kv = kernel_args(spec, a, b)
        expect = table[ku * ctx.q + kv]
        got = canonical_counts(corr.counts(u))
        diff = (expect != got).any(axis=-1)
        diff[u, 0] = False
        bad += int(diff.sum())
        checked += R * N - 1
    return bad, checked


@dataclass
class SpectrumReport:
    p: int
    n: int
    d: int
    N: int
    c_max: float
    c_max_over_sqrtN: float
    c_max_over_sqrtN_4dp: str
    distinct_count: int
    distinct_magnitudes: int
    bound: float
    b_zero_max: float
    b_zero_bound: float
    passed: bool
    validated: bool | None
    representatives: int
    field_provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out


def distinct_magnitude_count(values: np.ndarray, decimals: int = 9) -> int:
    return len(np.unique(np.round(magnitudes(values), decimals)))


def family_spectrum(spec: FamilySpec, threads: int = 1, validate: bool | None = None) -> SpectrumReport:
    """Exact spectrum of the family with C_max, distinct-value count and bound check.

    ``validate`` cross-checks the value set against a naive sweep of all
    4N x 4N x N correlations; by default only for q <= NAIVE_VALIDATE_LIMIT.
    """
    ctx = spec.ctx
    sv = spectrum_values(spec, threads=threads)
    mags = magnitudes(sv.values)
    c_max = float(mags.max()) if len(mags) else 0.0
    bound = bound_value(ctx.N)
    if validate is None:
        validate = ctx.q <= NAIVE_VALIDATE_LIMIT
    validated = None
    if validate:
        validated = bool(np.array_equal(naive_spectrum(spec), sv.values))
    ratio = c_max / math.sqrt(ctx.N)
    passed = (c_max <= bound + BOUND_TOL and sv.b_zero_max <= subcase_bound(ctx.q) + BOUND_TOL
              and validated is not False)
    return SpectrumReport(
        p=ctx.p, n=ctx.n, d=spec.d, N=ctx.N,
        c_max=c_max, c_max_over_sqrtN=ratio, c_max_over_sqrtN_4dp=round_half_up(ratio),
        distinct_count=len(sv.values), distinct_magnitudes=distinct_magnitude_count(sv.values),
        bound=bound, b_zero_max=sv.b_zero_max, b_zero_bound=subcase_bound(ctx.q),
        passed=passed, validated=validated, representatives=sv.n_representatives,
        field_provenance=spec.provenance(),
    )
