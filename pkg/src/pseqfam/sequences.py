"""m-sequences, their decimations and the 4N-member family of period N = (q-1)/2.

Member (i, j, l) of the family for decimation d is the sequence

    s(t) = m(2t + i) + m(d(t + l) + j)  (mod p),   t = 0, ..., N-1,

where m(t) = Tr(beta alpha^t) and d is 4 or N+1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, NamedTuple, TextIO

import numpy as np

from .finite_field import FieldCtx, FieldElement


class ZeroBeta(ValueError):
    pass


class BadPeriod(ValueError):
    pass


class IndexOutOfRange(ValueError):
    pass


class UnsupportedD(ValueError):
    pass


@dataclass(eq=False)
class PSequence:
    symbols: np.ndarray
    p: int

    def __post_init__(self):
        self.symbols = np.asarray(self.symbols, dtype=np.int64)
        if self.symbols.ndim != 1 or len(self.symbols) == 0:
            raise ValueError("symbols must be a nonempty 1-d vector")
        if (self.symbols < 0).any() or (self.symbols >= self.p).any():
            raise ValueError(f"symbols must lie in [0, {self.p - 1}]")

    @property
    def period(self) -> int:
        return len(self.symbols)

    def __getitem__(self, t):
        return int(self.symbols[t % self.period])

    def __eq__(self, other):
        if not isinstance(other, PSequence):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.symbols, other.symbols)

    def minimal_period(self) -> int:
        n = self.period
        for d in range(1, n + 1):
            if n % d == 0 and np.array_equal(self.symbols, np.roll(self.symbols, -d)):
                return d
        return n


class FamilyIndex(NamedTuple):
    i: int
    j: int
    l: int


@dataclass
class FamilySpec:
    ctx: FieldCtx
    d: int
    beta: FieldElement | None = None
    _m: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        ctx = self.ctx
        if self.beta is None:
            self.beta = ctx.one()
        if self.beta.is_zero():
            raise ZeroBeta("beta must be nonzero")
        if self.d not in (4, ctx.N + 1):
            raise UnsupportedD(f"d must be 4 or N+1 = {ctx.N + 1}, got {self.d}")
        if gcd(ctx.q - 1, self.d) != 2:
            raise UnsupportedD(f"gcd(q-1, d) = {gcd(ctx.q - 1, self.d)}, expected 2")
        self._m = m_sequence(ctx, self.beta).symbols

    @classmethod
    def from_label(cls, ctx: FieldCtx, d_label, beta=None) -> "FamilySpec":
        """Accept d as an int or one of 'N+1' / 'half-plus-one'."""
        if isinstance(d_label, str):
            d_label = d_label.strip()
            if d_label in ("N+1", "half-plus-one", "n+1"):
                d = ctx.N + 1
            else:
                d = int(d_label)
        else:
            d = int(d_label)
        return cls(ctx, d, beta)

    @property
    def N(self) -> int:
        return self.ctx.N

    @property
    def size(self) -> int:
        return 4 * self.ctx.N

    @property
    def d_label(self) -> str:
        return "4" if self.d == 4 else "N+1"

    def provenance(self) -> dict:
        return {"modulus": list(self.ctx.modulus), "alpha": self.ctx.alpha.coeffs,
                "beta": self.beta.coeffs}


def m_sequence(ctx: FieldCtx, beta: FieldElement | None = None) -> PSequence:
    """m(t) = Tr(beta alpha^t) for t in [0, q-2]."""
    beta = ctx.one() if beta is None else beta
    if beta.is_zero():
        raise ZeroBeta("beta must be nonzero")
    k = (beta.dlog() + np.arange(ctx.q - 1)) % (ctx.q - 1)
    return PSequence(ctx.tr_exp[k], ctx.p)


def decimate(seq: PSequence, d: int, new_period: int) -> PSequence:
    if new_period < 1 or (d * new_period) % seq.period:
        raise BadPeriod(f"d * new_period = {d * new_period} is not a multiple of {seq.period}")
    t = np.arange(new_period)
    return PSequence(seq.symbols[(d * t) % seq.period], seq.p)


def _check_index(spec: FamilySpec, idx) -> FamilyIndex:
    idx = FamilyIndex(*idx)
    if idx.i not in (0, 1) or idx.j not in (0, 1) or not 0 <= idx.l < spec.N:
        raise IndexOutOfRange(f"{idx} outside i,j in {{0,1}}, 0 <= l < {spec.N}")
    return idx


def family_member(spec: FamilySpec, idx) -> PSequence:
    i, j, l = _check_index(spec, idx)
    m = spec._m
    period = spec.ctx.q - 1
    t = np.arange(spec.N)
    s = (m[(2 * t + i) % period] + m[(spec.d * (t + l) + j) % period]) % spec.ctx.p
    return PSequence(s, spec.ctx.p)


def family_indices(spec: FamilySpec) -> list[FamilyIndex]:
    return [FamilyIndex(i, j, l) for i in (0, 1) for j in (0, 1) for l in range(spec.N)]


def family_matrix(spec: FamilySpec) -> np.ndarray:
    """All 4N members as rows, in lexicographic (i, j, l) order."""
    m = spec._m
    period = spec.ctx.q - 1
    N = spec.N
    t = np.arange(N)
    first = np.stack([m[(2 * t + i) % period] for i in (0, 1)])           # (2, N)
    ll = np.arange(N)[:, None]
    second = np.stack([m[(spec.d * (t[None, :] + ll) + j) % period] for j in (0, 1)])  # (2, N, N)
    rows = (first[:, None, None, :] + second[None, :, :, :]) % spec.ctx.p    # (i, j, l, t)
    return rows.reshape(4 * N, N)


def family_enumerate(spec: FamilySpec) -> Iterator[tuple[FamilyIndex, PSequence]]:
    rows = family_matrix(spec)
    for idx, row in zip(family_indices(spec), rows):
        yield idx, PSequence(row, spec.ctx.p)


# -- cyclic equivalence ------------------------------------------------------------

def least_rotation(s) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    s = list(s)
    n = len(s)
    ss = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = ss[j]
        i = f[j - k - 1]
        while i != -1 and sj != ss[k + i + 1]:
            if sj < ss[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != ss[k + i + 1]:
            if sj < ss[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_rotation(row) -> bytes:
    row = np.asarray(row, dtype=np.int64)
    k = least_rotation(row.tolist())
    return np.roll(row, -k).astype(np.uint8).tobytes()


def cyclically_distinct(rows) -> bool:
    """True iff no two rows are cyclic shifts of each other."""
    seen = set()
    for row in rows:
        key = canonical_rotation(row)
        if key in seen:
            return False
        seen.add(key)
    return True


def cyclic_inequivalence_check(spec: FamilySpec) -> bool:
    return cyclically_distinct(family_matrix(spec))


# -- dump format ---------------------------------------------------------------------

def write_family_dump(spec: FamilySpec, fh: TextIO) -> None:
    header = {"p": spec.ctx.p, "n": spec.ctx.n, "d": spec.d,
              "beta": spec.beta.coeffs, "modulus": list(spec.ctx.modulus)}
    fh.write(json.dumps(header) + "\n")
    for idx, row in zip(family_indices(spec), family_matrix(spec)):
        fh.write(f"{idx.i},{idx.j},{idx.l}:" + " ".join(map(str, row.tolist())) + "\n")


def read_family_dump(fh: TextIO) -> tuple[dict, dict[FamilyIndex, np.ndarray]]:
    header = json.loads(fh.readline())
    members = {}
    for line in fh:
        line = line.strip()
        if not line:
            continue
        key, _, body = line.partition(":")
        members[FamilyIndex(*map(int, key.split(",")))] = np.array(body.split(), dtype=np.int64)
    return header, members
