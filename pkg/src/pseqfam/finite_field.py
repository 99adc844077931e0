"""Table-driven arithmetic in GF(p^n) for odd primes p = 3 (mod 4) and odd n.

Elements are encoded as integers ``c0 + c1*p + ... + c_{n-1}*p^(n-1)`` where
``c0..c_{n-1}`` are the polynomial-basis coefficients (constant term first).
A :class:`FieldCtx` holds the modulus, the primitive element and the full
log/antilog, trace and quadratic-character tables, so that every scalar
operation is a table lookup and every batch operation is a numpy gather.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np
from sympy.ntheory import isprime, primefactors

from . import _poly

MAX_ORDER = 10**6


class FieldError(ValueError):
    """Base class for invalid field construction parameters."""


class NotPrime(FieldError):
    pass


class WrongResidueClass(FieldError):
    pass


class EvenDegree(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class NotPrimitive(FieldError):
    pass


class ScaleTooLarge(FieldError):
    pass


class MixedFields(ValueError):
    pass


class LogOfZero(ArithmeticError):
    pass


class FieldDivisionByZero(ZeroDivisionError):
    pass


class FieldCtx:
    """A concrete realization of GF(p^n).

    Attributes of interest:

    * ``exp[k]``  -- code of alpha^k for k in [0, q-2]
    * ``log[c]``  -- discrete log of code c (``-1`` for zero)
    * ``tr[c]``   -- absolute trace of code c, as an integer in [0, p-1]
    * ``eta[c]``  -- quadratic character of code c (+1, -1 or 0)
    * ``tr_exp[k]`` -- trace of alpha^k, i.e. ``tr[exp[k]]``
    """

    def __init__(self, p: int, n: int, modulus: Sequence[int], alpha_code: int):
        self.p = p
        self.n = n
        self.q = p**n
        self.N = (self.q - 1) // 2
        self.modulus = tuple(int(c) for c in modulus)
        self._powers = p ** np.arange(n, dtype=np.int64)
        self._build_tables(alpha_code)
        self.alpha = FieldElement(self, alpha_code)

    def _build_tables(self, alpha_code: int) -> None:
        p, n, q = self.p, self.n, self.q
        mod = list(self.modulus)
        a = self._coeffs_of(alpha_code)
        exp = np.empty(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = [1]
        for k in range(q - 1):
            code = self._code_of(cur)
            if log[code] != -1:
                raise NotPrimitive(f"element {a} has order {k} < {q - 1}")
            exp[k] = code
            log[code] = k
            cur = _poly.mulmod(cur, a, mod, p)
        self.exp = exp
        self.log = log

        # Tr(alpha^k) = sum_i alpha^(k p^i); summed coefficientwise
        ks = np.arange(q - 1, dtype=np.int64)
        acc = np.zeros((q - 1, n), dtype=np.int64)
        for i in range(n):
            acc += self.digits(exp[(ks * p**i) % (q - 1)])
        acc %= p
        if n > 1 and acc[:, 1:].any():
            raise AssertionError("trace left the prime subfield")
        self.tr_exp = acc[:, 0].copy()
        tr = np.zeros(q, dtype=np.int64)
        tr[exp] = self.tr_exp
        self.tr = tr

        eta = np.zeros(q, dtype=np.int64)
        eta[exp] = np.where(ks % 2 == 0, 1, -1)
        self.eta = eta

        for arr in (self.exp, self.log, self.tr, self.tr_exp, self.eta):
            arr.flags.writeable = False

    # -- encoding -----------------------------------------------------------

    def _coeffs_of(self, code: int) -> list[int]:
        return [(code // self.p**i) % self.p for i in range(self.n)]

    def _code_of(self, coeffs: Iterable[int]) -> int:
        code = 0
        for i, c in enumerate(coeffs):
            code += (c % self.p) * self.p**i
        return code

    def digits(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._powers) % self.p

    def pack(self, digits) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) % self.p) @ self._powers

    # -- batch arithmetic on integer codes ---------------------------------

    def add_codes(self, x, y) -> np.ndarray:
        return self.pack(self.digits(x) + self.digits(y))

    def sub_codes(self, x, y) -> np.ndarray:
        return self.pack(self.digits(x) - self.digits(y))

    def mul_codes(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        k = (self.log[x] + self.log[y]) % (self.q - 1)
        return np.where((x == 0) | (y == 0), 0, self.exp[k])

    def scale_codes(self, x, log_c: int) -> np.ndarray:
        """Multiply codes by alpha^log_c."""
        x = np.asarray(x, dtype=np.int64)
        return np.where(x == 0, 0, self.exp[(self.log[x] + log_c) % (self.q - 1)])

    def eval_poly_codes(self, coeffs: Sequence[int], xs) -> np.ndarray:
        """Evaluate sum_k coeffs[k] x^k at every code in xs (Horner)."""
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(list(coeffs)):
            acc = self.add_codes(self.mul_codes(acc, xs), np.full_like(xs, c))
        return acc

    # -- element construction -----------------------------------------------

    def element(self, value) -> "FieldElement":
        """Build an element from an integer code, a coefficient list, or an element."""
        if isinstance(value, FieldElement):
            _check_same(value.ctx, self)
            return value
        if isinstance(value, np.ndarray) and value.ndim == 0:
            value = value.item()
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.q:
                raise ValueError(f"code {value} outside [0, {self.q - 1}]")
            return FieldElement(self, value)
        coeffs = list(value)
        if len(coeffs) > self.n:
            raise ValueError(f"expected at most {self.n} coefficients")
        return FieldElement(self, self._code_of(coeffs))

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def from_log(self, k: int) -> "FieldElement":
        return FieldElement(self, int(self.exp[k % (self.q - 1)]))

    def elements(self):
        for code in range(self.q):
            yield FieldElement(self, code)

    # -- provenance -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "modulus": list(self.modulus),
            "alpha": self.alpha.coeffs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "FieldCtx":
        return build_field(data["p"], data["n"], modulus=data["modulus"], alpha=data["alpha"])

    @classmethod
    def from_json(cls, text: str) -> "FieldCtx":
        return cls.from_dict(json.loads(text))

    def key(self):
        return (self.p, self.n, self.modulus, self.alpha.value)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={list(self.modulus)}, alpha={self.alpha.coeffs})"


def _check_same(a: FieldCtx, b: FieldCtx) -> None:
    if a is not b and a.key() != b.key():
        raise MixedFields("operands belong to different field realizations")


class FieldElement:
    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = int(value)

    @property
    def coeffs(self) -> list[int]:
        return self.ctx._coeffs_of(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def _other(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            _check_same(self.ctx, other.ctx)
            return other
        if isinstance(other, (int, np.integer)):
            # integers embed through the prime subfield
            return FieldElement(self.ctx, int(other) % self.ctx.p)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        s = [(a + b) % ctx.p for a, b in zip(self.coeffs, other.coeffs)]
        return FieldElement(ctx, ctx._code_of(s))

    __radd__ = __add__

    def __neg__(self):
        ctx = self.ctx
        return FieldElement(ctx, ctx._code_of((-c) % ctx.p for c in self.coeffs))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.value == 0 or other.value == 0:
            return FieldElement(self.ctx, 0)
        ctx = self.ctx
        k = (int(ctx.log[self.value]) + int(ctx.log[other.value])) % (ctx.q - 1)
        return FieldElement(ctx, int(ctx.exp[k]))

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise FieldDivisionByZero("inverse of zero")
        ctx = self.ctx
        return FieldElement(ctx, int(ctx.exp[(-int(ctx.log[self.value])) % (ctx.q - 1)]))

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __pow__(self, k: int):
        ctx = self.ctx
        if self.value == 0:
            if k < 0:
                raise FieldDivisionByZero("negative power of zero")
            return FieldElement(ctx, 1 if k == 0 else 0)
        return FieldElement(ctx, int(ctx.exp[(int(ctx.log[self.value]) * k) % (ctx.q - 1)]))

    def trace(self) -> int:
        return int(self.ctx.tr[self.value])

    def dlog(self) -> int:
        if self.value == 0:
            raise LogOfZero("zero has no discrete logarithm")
        return int(self.ctx.log[self.value])

    def eta(self) -> int:
        return int(self.ctx.eta[self.value])

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and (
                self.ctx is other.ctx or self.ctx.key() == other.ctx.key()
            )
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.n, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.coeffs})"


# Functional spellings of the element operations.

def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def power(x: FieldElement, k: int) -> FieldElement:
    return x**k


def inv(x: FieldElement) -> FieldElement:
    return x.inv()


def trace(x: FieldElement) -> int:
    """Absolute trace Tr(x) = x + x^p + ... + x^(p^(n-1)), as an integer mod p."""
    return x.trace()


def dlog(x: FieldElement) -> int:
    return x.dlog()


def eta(x: FieldElement) -> int:
    """Quadratic character: +1 on nonzero squares, -1 on nonsquares, 0 at zero."""
    return x.eta()


# -- construction --------------------------------------------------------------

def _check_params(p: int, n: int) -> None:
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p % 4 != 3:
        raise WrongResidueClass(f"p = {p} is not 3 mod 4")
    if n < 1 or n % 2 == 0:
        raise EvenDegree(f"n = {n} must be odd and positive")
    if p**n > MAX_ORDER:
        raise ScaleTooLarge(f"q = {p}^{n} exceeds {MAX_ORDER}")


def _candidate_codes(p: int, n: int):
    # smallest integer encoding first, i.e. lexicographic from the top coefficient down
    for code in range(p**n):
        yield [(code // p**i) % p for i in range(n)]


def find_modulus(p: int, n: int) -> list[int]:
    """First monic irreducible of degree n in integer-encoding order."""
    for low in _candidate_codes(p, n):
        f = low + [1]
        if _poly.is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


def is_primitive(coeffs: Sequence[int], modulus: Sequence[int], p: int) -> bool:
    q = p ** (len(modulus) - 1)
    a = _poly.trim(coeffs)
    if not a:
        return False
    if _poly.powmod(a, q - 1, modulus, p) != [1]:
        return False
    return all(_poly.powmod(a, (q - 1) // r, modulus, p) != [1] for r in primefactors(q - 1))


def build_field(p: int, n: int, modulus: Sequence[int] | None = None, alpha=None) -> FieldCtx:
    """Construct GF(p^n) with full lookup tables.

    ``modulus`` is a monic degree-n coefficient list (constant term first); when
    omitted the first irreducible in integer-encoding order is used.  ``alpha``
    may be a coefficient list or integer code; when omitted the primitive
    element with the smallest code is used.
    """
    _check_params(p, n)
    if modulus is None:
        modulus = find_modulus(p, n)
    else:
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ReducibleModulus(f"modulus must be monic of degree {n}: {modulus}")
        if not _poly.is_irreducible(modulus, p):
            raise ReducibleModulus(f"{modulus} is reducible over Z_{p}")

    if alpha is None:
        for cand in _candidate_codes(p, n):
            if is_primitive(cand, modulus, p):
                alpha_coeffs = cand
                break
    else:
        if isinstance(alpha, (int, np.integer)):
            alpha_coeffs = [(int(alpha) // p**i) % p for i in range(n)]
        else:
            alpha_coeffs = [int(c) % p for c in alpha]
            alpha_coeffs += [0] * (n - len(alpha_coeffs))
        if len(alpha_coeffs) != n or not is_primitive(alpha_coeffs, modulus, p):
            raise NotPrimitive(f"{list(alpha)} is not a primitive element")
    alpha_code = sum(c * p**i for i, c in enumerate(alpha_coeffs))
    return FieldCtx(p, n, modulus, alpha_code)


def primitive_elements(ctx: FieldCtx):
    """Yield codes of all primitive elements alpha^k, gcd(k, q-1) = 1, in order of k."""
    for k in range(1, ctx.q - 1):
        if np.gcd(k, ctx.q - 1) == 1:
            yield int(ctx.exp[k])


def all_primitive_codes(ctx: FieldCtx) -> list[int]:
    return sorted(primitive_elements(ctx))
