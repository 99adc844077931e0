import json

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pseqfam import _poly
from pseqfam.finite_field import (EvenDegree, FieldCtx, FieldDivisionByZero, LogOfZero, MixedFields,
                                  NotPrime, NotPrimitive, ReducibleModulus, ScaleTooLarge,
                                  WrongResidueClass, all_primitive_codes, build_field, dlog, eta,
                                  trace)

from conftest import SMALL_FIELDS, field


def polymulmod(a, b, mod, p):
    """Schoolbook product mod a monic modulus; independent of the package."""
    n = len(mod) - 1
    r = [0] * (2 * n)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            r[i + j] = (r[i + j] + x * y) % p
    for k in range(len(r) - 1, n - 1, -1):
        c = r[k]
        if c:
            for i in range(n + 1):
                r[k - n + i] = (r[k - n + i] - c * mod[i]) % p
    return r[:n]


@pytest.mark.parametrize("p,n,q,N", [(3, 3, 27, 13), (3, 1, 3, 1), (7, 3, 343, 171)])
def test_build_field_sizes(p, n, q, N):
    ctx = build_field(p, n)
    assert (ctx.q, ctx.N) == (q, N)


def test_prime_field_alpha():
    ctx = build_field(3, 1)
    assert ctx.alpha.coeffs == [2]


def test_default_choices_are_recorded():
    ctx = build_field(3, 3)
    assert ctx.modulus == (1, 2, 0, 1)  # x^3 + 2x + 1
    assert ctx.alpha.coeffs == [0, 1, 0]


@pytest.mark.parametrize("p,n,exc", [
    (9, 1, NotPrime), (5, 3, WrongResidueClass), (3, 2, EvenDegree), (3, 0, EvenDegree),
    (3, 15, ScaleTooLarge),
])
def test_build_field_rejects(p, n, exc):
    with pytest.raises(exc):
        build_field(p, n)


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        build_field(3, 3, modulus=[1, 0, 0, 1])  # (x+1)^3
    with pytest.raises(ReducibleModulus):
        build_field(3, 3, modulus=[1, 2, 1])


def test_non_primitive_alpha_rejected():
    with pytest.raises(NotPrimitive):
        build_field(3, 3, alpha=[2, 0, 0])  # -1 has order 2


def test_irreducibility_against_sympy():
    x = sympy.symbols("x")
    for p, n in [(3, 3), (7, 3), (3, 5), (3, 2), (7, 2), (3, 4)]:
        for code in range(p**n):
            low = [(code // p**i) % p for i in range(n)]
            f = low + [1]
            expected = sympy.Poly(list(reversed(f)), x, modulus=p).is_irreducible
            assert _poly.is_irreducible(f, p) == expected, (p, f)


def test_field_axioms_small(F27):
    els = list(F27.elements())
    zero, one = F27.zero(), F27.one()
    for x in els:
        assert x + zero == x
        assert x * one == x
        assert x - x == zero
        if x:
            assert x * x.inv() == one
    a = F27.alpha
    assert a * a ** (F27.q - 2) == one
    assert a ** -1 == a ** (F27.q - 2)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 342), st.integers(0, 342), st.integers(0, 342))
def test_field_axioms_property(a, b, c):
    ctx = field(7, 3)
    x, y, z = ctx.element(a), ctx.element(b), ctx.element(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x


def test_division_by_zero(F27):
    with pytest.raises(FieldDivisionByZero):
        F27.zero().inv()
    with pytest.raises(LogOfZero):
        dlog(F27.zero())


def test_mixed_fields():
    a = build_field(3, 3).alpha
    b = build_field(3, 3, modulus=[2, 2, 0, 1]).alpha   # x^3 + 2x + 2
    with pytest.raises(MixedFields):
        a + b


def test_alpha_order_brute_force(F27, F343):
    for ctx in (F27, F343):
        mod = list(ctx.modulus)
        a = ctx.alpha.coeffs
        cur = [1] + [0] * (ctx.n - 1)
        order = None
        for k in range(1, ctx.q):
            cur = polymulmod(cur, a, mod, ctx.p)
            if cur == [1] + [0] * (ctx.n - 1):
                order = k
                break
        assert order == ctx.q - 1
        assert ctx.alpha ** (ctx.q - 1) == ctx.one()


def test_trace_examples(F27):
    assert trace(F27.zero()) == 0
    assert trace(F27.one()) == 3 % 3
    assert trace(field(7, 3).one()) == 3
    # oracle: alpha + alpha^3 + alpha^9 by direct polynomial arithmetic
    mod, a = list(F27.modulus), F27.alpha.coeffs
    a3 = polymulmod(polymulmod(a, a, mod, 3), a, mod, 3)
    a9 = polymulmod(polymulmod(a3, a3, mod, 3), a3, mod, 3)
    s = [(x + y + z) % 3 for x, y, z in zip(a, a3, a9)]
    assert s[1:] == [0, 0]
    assert trace(F27.alpha) == s[0]


def test_dlog_examples(F27):
    a = F27.alpha
    assert dlog(F27.one()) == 0
    assert dlog(a) == 1
    assert dlog(a * a) == 2


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_tables_are_inverse(p, n):
    ctx = field(p, n)
    assert np.array_equal(ctx.log[ctx.exp], np.arange(ctx.q - 1))
    assert sorted(ctx.exp.tolist()) == list(range(1, ctx.q))


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_trace_linear_frobenius_balanced(p, n):
    ctx = field(p, n)
    xs = np.arange(ctx.q)
    x, y = np.meshgrid(xs, xs, indexing="ij")
    assert np.array_equal(ctx.tr[ctx.add_codes(x, y)], (ctx.tr[x] + ctx.tr[y]) % p)
    xp = np.where(xs == 0, 0, ctx.exp[(ctx.log[xs] * p) % (ctx.q - 1)])
    assert np.array_equal(ctx.tr[xp], ctx.tr)
    assert np.bincount(ctx.tr, minlength=p).tolist() == [p ** (n - 1)] * p


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_eta_properties(p, n):
    ctx = field(p, n)
    xs = np.arange(1, ctx.q)
    x, y = np.meshgrid(xs, xs, indexing="ij")
    assert np.array_equal(ctx.eta[ctx.mul_codes(x, y)], ctx.eta[x] * ctx.eta[y])
    assert ctx.eta.sum() == 0
    assert (ctx.eta == 1).sum() == ctx.N
    assert eta(ctx.zero()) == 0
    assert eta(-ctx.one()) == -1
    for k in range(0, ctx.q - 1, 2):
        assert ctx.eta[ctx.exp[k]] == 1


def test_eta_matches_squares(F27):
    squares = {(x * x).value for x in F27.elements() if x}
    assert {c for c in range(F27.q) if F27.eta[c] == 1} == squares


def test_json_roundtrip(F343):
    data = json.loads(F343.to_json())
    assert data == {"p": 7, "n": 3, "modulus": list(F343.modulus), "alpha": F343.alpha.coeffs}
    again = FieldCtx.from_json(F343.to_json())
    assert again.key() == F343.key()
    assert np.array_equal(again.tr, F343.tr)


def test_supplied_modulus_and_alpha():
    base = build_field(3, 3, modulus=[2, 2, 0, 1])
    code = all_primitive_codes(base)[-1]
    ctx = build_field(3, 3, modulus=[2, 2, 0, 1], alpha=code)
    assert ctx.modulus == (2, 2, 0, 1)
    assert ctx.alpha.value == code
    assert ctx.alpha ** (ctx.q - 1) == ctx.one()
