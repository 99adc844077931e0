import io
from itertools import product

import numpy as np
import pytest

from pseqfam.sequences import (BadPeriod, FamilyIndex, FamilySpec, IndexOutOfRange, PSequence,
                               UnsupportedD, ZeroBeta, cyclic_inequivalence_check, cyclically_distinct,
                               decimate, family_enumerate, family_indices, family_matrix, family_member,
                               least_rotation, m_sequence, read_family_dump, write_family_dump)

from conftest import SMALL_FIELDS, field


def direct_m(ctx, beta, t):
    """m(t) by element arithmetic, independent of the table path."""
    return (beta * ctx.alpha ** t).trace()


def direct_member(ctx, d, idx, beta=None):
    beta = beta or ctx.one()
    i, j, l = idx
    e = ctx.q - 1
    return [(direct_m(ctx, beta, (2 * t + i) % e) + direct_m(ctx, beta, (d * (t + l) + j) % e)) % ctx.p
            for t in range(ctx.N)]


def test_m_sequence_examples(F27, F343):
    s = m_sequence(F27)
    assert s.period == 26
    assert np.bincount(s.symbols, minlength=3).tolist() == [8, 9, 9]
    s = m_sequence(F343)
    assert np.bincount(s.symbols, minlength=7).tolist() == [48] + [49] * 6
    tiny = field(3, 1)
    s = m_sequence(tiny)
    assert s.symbols.tolist() == [1, 2]     # Tr(1), Tr(2) over F_3
    with pytest.raises(ZeroBeta):
        m_sequence(F27, F27.zero())


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_m_sequence_balance(p, n):
    ctx = field(p, n)
    hist = np.bincount(m_sequence(ctx).symbols, minlength=p)
    assert hist.tolist() == [p ** (n - 1) - 1] + [p ** (n - 1)] * (p - 1)


def test_m_sequence_matches_direct(F27):
    beta = F27.element(5)
    s = m_sequence(F27, beta)
    assert s.symbols.tolist() == [direct_m(F27, beta, t) for t in range(26)]


def test_decimate(F27):
    m = m_sequence(F27)
    assert decimate(m, 1, 26) == m
    half = decimate(m, 2, 13)
    assert half.symbols.tolist() == [m[2 * t] for t in range(13)]
    dec = decimate(m, 14, 13)
    assert dec.symbols.tolist() == [m.symbols[(14 * t) % 26] for t in range(13)]
    with pytest.raises(BadPeriod):
        decimate(m, 2, 5)


@pytest.mark.parametrize("p,n", [(3, 3), (3, 5), (7, 3), (11, 3)])
def test_decimations_have_period_N(p, n):
    ctx = field(p, n)
    m = m_sequence(ctx)
    for d in (2, 4, ctx.N + 1):
        assert decimate(m, d, ctx.N).minimal_period() == ctx.N


def test_psequence_validation():
    with pytest.raises(ValueError):
        PSequence([0, 3], 3)
    with pytest.raises(ValueError):
        PSequence([], 3)
    s = PSequence([0, 1, 2], 3)
    assert s[4] == 1


def test_family_spec_validation(F27):
    with pytest.raises(UnsupportedD):
        FamilySpec(F27, 6)
    with pytest.raises(ZeroBeta):
        FamilySpec(F27, 4, F27.zero())
    assert FamilySpec.from_label(F27, "N+1").d == 14
    assert FamilySpec.from_label(F27, "half-plus-one").d == 14
    assert FamilySpec.from_label(F27, "4").d_label == "4"


@pytest.mark.parametrize("d", [4, 14])
def test_family_member_direct_oracle(F27, d):
    spec = FamilySpec(F27, d)
    for idx in family_indices(spec):
        assert family_member(spec, idx).symbols.tolist() == direct_member(F27, d, idx)
        assert family_member(spec, idx).minimal_period() == 13


def test_family_member_beta_and_shift(F343):
    beta = F343.alpha ** 5
    spec = FamilySpec(F343, 4, beta)
    for idx in [(0, 0, 0), (1, 1, 7), (0, 1, 170), (1, 0, 33)]:
        assert family_member(spec, idx).symbols.tolist() == direct_member(F343, 4, idx, beta)
    # (1, 1, l) is the (0, 0, .) construction with both components shifted by one
    m = m_sequence(F343, beta).symbols
    t = np.arange(F343.N)
    e = F343.q - 1
    ref = (m[(2 * t + 1) % e] + m[(4 * (t + 9) + 1) % e]) % 7
    assert np.array_equal(family_member(spec, (1, 1, 9)).symbols, ref)


def test_family_member_index_errors(F27):
    spec = FamilySpec(F27, 4)
    for bad in [(2, 0, 0), (0, -1, 0), (0, 0, 13)]:
        with pytest.raises(IndexOutOfRange):
            family_member(spec, bad)


@pytest.mark.parametrize("p,n,size", [(3, 3, 52), (7, 3, 684), (3, 1, 4)])
def test_family_size_and_order(p, n, size):
    ctx = field(p, n)
    spec = FamilySpec(ctx, 4)
    items = list(family_enumerate(spec))
    assert len(items) == size
    assert [idx for idx, _ in items] == sorted(idx for idx, _ in items)
    rows = family_matrix(spec)
    for (idx, seq), row in zip(items, rows):
        assert np.array_equal(seq.symbols, row)
    idx = FamilyIndex(1, 0, ctx.N - 1)
    assert np.array_equal(rows[family_indices(spec).index(idx)], family_member(spec, idx).symbols)


def test_least_rotation_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(500):
        n = int(rng.integers(1, 12))
        s = rng.integers(0, 3, size=n).tolist()
        k = least_rotation(s)
        assert s[k:] + s[:k] == min(s[i:] + s[:i] for i in range(n))


def all_pairs_distinct(rows):
    """Direct all-pairs, all-shifts comparison."""
    for a in range(len(rows)):
        for b in range(a + 1, len(rows)):
            for k in range(rows.shape[1]):
                if np.array_equal(rows[a], np.roll(rows[b], k)):
                    return False
    return True


@pytest.mark.parametrize("d", [4, 14])
def test_cyclic_inequivalence_small(F27, d):
    spec = FamilySpec(F27, d)
    rows = family_matrix(spec)
    assert cyclic_inequivalence_check(spec)
    assert all_pairs_distinct(rows)


def test_cyclic_inequivalence_negative_controls(F27):
    rows = family_matrix(FamilySpec(F27, 4))
    dup = rows.copy()
    dup[5] = dup[17]
    assert not cyclically_distinct(dup)
    shifted = rows.copy()
    shifted[5] = np.roll(shifted[17], 4)
    assert not cyclically_distinct(shifted)
    assert not all_pairs_distinct(shifted)


def test_dump_roundtrip(F27):
    spec = FamilySpec(F27, 14, F27.alpha)
    buf = io.StringIO()
    write_family_dump(spec, buf)
    text = buf.getvalue()
    assert text.splitlines()[1].startswith("0,0,0:")
    header, members = read_family_dump(io.StringIO(text))
    assert header == {"p": 3, "n": 3, "d": 14, "beta": [0, 1, 0], "modulus": [1, 2, 0, 1]}
    assert len(members) == 52
    for idx, row in zip(family_indices(spec), family_matrix(spec)):
        assert np.array_equal(members[idx], row)
