"""Dense polynomials over Z_p, coefficient lists with the constant term first."""

from sympy.ntheory import primefactors


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def sub(a, b, p):
    m = max(len(a), len(b))
    a = list(a) + [0] * (m - len(a))
    b = list(b) + [0] * (m - len(b))
    return trim((x - y) % p for x, y in zip(a, b))


def divmod_poly(a, f, p):
    """Return (quotient, remainder) of a by f over Z_p; f must be nonzero."""
    a = trim(a)
    f = trim(f)
    if not f:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(f[-1], -1, p)
    df = len(f) - 1
    quot = [0] * max(len(a) - df, 0)
    rem = list(a)
    for k in range(len(rem) - 1, df - 1, -1):
        c = rem[k] * inv_lead % p
        if c:
            quot[k - df] = c
            for i in range(df + 1):
                rem[k - df + i] = (rem[k - df + i] - c * f[i]) % p
    return trim(quot), trim(rem[:df])


def mulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return divmod_poly([c % p for c in prod], f, p)[1]


def powmod(a, e, f, p):
    result = [1]
    base = divmod_poly(a, f, p)[1]
    while e:
        if e & 1:
            result = mulmod(result, base, f, p)
        base = mulmod(base, base, f, p)
        e >>= 1
    return divmod_poly(result, f, p)[1]


def gcd(a, b, p):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(f, p):
    """Rabin's test for a monic polynomial f of degree n >= 1 over Z_p.

    f is irreducible iff x^(p^n) = x mod f and gcd(x^(p^(n/r)) - x, f) = 1
    for every prime r dividing n.
    """
    f = trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]

    def frobenius_power(k):
        # x^(p^k) mod f by k successive p-th powers
        y = x
        for _ in range(k):
            y = powmod(y, p, f, p)
        return y

    if sub(frobenius_power(n), x, p):
        return False
    for r in primefactors(n):
        if gcd(sub(frobenius_power(n // r), x, p), f, p) != [1]:
            return False
    return True
