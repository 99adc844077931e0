"""Independent reference checks shared by several test modules."""

import math

from pseqfam.char_sums import AdditiveCharacter, CyclotomicInteger, MultiplicativeCharacter, gauss_sum


def gauss_case_violations(ctx):
    """Exhaustive Gauss-sum case table over every beta and every j."""
    bad = []
    q = ctx.q
    for beta in ctx.elements():
        psi = AdditiveCharacter(beta)
        for j in range(q - 1):
            chi = MultiplicativeCharacter(j, ctx)
            g = gauss_sum(psi, chi, ctx)
            z = complex(g)
            if psi.trivial and chi.trivial:
                ok = isinstance(g, CyclotomicInteger) and g.as_integer() == q - 1
            elif psi.trivial:
                ok = abs(z) < 1e-9
            elif chi.trivial:
                ok = isinstance(g, CyclotomicInteger) and g.as_integer() == -1
            else:
                ok = abs(abs(z) - math.sqrt(q)) < 1e-9
            if not ok:
                bad.append((beta.value, j, z))
    return bad
