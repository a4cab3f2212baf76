"""Pure-Python kernel for dense-exponent sparse integer polynomials.

A polynomial in ``nvars`` variables is a dict mapping exponent tuples
(length ``nvars``, nonnegative ints) to nonzero Python ints.  All
functions are side-effect free and never mutate their arguments.

The compiled twin of this module lives in ``_poly_cy.pyx``; both expose
the same names and must stay behaviourally identical (see
tests/test_kernel_parity.py).
"""

from math import comb, gcd

BACKEND = "python"


def p_zero():
    return {}


def p_const(nvars, c):
    if c == 0:
        return {}
    return {(0,) * nvars: c}


def p_var(nvars, i, c=1):
    # x_i with 0-based index i
    if c == 0:
        return {}
    exp = [0] * nvars
    exp[i] = 1
    return {tuple(exp): c}


def p_is_const(a):
    if not a:
        return True
    if len(a) > 1:
        return False
    exp = next(iter(a))
    return not any(exp)


def p_add(a, b):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    res = dict(a)
    for e, c in b.items():
        s = res.get(e, 0) + c
        if s:
            res[e] = s
        else:
            res.pop(e, None)
    return res


def p_sub(a, b):
    if not b:
        return dict(a)
    res = dict(a)
    for e, c in b.items():
        s = res.get(e, 0) - c
        if s:
            res[e] = s
        else:
            res.pop(e, None)
    return res


def p_neg(a):
    return {e: -c for e, c in a.items()}


def p_mul_int(a, k):
    if k == 0:
        return {}
    if k == 1:
        return dict(a)
    return {e: c * k for e, c in a.items()}


def p_mul(a, b):
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    res = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            ne = tuple(x + y for x, y in zip(e1, e2))
            s = res.get(ne, 0) + c1 * c2
            if s:
                res[ne] = s
            else:
                res.pop(ne, None)
    return res




def _shift_one(a, i, d):
    # substitute x_i -> x_i + d
    res = {}
    for exp, c in a.items():
        e = exp[i]
        if e == 0:
            s = res.get(exp, 0) + c
            if s:
                res[exp] = s
            else:
                res.pop(exp, None)
            continue
        pre = exp[:i]
        post = exp[i + 1:]
        for k in range(e + 1):
            ne = pre + (k,) + post
            s = res.get(ne, 0) + c * comb(e, k) * d ** (e - k)
            if s:
                res[ne] = s
            else:
                res.pop(ne, None)
    return res


def p_shift(a, deltas):
    # substitute x_i -> x_i + deltas[i] for every variable
    res = a
    for i, d in enumerate(deltas):
        if d:
            res = _shift_one(res, i, d)
    return dict(res) if res is a else res


def p_permute(a, perm):
    # x_i -> x_{perm[i]} (0-based); perm must be a bijection
    res = {}
    for exp, c in a.items():
        ne = [0] * len(exp)
        for i, e in enumerate(exp):
            ne[perm[i]] = e
        res[tuple(ne)] = c
    return res


def p_negate(a):
    # x_i -> -x_i for all i
    res = {}
    for exp, c in a.items():
        if sum(exp) & 1:
            res[exp] = -c
        else:
            res[exp] = c
    return res




def p_eval(a, point):
    total = 0
    for exp, c in a.items():
        v = c
        for x, e in zip(point, exp):
            if e:
                v *= x ** e
        total += v
    return total


def grlex_key(exp):
    return (sum(exp), exp)


def p_lead(a):
    # grlex-leading (exponent, coefficient)
    e = max(a, key=grlex_key)
    return e, a[e]


def p_degree(a):
    if not a:
        return -1
    return max(sum(e) for e in a)


def p_content(a):
    g = 0
    for c in a.values():
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


def p_primitive_sign(a):
    """Return (content, sign, primitive part with positive grlex lead).

    Zero polynomial gives (0, 1, {}).
    """
    if not a:
        return 0, 1, {}
    g = p_content(a)
    _, lc = p_lead(a)
    sign = 1 if lc > 0 else -1
    d = g * sign
    if d == 1:
        return g, sign, dict(a)
    return g, sign, {e: c // d for e, c in a.items()}


def fac_key(poly):
    """Canonical hashable form of a factor polynomial."""
    return tuple(sorted(poly.items(), key=lambda t: grlex_key(t[0]),
                        reverse=True))


def p_fraction_normalize(num, dint, fac_items):
    """Canonicalize the fraction num / (dint * prod of factors).

    fac_items is an iterable of (factor key, multiplicity); factors need
    not be primitive or sign-normalized.  Returns (num, dint, factors)
    with dint > 0, factors primitive with positive leading coefficient,
    distinct and sorted, none of them dividing num, and the integer
    content of num coprime to dint.
    """
    if dint < 0:
        dint = -dint
        num = p_neg(num)
    facs = {}
    for key, m in fac_items:
        if not m:
            continue
        poly = dict(key)
        c, sign, prim = p_primitive_sign(poly)
        if p_is_const(prim):
            dint *= c ** m
            if sign < 0 and m % 2:
                num = p_neg(num)
            continue
        if c != 1 or sign < 0:
            dint *= c ** m
            if sign < 0 and m % 2:
                num = p_neg(num)
            key = fac_key(prim)
        facs[key] = facs.get(key, 0) + m
    for key in sorted(facs):
        m = facs[key]
        poly = dict(key)
        while m > 0:
            q = p_divexact(num, poly)
            if q is None:
                break
            num = q
            m -= 1
        if m:
            facs[key] = m
        else:
            del facs[key]
    c = p_content(num)
    g = gcd(c, dint)
    if g > 1:
        num = {e: v // g for e, v in num.items()}
        dint //= g
    return num, dint, tuple(sorted(facs.items()))


def p_divexact(a, b):
    """Exact division a / b, or None when b does not divide a.

    b must be nonzero; correctness over Z requires b primitive (Gauss).
    """
    if not a:
        return {}
    be, bc = p_lead(b)
    bs = sum(be)
    r = dict(a)
    q = {}
    while r:
        re, rc = p_lead(r)
        if sum(re) < bs:
            return None
        qe = tuple(x - y for x, y in zip(re, be))
        if any(v < 0 for v in qe):
            return None
        if rc % bc:
            return None
        qc = rc // bc
        q[qe] = qc
        for e2, c2 in b.items():
            ne = tuple(x + y for x, y in zip(qe, e2))
            s = r.get(ne, 0) - qc * c2
            if s:
                r[ne] = s
            else:
                r.pop(ne, None)
    return q
