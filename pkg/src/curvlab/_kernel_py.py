"""Pure-Python polynomial kernels.

Polynomials are dicts mapping exponent tuples to nonzero rational
coefficients. Coefficients are ``int`` whenever the value is integral and
``gmpy2.mpq`` otherwise; every function here preserves that normalization.
The compiled ``_kernel`` module exposes the same functions.
"""
from gmpy2 import mpq


def _norm(c):
    if type(c) is mpq and c.denominator == 1:
        return int(c)
    return c


def add(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        if s is None:
            out[e] = c
        else:
            s = _norm(s + c)
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def sub(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        if s is None:
            out[e] = -c
        else:
            s = _norm(s - c)
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def scale(a, k):
    if not k:
        return {}
    return {e: _norm(c * k) for e, c in a.items()}


def mul(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple([i + j for i, j in zip(ea, eb)])
            s = get(e)
            out[e] = ca * cb if s is None else s + ca * cb
    return {e: _norm(c) for e, c in out.items() if c}


def partial(a, var):
    out = {}
    for e, c in a.items():
        k = e[var]
        if k:
            e2 = e[:var] + (k - 1,) + e[var + 1:]
            out[e2] = c * k
    return out


def evaluate(a, point):
    n = len(point)
    powers = [[1] for _ in range(n)]
    total = 0
    for e, c in a.items():
        term = c
        for i in range(n):
            k = e[i]
            if k:
                row = powers[i]
                while len(row) <= k:
                    row.append(row[-1] * point[i])
                term = term * row[k]
        total += term
    return mpq(total)


def truncate(a, max_degree):
    return {e: c for e, c in a.items() if sum(e) <= max_degree}
