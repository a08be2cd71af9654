# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled polynomial kernels; same contract as ``_kernel_py``."""
from gmpy2 import mpq

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM


cdef inline object _norm(object c):
    if type(c) is mpq and c.denominator == 1:
        return int(c)
    return c


cdef inline tuple _add_exps(tuple ea, tuple eb):
    cdef Py_ssize_t i, n = len(ea)
    cdef tuple e = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = <long>ea[i] + <long>eb[i]
        Py_INCREF(v)
        PyTuple_SET_ITEM(e, i, v)
    return e


def add(dict a, dict b):
    cdef dict out = dict(a)
    cdef object e, c, s
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


def sub(dict a, dict b):
    cdef dict out = dict(a)
    cdef object e, c, s
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


def scale(dict a, object k):
    if not k:
        return {}
    cdef dict out = {}
    cdef object e, c
    for e, c in a.items():
        out[e] = _norm(c * k)
    return out


def mul(dict a, dict b):
    if len(a) < len(b):
        a, b = b, a
    cdef dict acc = {}
    cdef list aitems = list(a.items())
    cdef tuple ea, eb, e
    cdef object ca, cb, s
    for eb, cb in b.items():
        for ea, ca in aitems:
            e = _add_exps(ea, eb)
            s = acc.get(e)
            if s is None:
                acc[e] = ca * cb
            else:
                acc[e] = s + ca * cb
    cdef dict out = {}
    for e, s in acc.items():
        if s:
            out[e] = _norm(s)
    return out


def partial(dict a, Py_ssize_t var):
    cdef dict out = {}
    cdef tuple e
    cdef object c
    cdef long k
    for e, c in a.items():
        k = e[var]
        if k:
            out[e[:var] + (k - 1,) + e[var + 1:]] = c * k
    return out


def evaluate(dict a, list point):
    cdef Py_ssize_t i, n = len(point)
    cdef list powers = []
    cdef list row
    cdef object total = 0
    cdef object term
    cdef tuple e
    cdef long k
    for i in range(n):
        powers.append([1])
    for e, c in a.items():
        term = c
        for i in range(n):
            k = e[i]
            if k:
                row = <list>powers[i]
                while len(row) <= k:
                    row.append(row[len(row) - 1] * point[i])
                term = term * row[k]
        total += term
    return mpq(total)


def truncate(dict a, long max_degree):
    cdef dict out = {}
    cdef tuple e
    cdef object c
    for e, c in a.items():
        if sum(e) <= max_degree:
            out[e] = c
    return out
