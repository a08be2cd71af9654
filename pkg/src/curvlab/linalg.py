"""Exact linear algebra over Q on object arrays of rationals.

Thin adapter over sympy's DomainMatrix (QQ domain); everything crossing
this boundary is an ndarray of rationals (``int`` or ``gmpy2.mpq``).
"""
from gmpy2 import mpq
import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import ArgumentError, CurvlabError


class SingularSystemError(CurvlabError):
    """A linear system has no solution or a matrix has no inverse."""


def as_rational(values):
    """Object ndarray of mpq from nested numbers."""
    arr = np.asarray(values, dtype=object)
    if arr.size == 0:
        return np.empty(arr.shape, dtype=object)
    return np.asarray(_to_mpq(arr), dtype=object)


_to_mpq = np.frompyfunc(mpq, 1, 1)


def _to_dm(arr):
    arr = np.asarray(arr, dtype=object)
    if arr.ndim != 2:
        raise ArgumentError(f"expected a 2-d array, got shape {arr.shape}")
    rows = [[QQ(mpq(v)) for v in row] for row in arr]
    return DomainMatrix(rows, arr.shape, QQ)


def _from_dm(dm):
    rows, cols = dm.shape
    out = np.empty((rows, cols), dtype=object)
    for i, row in enumerate(dm.to_list()):
        for j, v in enumerate(row):
            out[i, j] = mpq(v.numerator, v.denominator)
    return out


def rank(arr):
    arr = np.asarray(arr, dtype=object)
    if arr.size == 0:
        return 0
    return _to_dm(arr).rank()


def nullspace(arr):
    """Rows spanning ``{v : arr @ v = 0}`` (shape ``(k, cols)``)."""
    arr = np.asarray(arr, dtype=object)
    cols = arr.shape[1]
    if arr.shape[0] == 0:
        return as_rational(np.eye(cols, dtype=int))
    ns = _to_dm(arr).nullspace()
    if ns.shape[0] == 0 or ns.shape[1] == 0:
        return np.empty((0, cols), dtype=object)
    return _from_dm(ns)


def inverse(arr):
    arr = np.asarray(arr, dtype=object)
    if arr.shape[0] != arr.shape[1]:
        raise ArgumentError("inverse of a non-square matrix")
    dm = _to_dm(arr)
    if dm.det() == 0:
        raise SingularSystemError("matrix is singular")
    return _from_dm(dm.inv())


def det(arr):
    v = _to_dm(arr).det()
    return mpq(v.numerator, v.denominator)


def solve(arr, rhs):
    """One exact solution of ``arr @ x = rhs`` (free variables set to 0).

    Raises SingularSystemError when the system is inconsistent.
    """
    arr = np.asarray(arr, dtype=object)
    rhs = np.asarray(rhs, dtype=object).reshape(-1, 1)
    rows, cols = arr.shape
    aug = np.concatenate([arr, rhs], axis=1)
    red, pivots = _to_dm(aug).rref()
    if cols in pivots:
        raise SingularSystemError("inconsistent linear system")
    red = red.to_sdm()
    x = np.array([mpq(0)] * cols, dtype=object)
    for r, p in enumerate(pivots):
        v = red.get(r, {}).get(cols)
        if v is not None:
            x[p] = mpq(v.numerator, v.denominator)
    return x


class Solver:
    """Reusable exact solver for ``arr @ x = rhs`` with a fixed ``arr``.

    The first ``direct`` calls are plain ``solve``s. After that ``[arr | I]`` is
    row-reduced once and each solve is a matrix-vector product plus a
    consistency check on the zero rows. Both give the same solution.
    """

    def __init__(self, arr, direct=2):
        self.arr = np.asarray(arr, dtype=object)
        self.direct = direct
        self._E = None
        self._calls = 0

    def _reduce(self):
        rows, cols = self.arr.shape
        aug = np.concatenate([self.arr, identity(rows)], axis=1)
        red, pivots = _to_dm(aug).rref()
        self.pivots = [p for p in pivots if p < cols]
        self._E = _from_dm(red)[:, cols:]

    def __call__(self, rhs):
        self._calls += 1
        if self._calls <= self.direct:
            return solve(self.arr, rhs)
        if self._E is None:
            self._reduce()
        y = self._E @ np.asarray(rhs, dtype=object).reshape(-1)
        r = len(self.pivots)
        if any(v != 0 for v in y[r:]):
            raise SingularSystemError("inconsistent linear system")
        x = np.array([mpq(0)] * self.arr.shape[1], dtype=object)
        x[self.pivots] = y[:r]
        return x


def matmul(a, b):
    """Exact product of rational object arrays (numpy handles object dtype)."""
    return np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)


def identity(n):
    return as_rational(np.eye(n, dtype=int))


def zeros(shape):
    out = np.empty(shape, dtype=object)
    out.fill(mpq(0))
    return out


def is_zero(arr):
    return all(v == 0 for v in np.asarray(arr, dtype=object).flat)


def array_equal(a, b):
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))
