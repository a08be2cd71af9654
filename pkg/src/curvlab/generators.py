"""Seeded random instances for the property suites."""
import itertools
import random

from gmpy2 import mpq
import numpy as np

from . import linalg
from .jets import Jet1ACS, Jet1Connection, Jet1Super, Jet2Diffeo, Jet2VertAut, canonical_acs
from .polyfield import PolyMatrix, PolyScalar, SlotKind, TensorPolyField, coordinates


class Generator:
    """Small random polynomials, fields and jets with integer coefficients in ``[-c, c]``."""

    def __init__(self, seed=0, coeff=3, terms=3):
        self.rng = random.Random(seed)
        self.coeff = coeff
        self.terms = terms

    def integer(self, lo=None, hi=None):
        lo = -self.coeff if lo is None else lo
        hi = self.coeff if hi is None else hi
        return self.rng.randint(lo, hi)

    def rational(self):
        return mpq(self.integer(), self.rng.randint(1, 4))

    def point(self, m):
        return [self.rational() for _ in range(m)]

    def poly(self, m, degree=2, variables=None):
        variables = list(range(m)) if variables is None else list(variables)
        xs = coordinates(m)
        p = PolyScalar.zero(m)
        for _ in range(self.terms):
            t = PolyScalar.constant(self.integer(), m)
            if variables:
                for _ in range(self.rng.randint(0, degree)):
                    t = t * xs[self.rng.choice(variables)]
            p = p + t
        return p

    def matrix(self, rows, cols, m, degree=2):
        return PolyMatrix([[self.poly(m, degree) for _ in range(cols)] for _ in range(rows)], m)

    def connection(self, m, n, degree=2):
        return TensorPolyField.connection([self.matrix(n, n, m, degree) for _ in range(m)])

    def unipotent(self, n, m, degree=2):
        """``I + strictly upper triangular`` polynomial gauge, conjugated by a random permutation."""
        arr = PolyMatrix.identity(n, m).entries.copy()
        for i in range(n):
            for k in range(i + 1, n):
                arr[i, k] = self.poly(m, degree)
        perm = list(range(n))
        self.rng.shuffle(perm)
        return PolyMatrix(arr[np.ix_(perm, perm)], m)

    def form(self, m, k, degree=2):
        arr = np.empty((m,) * k, dtype=object)
        zero = PolyScalar.zero(m)
        for idx in itertools.product(range(m), repeat=k):
            arr[idx] = zero
        for idx in itertools.combinations(range(m), k):
            p = self.poly(m, degree)
            for perm in itertools.permutations(range(k)):
                sign = _perm_sign(perm)
                arr[tuple(idx[i] for i in perm)] = p if sign > 0 else -p
        return TensorPolyField.form(arr, m)

    def section(self, n, m, degree=2):
        return TensorPolyField([self.poly(m, degree) for _ in range(n)],
                               [(SlotKind.FIBER_OUT, n)], m)

    def triangular_diffeo(self, m, degree=2):
        """``x^mu + f^mu(x^{mu+1}, ..., x^m)``: unipotent Jacobian, polynomial inverse."""
        xs = coordinates(m)
        out = []
        for mu in range(m):
            later = list(range(mu + 1, m))
            f = self.poly(m, degree, later) if later else PolyScalar.zero(m)
            f = f - f.constant_term
            out.append(xs[mu] + f)
        return out

    def constant_acs(self, m):
        """``L J0 L^-1`` for a random invertible integer ``L``."""
        j0 = canonical_acs(m)
        while True:
            L = linalg.as_rational([[self.integer(-2, 2) for _ in range(m)] for _ in range(m)])
            if linalg.det(L) != 0:
                return L @ j0 @ linalg.inverse(L)

    def elementary(self, m, factors, degree=1):
        """``(U, U^-1)`` for ``U`` a product of ``factors`` matrices ``I + p E_ik``, ``i != k``."""
        U = V = PolyMatrix.identity(m, m)
        for _ in range(factors):
            i, k = self.rng.sample(range(m), 2)
            p = self.poly(m, degree)
            e = PolyMatrix.identity(m, m).entries.copy()
            e[i, k] = p
            f = e.copy()
            f[i, k] = -p
            U = U @ PolyMatrix(e, m)
            V = PolyMatrix(f, m) @ V
        return U, V

    def acs_field(self, m, degree=1, factors=None):
        """``U J U^-1`` with ``U`` polynomial with polynomial inverse and ``J`` constant.

        ``U`` is dense unipotent, or with ``factors`` a short product of elementary ones.
        """
        J = PolyMatrix.from_constant(self.constant_acs(m), m)
        if factors is None:
            U = self.unipotent(m, m, degree)
            V = U.inverse_unipotent()
        else:
            U, V = self.elementary(m, factors, degree)
        return TensorPolyField.endomorphism(U @ J @ V)

    def metric_polynomial(self, m, degree=1):
        """``U^T D U``: det is a positive constant, so the inverse is polynomial."""
        U = self.unipotent(m, m, degree)
        D = PolyMatrix.from_constant(
            [[self.rng.randint(1, 3) if i == k else 0 for k in range(m)] for i in range(m)], m)
        return U.T @ D @ U

    def metric_general(self, m, degree=2):
        """``c I + S`` with a random symmetric polynomial perturbation ``S``."""
        arr = np.empty((m, m), dtype=object)
        for i in range(m):
            for k in range(i, m):
                p = self.poly(m, degree)
                p = p - p.constant_term
                if i == k:
                    p = p + 4
                arr[i, k] = arr[k, i] = p
        return PolyMatrix(arr, m)

    # -- jets

    def rat_array(self, shape):
        size = int(np.prod(shape)) if shape else 1
        out = np.empty(size, dtype=object)
        out[:] = [self.rational() for _ in range(size)]
        return out.reshape(shape)

    def connection_jet(self, m, n):
        return Jet1Connection(self.rat_array((m, n, n)), self.rat_array((m, m, n, n)))

    def vert_aut(self, m, n, normalized=True):
        b2 = self.rat_array((m, m, n, n))
        b2 = b2 + np.swapaxes(b2, 0, 1)
        if normalized:
            return Jet2VertAut.normalized(self.rat_array((m, n, n)), b2)
        while True:
            b0 = self.rat_array((n, n))
            if linalg.det(b0) != 0:
                return Jet2VertAut(b0, self.rat_array((m, n, n)), b2)

    def diffeo_jet(self, m, normalized=True):
        b2 = self.rat_array((m, m, m))
        b2 = b2 + np.swapaxes(b2, 1, 2)
        if normalized:
            return Jet2Diffeo.normalized(b2)
        while True:
            b = self.rat_array((m, m))
            if linalg.det(b) != 0:
                return Jet2Diffeo(b, b2)

    def acs_jet(self, m, J=None):
        J = self.constant_acs(m) if J is None else J
        mats = []
        for _ in range(m):
            Y = self.rat_array((m, m))
            mats.append(Y + J @ Y @ J)
        return Jet1ACS(J, np.stack(mats, axis=2))

    def super_jet(self, m, p, q):
        r = self.rat_array
        return Jet1Super(r((p, q)), r((q, p)), r((m, p, q)), r((m, q, p)),
                         r((m, p, p)), r((m, m, p, p)), r((m, q, q)), r((m, m, q, q)))

    def superconnection(self, m, p, q, degree=2):
        from .supergeometry import SuperconnectionField

        return SuperconnectionField(self.connection(m, p, degree), self.connection(m, q, degree),
                                    self.matrix(p, q, m, degree), self.matrix(q, p, m, degree))


def _perm_sign(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign
