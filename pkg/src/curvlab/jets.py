"""Jets of polynomial sections and of group elements at a point.

All jets are taken in a chart centered at the base point: fields are first
translated so the point becomes the origin, then value and derivative data
are read off the Taylor coefficients. Constant jet data are object arrays
of ``gmpy2.mpq``.
"""
import itertools
from dataclasses import dataclass, fields

from gmpy2 import mpq
import numpy as np

from . import linalg
from .errors import ArgumentError, InvalidSectionError
from .polyfield import PolyMatrix, PolyScalar, TensorPolyField, coordinates, frozen, rational


def _rat(values, shape, name):
    arr = linalg.as_rational(values)
    if arr.shape != shape:
        raise ArgumentError(f"{name} has shape {arr.shape}, expected {shape}")
    return frozen(arr)


class _JetBase:
    """Equality and copying shared by the jet dataclasses."""

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return all(linalg.array_equal(getattr(self, f.name), getattr(other, f.name))
                   for f in fields(self))

    def __hash__(self):
        return hash(tuple(tuple(getattr(self, f.name).flat) for f in fields(self)))

    def replace(self, **changes):
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return type(self)(**data)


def _symmetric_first_pair(arr):
    m = arr.shape[0]
    return all(linalg.array_equal(arr[a, b], arr[b, a]) for a in range(m) for b in range(a + 1, m))


# -- jet types -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Jet1Connection(_JetBase):
    """1-jet of connection coefficients: ``A[mu]`` and ``dA[mu, alpha] = d_alpha A_mu``."""

    A: np.ndarray
    dA: np.ndarray

    def __post_init__(self):
        a = linalg.as_rational(self.A)
        if a.ndim != 3 or a.shape[1] != a.shape[2]:
            raise ArgumentError(f"A must have shape (m, n, n), got {a.shape}")
        m, n, _ = a.shape
        object.__setattr__(self, "A", frozen(a))
        object.__setattr__(self, "dA", _rat(self.dA, (m, m, n, n), "dA"))

    @property
    def base_dim(self):
        return self.A.shape[0]

    @property
    def fiber_dim(self):
        return self.A.shape[1]

    @classmethod
    def zero(cls, m, n):
        return cls(linalg.zeros((m, n, n)), linalg.zeros((m, m, n, n)))

    def field(self):
        """The connection whose coefficients are exactly this jet's Taylor polynomial."""
        m, n = self.base_dim, self.fiber_dim
        xs = coordinates(m)
        mats = []
        for mu in range(m):
            entries = np.empty((n, n), dtype=object)
            for a in range(n):
                for b in range(n):
                    p = PolyScalar.constant(self.A[mu, a, b], m)
                    for al in range(m):
                        p = p + xs[al] * self.dA[mu, al, a, b]
                    entries[a, b] = p
            mats.append(PolyMatrix(entries, m))
        return TensorPolyField.connection(mats)


@dataclass(frozen=True, eq=False)
class Jet2VertAut(_JetBase):
    """2-jet of a gauge transformation: ``B0 + B_a x^a + 1/2 B2_ab x^a x^b``."""

    B0: np.ndarray
    B: np.ndarray
    B2: np.ndarray

    def __post_init__(self):
        b0 = linalg.as_rational(self.B0)
        if b0.ndim != 2 or b0.shape[0] != b0.shape[1]:
            raise ArgumentError(f"B0 must be square, got shape {b0.shape}")
        n = b0.shape[0]
        b = linalg.as_rational(self.B)
        if b.ndim != 3 or b.shape[1:] != (n, n):
            raise ArgumentError(f"B must have shape (m, {n}, {n}), got {b.shape}")
        m = b.shape[0]
        b2 = _rat(self.B2, (m, m, n, n), "B2")
        if linalg.det(b0) == 0:
            raise ArgumentError("B0 must be invertible")
        if not _symmetric_first_pair(b2):
            raise ArgumentError("B2 must be symmetric in its two base indices")
        object.__setattr__(self, "B0", frozen(b0))
        object.__setattr__(self, "B", frozen(b))
        object.__setattr__(self, "B2", b2)

    @property
    def base_dim(self):
        return self.B.shape[0]

    @property
    def fiber_dim(self):
        return self.B0.shape[0]

    @classmethod
    def identity(cls, m, n):
        return cls(linalg.identity(n), linalg.zeros((m, n, n)), linalg.zeros((m, m, n, n)))

    @classmethod
    def normalized(cls, B, B2):
        B = linalg.as_rational(B)
        return cls(linalg.identity(B.shape[1]), B, B2)

    def is_normalized(self):
        return linalg.array_equal(self.B0, linalg.identity(self.fiber_dim))

    def compose(self, other):
        """2-jet of the pointwise product ``self(x) @ other(x)``."""
        m = self.base_dim
        b0 = self.B0 @ other.B0
        b = np.array([self.B0 @ other.B[a] + self.B[a] @ other.B0 for a in range(m)])
        b2 = np.empty(self.B2.shape, dtype=object)
        for a, c in itertools.product(range(m), repeat=2):
            b2[a, c] = (self.B0 @ other.B2[a, c] + self.B2[a, c] @ other.B0
                        + self.B[a] @ other.B[c] + self.B[c] @ other.B[a])
        return Jet2VertAut(b0, b, b2)

    def inverse(self):
        m = self.base_dim
        c0 = linalg.inverse(self.B0)
        c = np.array([-(c0 @ self.B[a] @ c0) for a in range(m)])
        c2 = np.empty(self.B2.shape, dtype=object)
        for a, b in itertools.product(range(m), repeat=2):
            c2[a, b] = -(c0 @ (self.B2[a, b] @ c0 + self.B[a] @ c[b] + self.B[b] @ c[a]))
        return Jet2VertAut(c0, c, c2)

    def polynomial(self):
        """The gauge transformation equal to its own 2-jet, as a PolyMatrix."""
        m, n = self.base_dim, self.fiber_dim
        xs = coordinates(m)
        entries = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                p = PolyScalar.constant(self.B0[i, j], m)
                for a in range(m):
                    p = p + xs[a] * self.B[a, i, j]
                    for b in range(m):
                        p = p + xs[a] * xs[b] * (self.B2[a, b, i, j] / 2)
                entries[i, j] = p
        return PolyMatrix(entries, m)


@dataclass(frozen=True, eq=False)
class Jet1ACS(_JetBase):
    """1-jet of an almost complex structure: ``J`` and ``C[mu, nu, rho] = d_rho J^mu_nu``."""

    J: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        j = linalg.as_rational(self.J)
        if j.ndim != 2 or j.shape[0] != j.shape[1]:
            raise ArgumentError(f"J must be square, got shape {j.shape}")
        m = j.shape[0]
        c = _rat(self.C, (m, m, m), "C")
        bad = _first_nonzero(j @ j + linalg.identity(m))
        if bad is not None:
            raise InvalidSectionError(f"J^2 != -1 at component {bad}", bad)
        for rho in range(m):
            cr = c[:, :, rho]
            bad = _first_nonzero(j @ cr + cr @ j)
            if bad is not None:
                raise InvalidSectionError(
                    f"C breaks J*C_rho + C_rho*J = 0 at rho={rho}, component {bad}", bad + (rho,))
        object.__setattr__(self, "J", frozen(j))
        object.__setattr__(self, "C", c)

    @property
    def base_dim(self):
        return self.J.shape[0]

    def C_matrix(self, rho):
        """``(C^mu_{nu rho})_{mu nu}`` for a fixed derivative direction."""
        return self.C[:, :, rho]

    def field(self):
        m = self.base_dim
        xs = coordinates(m)
        entries = np.empty((m, m), dtype=object)
        for mu in range(m):
            for nu in range(m):
                p = PolyScalar.constant(self.J[mu, nu], m)
                for rho in range(m):
                    p = p + xs[rho] * self.C[mu, nu, rho]
                entries[mu, nu] = p
        return TensorPolyField.endomorphism(PolyMatrix(entries, m))


@dataclass(frozen=True, eq=False)
class Jet2Diffeo(_JetBase):
    """2-jet at 0 of a diffeomorphism fixing 0: ``B x + 1/2 B2(x, x)``."""

    B: np.ndarray
    B2: np.ndarray

    def __post_init__(self):
        b = linalg.as_rational(self.B)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ArgumentError(f"B must be square, got shape {b.shape}")
        m = b.shape[0]
        b2 = _rat(self.B2, (m, m, m), "B2")
        if linalg.det(b) == 0:
            raise ArgumentError("linear part B must be invertible")
        for mu in range(m):
            if not linalg.array_equal(b2[mu], b2[mu].T):
                raise ArgumentError("B2 must be symmetric in its lower indices")
        object.__setattr__(self, "B", frozen(b))
        object.__setattr__(self, "B2", b2)

    @property
    def base_dim(self):
        return self.B.shape[0]

    @classmethod
    def identity(cls, m):
        return cls(linalg.identity(m), linalg.zeros((m, m, m)))

    @classmethod
    def normalized(cls, B2):
        B2 = linalg.as_rational(B2)
        return cls(linalg.identity(B2.shape[0]), B2)

    def is_normalized(self):
        return linalg.array_equal(self.B, linalg.identity(self.base_dim))

    def compose(self, other):
        """2-jet of ``self o other`` (apply ``other`` first)."""
        b = self.B @ other.B
        b2 = (np.einsum("mn,nab->mab", self.B, other.B2)
              + np.einsum("mnk,na,kb->mab", self.B2, other.B, other.B, optimize=True))
        return Jet2Diffeo(b, b2)

    def inverse(self):
        binv = linalg.inverse(self.B)
        b2 = -np.einsum("mn,nkl,ka,lb->mab", binv, self.B2, binv, binv, optimize=True)
        return Jet2Diffeo(binv, b2)

    def polynomial(self):
        m = self.base_dim
        xs = coordinates(m)
        out = []
        for mu in range(m):
            p = PolyScalar.zero(m)
            for a in range(m):
                p = p + xs[a] * self.B[mu, a]
                for b in range(m):
                    p = p + xs[a] * xs[b] * (self.B2[mu, a, b] / 2)
            out.append(p)
        return out


@dataclass(frozen=True, eq=False)
class Jet1Super(_JetBase):
    """1-jet of a superconnection ``(chi, A+, A-)`` on a grading ``(n+, n-)``.

    ``dchi_pm[mu] = d_mu chi_pm``; ``dAp[mu, rho] = d_rho A+_mu`` (same for the
    minus blocks).
    """

    chi_pm: np.ndarray
    chi_mp: np.ndarray
    dchi_pm: np.ndarray
    dchi_mp: np.ndarray
    Ap: np.ndarray
    dAp: np.ndarray
    Am: np.ndarray
    dAm: np.ndarray

    def __post_init__(self):
        pm = linalg.as_rational(self.chi_pm)
        if pm.ndim != 2:
            raise ArgumentError("chi_pm must be a matrix")
        p, q = pm.shape
        ap = linalg.as_rational(self.Ap)
        if ap.ndim != 3:
            raise ArgumentError("Ap must have shape (m, n+, n+)")
        m = ap.shape[0]
        shapes = {
            "chi_pm": (p, q), "chi_mp": (q, p), "dchi_pm": (m, p, q), "dchi_mp": (m, q, p),
            "Ap": (m, p, p), "dAp": (m, m, p, p), "Am": (m, q, q), "dAm": (m, m, q, q),
        }
        for name, shape in shapes.items():
            object.__setattr__(self, name, _rat(getattr(self, name), shape, name))

    @property
    def base_dim(self):
        return self.Ap.shape[0]

    @property
    def grading(self):
        return self.chi_pm.shape

    @classmethod
    def zero(cls, m, n_plus, n_minus):
        p, q = n_plus, n_minus
        z = linalg.zeros
        return cls(z((p, q)), z((q, p)), z((m, p, q)), z((m, q, p)),
                   z((m, p, p)), z((m, m, p, p)), z((m, q, q)), z((m, m, q, q)))

    def plus_connection(self):
        return Jet1Connection(self.Ap, self.dAp)

    def minus_connection(self):
        return Jet1Connection(self.Am, self.dAm)


def _first_nonzero(arr):
    for idx, v in np.ndenumerate(arr):
        if v != 0:
            return idx
    return None


# -- prolongation ------------------------------------------------------------


def _centered(poly, point):
    if len(point) != poly.num_vars:
        raise ArgumentError(f"point has length {len(point)}, expected {poly.num_vars}")
    return poly.shift(point)


def _value_grad(poly, point):
    q = _centered(poly, point)
    m = q.num_vars
    unit = np.eye(m, dtype=int)
    return q.constant_term, [q.coefficient(unit[a]) for a in range(m)]


def _hessian(q):
    m = q.num_vars
    hess = np.empty((m, m), dtype=object)
    for a in range(m):
        for b in range(m):
            exp = [0] * m
            exp[a] += 1
            exp[b] += 1
            c = q.coefficient(exp)
            hess[a, b] = 2 * c if a == b else c
    return hess


def jet_array(arr, point):
    """Value and gradient of every polynomial in an object array.

    Returns ``(value, grad)`` with ``grad[..., alpha] = d_alpha`` at the point.
    """
    value = np.empty(arr.shape, dtype=object)
    m = len(point)
    grad = np.empty(arr.shape + (m,), dtype=object)
    for idx, p in np.ndenumerate(arr):
        v, g = _value_grad(p, point)
        value[idx] = v
        grad[idx] = g
    return value, grad


def _connection_array(A):
    if isinstance(A, TensorPolyField):
        if A.rank != 3 or A.shape[1] != A.shape[2] or A.shape[0] != A.base_dim:
            raise ArgumentError(f"connection field must have shape (m, n, n), got {A.shape}")
        return A.components
    mats = list(A)
    return TensorPolyField.connection(mats).components


def prolong_connection(A, point):
    """1-jet of connection coefficients at ``point``."""
    arr = _connection_array(A)
    m = arr.shape[0]
    point = [rational(c) for c in point]
    if len(point) != m:
        raise ArgumentError(f"point has length {len(point)}, expected {m}")
    value, grad = jet_array(arr, point)
    # grad[mu, a, b, alpha] -> dA[mu, alpha, a, b]
    return Jet1Connection(value, np.moveaxis(grad, 3, 1))


def _endomorphism_array(J):
    if isinstance(J, TensorPolyField):
        return J.components
    if isinstance(J, PolyMatrix):
        return J.entries
    raise ArgumentError("expected an endomorphism field (TensorPolyField or PolyMatrix)")


def check_acs(J):
    """Raise InvalidSectionError unless ``J @ J == -1`` identically."""
    arr = _endomorphism_array(J)
    m = arr.shape[0]
    if arr.shape != (m, m):
        raise ArgumentError(f"almost complex structure must be square, got {arr.shape}")
    mat = PolyMatrix(arr)
    sq = mat @ mat + PolyMatrix.identity(m, mat.num_vars)
    for idx, p in np.ndenumerate(sq.entries):
        if not p.is_zero():
            raise InvalidSectionError(
                f"J^2 != -1: component ({idx[0] + 1},{idx[1] + 1}) of J^2 + 1 is {p}", idx)


def prolong_acs(J, point):
    """1-jet of an almost complex structure; validates ``J^2 = -1`` first."""
    check_acs(J)
    arr = _endomorphism_array(J)
    point = [rational(c) for c in point]
    value, grad = jet_array(arr, point)
    return Jet1ACS(value, grad)


def prolong_super(s, point):
    """1-jet of a superconnection field (see ``supergeometry.SuperconnectionField``)."""
    point = [rational(c) for c in point]
    pm, dpm = jet_array(s.chi_pm.entries, point)
    mp, dmp = jet_array(s.chi_mp.entries, point)
    ap = prolong_connection(s.A_plus, point)
    am = prolong_connection(s.A_minus, point)
    return Jet1Super(pm, mp, np.moveaxis(dpm, 2, 0), np.moveaxis(dmp, 2, 0),
                     ap.A, ap.dA, am.A, am.dA)


def prolong_gauge(phi, point):
    """2-jet of a gauge transformation ``phi`` (PolyMatrix) at ``point``."""
    point = [rational(c) for c in point]
    m = phi.num_vars
    n = phi.rows
    if phi.shape != (n, n):
        raise ArgumentError("gauge transformation must be square")
    b0 = np.empty((n, n), dtype=object)
    b = np.empty((m, n, n), dtype=object)
    b2 = np.empty((m, m, n, n), dtype=object)
    unit = np.eye(m, dtype=int)
    for i in range(n):
        for j in range(n):
            q = _centered(phi[i, j], point)
            b0[i, j] = q.constant_term
            for a in range(m):
                b[a, i, j] = q.coefficient(unit[a])
            b2[:, :, i, j] = _hessian(q)
    return Jet2VertAut(b0, b, b2)


def prolong_diffeo(phi, point):
    """2-jet of a diffeomorphism given by polynomials ``phi^mu`` fixing ``point``."""
    phi = list(phi)
    m = len(phi)
    point = [rational(c) for c in point]
    if len(point) != m or any(p.num_vars != m for p in phi):
        raise ArgumentError("diffeomorphism must be m polynomials in m variables")
    unit = np.eye(m, dtype=int)
    b = np.empty((m, m), dtype=object)
    b2 = np.empty((m, m, m), dtype=object)
    for mu, p in enumerate(phi):
        q = _centered(p, point)
        if q.constant_term != point[mu]:
            raise ArgumentError("diffeomorphism does not fix the base point")
        for a in range(m):
            b[mu, a] = q.coefficient(unit[a])
        b2[mu] = _hessian(q)
    return Jet2Diffeo(b, b2)


def canonical_acs(m):
    """Constant canonical complex structure: ``J0 d_i = d_{l+i}``, ``J0 d_{l+i} = -d_i``."""
    if m % 2:
        raise ArgumentError("almost complex structures need an even dimension")
    l = m // 2
    j = linalg.zeros((m, m))
    for i in range(l):
        j[l + i, i] = mpq(1)
        j[i, l + i] = mpq(-1)
    return j
