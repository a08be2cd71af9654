"""Exact differential operators producing the classical obstructions.

Conventions: form components carry no 1/k! (``(dw)_{I} = sum_j (-1)^j d_{I_j} w_{I\\j}``),
endomorphisms act as ``(Jv)^mu = J[mu, nu] v^nu``, connection coefficients are
stored ``A[mu, a, b]`` and curvature ``F[mu, nu, a, b]``.
"""
import itertools
from dataclasses import dataclass
from functools import cached_property

from gmpy2 import mpq
import numpy as np

from . import linalg
from .errors import ArgumentError, DegenerateMetricError, InvalidSectionError, UnsupportedInputError
from .jets import check_acs
from .polyfield import (
    PolyMatrix,
    PolyScalar,
    SlotKind,
    TensorPolyField,
    check_symmetry,
    evaluate_array,
    partial_array,
    rational,
)

COV = SlotKind.COV
CONTRA = SlotKind.CONTRA


def _form_degree(field):
    k = 0
    for s in field.slots:
        if s.kind is not COV:
            break
        k += 1
    return k


def _check_alternating(arr, k):
    for i in range(k):
        for j in range(i + 1, k):
            bad = check_symmetry(arr, i, j, -1)
            if bad is not None:
                raise InvalidSectionError(
                    f"form is not antisymmetric in slots ({i}, {j}) at component {bad}", bad)


def _alternating_sum(k, m, term):
    """Array over ``(m,)*(k+1)`` of ``sum_j (-1)^j term(I_j, I without j)``."""
    cells = {}
    for idx in itertools.product(range(m), repeat=k + 1):
        total = None
        for j in range(k + 1):
            t = term(idx[j], idx[:j] + idx[j + 1:])
            if j % 2:
                t = -t
            total = t if total is None else total + t
        cells[idx] = total
    return cells


def _fill(cells, lead_shape, tail_shape):
    out = np.empty(lead_shape + tail_shape, dtype=object)
    for idx, value in cells.items():
        out[idx] = value
    return out


def exterior_derivative(omega):
    """``d`` of a k-form (a TensorPolyField whose slots are all covariant)."""
    if any(s.kind is not COV for s in omega.slots):
        raise ArgumentError("exterior_derivative expects a scalar-valued form")
    m = omega.base_dim
    k = omega.rank
    arr = omega.components
    _check_alternating(arr, k)
    partials = [partial_array(arr, mu) for mu in range(m)]
    cells = _alternating_sum(k, m, lambda mu, rest: partials[mu][rest])
    out = _fill(cells, (m,) * (k + 1), ())
    syms = [(i, j, -1) for i in range(k + 1) for j in range(i + 1, k + 1)]
    return TensorPolyField._wrap(out, [(COV, m)] * (k + 1), m, syms)


def _connection_components(A):
    if isinstance(A, TensorPolyField):
        arr = A.components
    else:
        arr = TensorPolyField.connection(list(A)).components
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ArgumentError(f"connection must have shape (m, n, n), got {arr.shape}")
    return arr


def _mm(a, b):
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            acc = a[i, 0] * b[0, j]
            for t in range(1, inner):
                acc = acc + a[i, t] * b[t, j]
            out[i, j] = acc
    return out


def _mv(a, v):
    out = np.empty(a.shape[0], dtype=object)
    for i in range(a.shape[0]):
        acc = a[i, 0] * v[0]
        for t in range(1, a.shape[1]):
            acc = acc + a[i, t] * v[t]
        out[i] = acc
    return out


def yang_mills_curvature(A):
    """``F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]``."""
    arr = _connection_components(A)
    m, n, _ = arr.shape
    if m < 2:
        raise ArgumentError("curvature needs a base of dimension >= 2")
    out = np.empty((m, m, n, n), dtype=object)
    dA = [partial_array(arr, mu) for mu in range(m)]
    for mu in range(m):
        for nu in range(m):
            out[mu, nu] = (dA[mu][nu] - dA[nu][mu]
                           + _mm(arr[mu], arr[nu]) - _mm(arr[nu], arr[mu]))
    slots = [(COV, m), (COV, m), (SlotKind.FIBER_OUT, n), (SlotKind.FIBER_IN, n)]
    return TensorPolyField._wrap(out, slots, m, [(0, 1, -1)])


def covariant_differential(A, S):
    """``d^nabla`` of a fiber-valued k-form.

    ``S`` has k leading covariant slots followed by either one fiber-out slot
    (values in the bundle) or fiber-out, fiber-in (values in endomorphisms,
    acted on by commutator).
    """
    arr_a = _connection_components(A)
    m, n, _ = arr_a.shape
    k = _form_degree(S)
    tail = S.slots[k:]
    kinds = tuple(s.kind for s in tail)
    if kinds == (SlotKind.FIBER_OUT,):
        endo = False
    elif kinds == (SlotKind.FIBER_OUT, SlotKind.FIBER_IN):
        endo = True
    else:
        raise ArgumentError("covariant_differential supports bundle- or End-valued forms only")
    if any(s.dim != n for s in tail) or S.base_dim != m:
        raise ArgumentError("form values do not match the connection's fiber")
    arr = S.components
    _check_alternating(arr, k)
    partials = [partial_array(arr, mu) for mu in range(m)]

    def term(mu, rest):
        val = arr[rest]
        if endo:
            return partials[mu][rest] + _mm(arr_a[mu], val) - _mm(val, arr_a[mu])
        return partials[mu][rest] + _mv(arr_a[mu], val)

    cells = _alternating_sum(k, m, term)
    out = _fill(cells, (m,) * (k + 1), tuple(s.dim for s in tail))
    syms = [(i, j, -1) for i in range(k + 1) for j in range(i + 1, k + 1)]
    return TensorPolyField._wrap(out, [(COV, m)] * (k + 1) + list(tail), m, syms)


def apply_curvature(F, psi):
    """``(F . psi)_{mu nu} = F_{mu nu} psi`` for a section ``psi`` (fiber-valued 0-form)."""
    m = F.base_dim
    n = F.shape[2]
    vec = psi.components
    out = np.empty((m, m, n), dtype=object)
    for mu in range(m):
        for nu in range(m):
            out[mu, nu] = _mv(F.components[mu, nu], vec)
    return TensorPolyField._wrap(out, [(COV, m), (COV, m), (SlotKind.FIBER_OUT, n)], m,
                                 [(0, 1, -1)])


def section(values, base_dim):
    """A bundle section (fiber-valued 0-form) from its components."""
    values = list(values)
    return TensorPolyField(values, [(SlotKind.FIBER_OUT, len(values))], base_dim)


# -- metrics ---------------------------------------------------------------


class MetricField:
    """A symmetric, nondegenerate polynomial metric ``g_{mu nu}``.

    ``inverse`` is available when ``det g`` is a nonzero constant, which is
    exactly when the inverse is itself polynomial.
    """

    def __init__(self, g):
        if isinstance(g, PolyMatrix):
            g = TensorPolyField.metric(g)
        elif not isinstance(g, TensorPolyField):
            g = TensorPolyField.metric(PolyMatrix(g))
        if g.rank != 2 or any(s.kind is not COV for s in g.slots):
            raise ArgumentError("a metric has two covariant slots")
        bad = check_symmetry(g.components, 0, 1, 1)
        if bad is not None:
            raise InvalidSectionError(f"metric is not symmetric at component {bad}", bad)
        self.g = g
        self.dim = g.base_dim

    def __eq__(self, other):
        return isinstance(other, MetricField) and self.g == other.g

    def __hash__(self):
        return hash(self.g)

    @property
    def matrix(self):
        return self.g.matrix()

    @cached_property
    def det(self):
        return self.matrix.det()

    @property
    def has_polynomial_inverse(self):
        return self.det.is_constant() and not self.det.is_zero()

    @cached_property
    def inverse(self):
        if not self.has_polynomial_inverse:
            return None
        adj = self.matrix.adjugate()
        inv = adj * (mpq(1) / self.det.constant_term)
        m = self.dim
        return TensorPolyField._wrap(inv.entries.copy(), [(CONTRA, m), (CONTRA, m)], m,
                                     [(0, 1, 1)])

    def scaled(self, factor):
        """Conformal rescaling ``factor * g`` by a polynomial factor."""
        return MetricField(self.g * factor)


@dataclass(frozen=True, eq=False)
class CurvaturePack:
    """Riemann ``R[rho, sigma, mu, nu]``, lowered ``R_cov``, Ricci and scalar curvature.

    With ``point=None`` the entries are PolyScalar (exact polynomial pipeline);
    otherwise they are rationals evaluated at ``point``.
    """

    riemann: np.ndarray
    riemann_lowered: np.ndarray
    ricci: np.ndarray
    scalar: object
    metric: np.ndarray
    metric_inverse: np.ndarray
    point: tuple = None

    @property
    def is_pointwise(self):
        return self.point is not None

    def at(self, point):
        if self.is_pointwise:
            raise ArgumentError("pack is already evaluated at a point")
        point = tuple(rational(c) for c in point)
        return CurvaturePack(
            evaluate_array(self.riemann, point), evaluate_array(self.riemann_lowered, point),
            evaluate_array(self.ricci, point), self.scalar.evaluate(point),
            evaluate_array(self.metric, point), evaluate_array(self.metric_inverse, point),
            point)

    def riemann_field(self):
        m = self.riemann.shape[0]
        return TensorPolyField._wrap(self.riemann, [(CONTRA, m)] + [(COV, m)] * 3, m,
                                     [(2, 3, -1)])

    def ricci_field(self):
        m = self.ricci.shape[0]
        return TensorPolyField._wrap(self.ricci, [(COV, m), (COV, m)], m, [(0, 1, 1)])


def _metric_data(metric, point):
    """``(g, g^-1, dg, ddg, d(g^-1))`` as arrays in the chosen pipeline."""
    m = metric.dim
    g = metric.g.components
    dg_poly = np.array([partial_array(g, lam) for lam in range(m)], dtype=object)
    ddg_poly = np.array([[partial_array(dg_poly[k], lam) for lam in range(m)]
                         for k in range(m)], dtype=object)
    if point is None:
        inv = metric.inverse
        if inv is None:
            raise UnsupportedInputError(
                "det g is not a nonzero constant; request a point for the pointwise pipeline")
        ginv = inv.components
        g_arr, dg, ddg = g, dg_poly, ddg_poly
    else:
        g_arr = evaluate_array(g, point)
        if linalg.det(g_arr) == 0:
            raise DegenerateMetricError(
                f"det g vanishes at ({', '.join(str(c) for c in point)})")
        ginv = linalg.inverse(g_arr)
        dg = evaluate_array(dg_poly, point)
        ddg = evaluate_array(ddg_poly, point)
    dginv = np.array([-np.einsum("ab,bc,cd->ad", ginv, dg[k], ginv) for k in range(m)],
                     dtype=object)
    return g_arr, ginv, dg, ddg, dginv


def christoffel(metric, point=None):
    """``Gamma[rho, mu, nu]`` of the Levi-Civita connection."""
    metric = metric if isinstance(metric, MetricField) else MetricField(metric)
    _, ginv, dg, _, _ = _metric_data(metric, _point(metric, point))
    t = _lowered_christoffel_sum(dg)
    return np.einsum("rl,lmn->rmn", ginv, t) * mpq(1, 2)


def _lowered_christoffel_sum(dg):
    # T[l, mu, nu] = d_mu g_{l nu} + d_nu g_{l mu} - d_l g_{mu nu}
    return (np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg)


def _point(metric, point):
    if point is None:
        return None
    point = tuple(rational(c) for c in point)
    if len(point) != metric.dim:
        raise ArgumentError(f"point has length {len(point)}, expected {metric.dim}")
    return point


def metric_curvature(g, point=None):
    """Riemann, Ricci and scalar curvature of ``g``.

    Without ``point`` the result is polynomial and needs ``det g`` to be a
    nonzero constant; with ``point`` every quantity is an exact rational
    computed from the derivatives of ``g`` there.
    """
    metric = g if isinstance(g, MetricField) else MetricField(g)
    point = _point(metric, point)
    g_arr, ginv, dg, ddg, dginv = _metric_data(metric, point)
    half = mpq(1, 2)
    t = _lowered_christoffel_sum(dg)
    # dT[k, l, mu, nu] = d_k T[l, mu, nu]
    dt = (np.transpose(ddg, (0, 2, 1, 3)) + np.transpose(ddg, (0, 2, 3, 1)) - ddg)
    gamma = np.einsum("rl,lmn->rmn", ginv, t) * half
    dgamma = (np.einsum("krl,lmn->krmn", dginv, t) + np.einsum("rl,klmn->krmn", ginv, dt)) * half
    # R^rho_{sigma mu nu} = d_mu G^rho_{nu sigma} - d_nu G^rho_{mu sigma}
    #                       + G^rho_{mu lam} G^lam_{nu sigma} - G^rho_{nu lam} G^lam_{mu sigma}
    d_term = np.transpose(dgamma, (1, 3, 0, 2))  # [rho, sigma, mu, nu] <- dgamma[mu, rho, nu, sigma]
    quad = np.einsum("rml,lns->rsmn", gamma, gamma)
    riemann = d_term - np.transpose(d_term, (0, 1, 3, 2)) + quad - np.transpose(quad, (0, 1, 3, 2))
    lowered = np.einsum("rl,lsmn->rsmn", g_arr, riemann)
    ricci = np.einsum("msmn->sn", riemann)
    scalar = np.einsum("sn,sn->", ginv, ricci)
    if point is None and not isinstance(scalar, PolyScalar):
        scalar = PolyScalar.constant(scalar, metric.dim)
    return CurvaturePack(riemann, lowered, ricci, scalar, g_arr, ginv, point)


def kulkarni_nomizu(h, k):
    """``(h o k)_{rsmn} = h_rm k_sn + h_sn k_rm - h_rn k_sm - h_sm k_rn``."""
    a = np.einsum("rm,sn->rsmn", h, k)
    b = np.einsum("rn,sm->rsmn", h, k)
    return a + np.transpose(a, (1, 0, 3, 2)) - b - np.transpose(b, (1, 0, 3, 2))


@dataclass(frozen=True, eq=False)
class WeylTensor:
    covariant: np.ndarray  # W[rho, sigma, mu, nu], all lower
    mixed: np.ndarray      # W^rho_{sigma mu nu}
    point: tuple = None


def weyl(g, point=None):
    """Weyl tensor ``W = Rm - P o g`` with Schouten tensor
    ``P = (Ric - r g / (2(m-1))) / (m-2)``; both (0,4) and (1,3) forms.
    """
    metric = g if isinstance(g, MetricField) else MetricField(g)
    m = metric.dim
    if m <= 2:
        raise ArgumentError("the Weyl tensor needs dimension m >= 3")
    pack = metric_curvature(metric, point)
    schouten = (pack.ricci - pack.metric * (pack.scalar * mpq(1, 2 * (m - 1)))) \
        * mpq(1, m - 2)
    w_cov = pack.riemann_lowered - kulkarni_nomizu(schouten, pack.metric)
    w_mixed = np.einsum("rl,lsmn->rsmn", pack.metric_inverse, w_cov)
    return WeylTensor(w_cov, w_mixed, pack.point)


# -- almost complex structures -----------------------------------------------


def _acs_components(J):
    if isinstance(J, TensorPolyField):
        return J.components
    if isinstance(J, PolyMatrix):
        return J.entries
    raise ArgumentError("expected an endomorphism field")


def nijenhuis(J, validate=True):
    """``N^rho_{mu nu} = J^a_mu d_a J^rho_nu - J^a_nu d_a J^rho_mu
    - J^rho_a d_mu J^a_nu + J^rho_a d_nu J^a_mu``; stored as ``N[rho, mu, nu]``.

    ``validate=False`` skips the ``J^2 = -1`` check, e.g. to evaluate ``N`` at
    a point from the linear extension of a 1-jet (only the 1-jet matters there).
    """
    if validate:
        check_acs(J)
    j = _acs_components(J)
    m = j.shape[0]
    dj = np.array([partial_array(j, a) for a in range(m)], dtype=object)  # dj[a, rho, nu]
    t1 = np.einsum("am,arn->rmn", j, dj)
    t2 = np.einsum("ra,man->rmn", j, dj)
    n_arr = t1 - np.transpose(t1, (0, 2, 1)) - t2 + np.transpose(t2, (0, 2, 1))
    return TensorPolyField._wrap(n_arr, [(CONTRA, m), (COV, m), (COV, m)], m, [(1, 2, -1)])


def lie_bracket(X, Y):
    """``[X, Y]^rho = X^a d_a Y^rho - Y^a d_a X^rho`` for polynomial vector fields."""
    m = len(X)
    return [sum((X[a] * Y[r].partial(a) - Y[a] * X[r].partial(a) for a in range(m)),
                PolyScalar.zero(X[0].num_vars)) for r in range(m)]


def apply_endomorphism(J, X):
    j = _acs_components(J)
    m = j.shape[0]
    return [sum((j[r, a] * X[a] for a in range(m)), PolyScalar.zero(X[0].num_vars))
            for r in range(m)]


def nijenhuis_vector_form(J, X, Y):
    """``[JX, JY] - J[X, JY] - J[JX, Y] - [X, Y]`` as a list of components."""
    check_acs(J)
    X = list(X)
    Y = list(Y)
    m = _acs_components(J).shape[0]
    if len(X) != m or len(Y) != m:
        raise ArgumentError(f"vector fields must have {m} components")
    jx = apply_endomorphism(J, X)
    jy = apply_endomorphism(J, Y)
    a = lie_bracket(jx, jy)
    b = apply_endomorphism(J, lie_bracket(X, jy))
    c = apply_endomorphism(J, lie_bracket(jx, Y))
    d = lie_bracket(X, Y)
    return [a[r] - b[r] - c[r] - d[r] for r in range(m)]


def contract(N, X, Y):
    """``N^rho_{mu nu} X^mu Y^nu``."""
    arr = N.components if isinstance(N, TensorPolyField) else N
    m = arr.shape[0]
    zero = PolyScalar.zero(X[0].num_vars)
    return [sum((arr[r, a, b] * X[a] * Y[b] for a in range(m) for b in range(m)), zero)
            for r in range(m)]
