"""Field-level group actions: gauge transformations and pullbacks by diffeomorphisms."""
import itertools

import numpy as np

from .errors import ArgumentError, InvalidSectionError, UnsupportedInputError
from .jets import check_acs
from .polyfield import PolyMatrix, PolyScalar, SlotKind, TensorPolyField, matmul


def checked_inverse(phi, phi_inv=None):
    """``phi^-1`` either from the unipotent Neumann series or from a supplied witness.

    A witness is validated by multiplying out ``phi @ phi_inv``.
    """
    n = phi.rows
    if phi.shape != (n, n):
        raise ArgumentError("gauge transformation must be square")
    if phi_inv is None:
        return phi.inverse_unipotent()
    if phi_inv.shape != phi.shape or phi_inv.num_vars != phi.num_vars:
        raise ArgumentError("inverse witness has the wrong shape")
    if not (phi @ phi_inv).is_identity():
        raise InvalidSectionError("inverse witness fails phi * phi_inv = 1")
    return phi_inv


def _connection_array(A):
    if isinstance(A, TensorPolyField):
        return A.components
    return TensorPolyField.connection(list(A)).components


def _as_connection(arr):
    m, n, _ = arr.shape
    slots = [(SlotKind.COV, m), (SlotKind.FIBER_OUT, n), (SlotKind.FIBER_IN, n)]
    return TensorPolyField._wrap(arr, slots, m)


def gauge_transform(A, phi, phi_inv=None):
    """``(phi* A)_mu = phi^-1 A_mu phi + phi^-1 d_mu phi``."""
    arr = _connection_array(A)
    m, n, _ = arr.shape
    if phi.shape != (n, n) or phi.num_vars != m:
        raise ArgumentError("gauge transformation does not match the connection")
    inv = checked_inverse(phi, phi_inv).entries
    p = phi.entries
    out = np.empty(arr.shape, dtype=object)
    for mu in range(m):
        dphi = np.array([[q.partial(mu) for q in row] for row in p], dtype=object)
        out[mu] = matmul(matmul(inv, arr[mu]), p) + matmul(inv, dphi)
    return _as_connection(out)


def pure_gauge(phi, phi_inv=None):
    """The flat connection ``phi^-1 d phi``."""
    m = phi.num_vars
    zero = TensorPolyField.zeros(
        [(SlotKind.COV, m), (SlotKind.FIBER_OUT, phi.rows), (SlotKind.FIBER_IN, phi.rows)], m)
    return gauge_transform(zero, phi, phi_inv)


def conjugate(F, phi, phi_inv=None):
    """``phi^-1 X phi`` applied to the trailing fiber pair of an End-valued field."""
    inv = checked_inverse(phi, phi_inv).entries
    arr = F.components
    out = np.empty(arr.shape, dtype=object)
    for idx in itertools.product(*(range(d) for d in arr.shape[:-2])):
        out[idx] = matmul(matmul(inv, arr[idx]), phi.entries)
    return TensorPolyField._wrap(out, F.slots, F.base_dim, F.symmetries)


# -- diffeomorphisms -----------------------------------------------------------


def _diffeo(phi, m):
    phi = list(phi)
    if len(phi) != m or any(p.num_vars != m for p in phi):
        raise ArgumentError(f"diffeomorphism must be {m} polynomials in {m} variables")
    return phi


def jacobian(phi):
    """``D phi[mu, a] = d_a phi^mu``."""
    m = len(phi)
    return PolyMatrix([[phi[mu].partial(a) for a in range(m)] for mu in range(m)], m)


def _compose(arr, phi):
    out = np.empty(arr.shape, dtype=object)
    for idx, p in np.ndenumerate(arr):
        out[idx] = p.substitute(phi)
    return out


def pullback_form(omega, phi):
    """``(phi* w)_{i1..ik} = w_{j1..jk}(phi) d_{i1} phi^{j1} ... d_{ik} phi^{jk}``."""
    m = omega.base_dim
    phi = _diffeo(phi, m)
    if any(s.kind is not SlotKind.COV for s in omega.slots):
        raise ArgumentError("pullback_form expects all-covariant slots")
    k = omega.rank
    jac = jacobian(phi).entries
    w = _compose(omega.components, phi)
    zero = PolyScalar.zero(m)
    out = np.empty((m,) * k, dtype=object)
    for idx in itertools.product(range(m), repeat=k):
        acc = zero
        for jdx in itertools.product(range(m), repeat=k):
            term = w[jdx]
            if term.is_zero():
                continue
            for i, j in zip(idx, jdx):
                term = term * jac[j, i]
            acc = acc + term
        out[idx] = acc
    return TensorPolyField._wrap(out, omega.slots, m, omega.symmetries)


def pullback_metric(g, phi):
    """Pullback of a symmetric 2-tensor; same formula as for forms."""
    from .curvature import MetricField

    metric = g if isinstance(g, MetricField) else MetricField(g)
    return MetricField(pullback_form(metric.g, phi))


def pullback_acs(J, phi, truncate=None):
    """``phi* J = (D phi)^-1 J(phi) D phi``.

    Needs a unipotent Jacobian for an exact polynomial result. With
    ``truncate=k`` any Jacobian invertible at the origin is accepted and the
    result is exact up to total degree ``k`` (enough for jet checks at 0).
    """
    if isinstance(J, TensorPolyField):
        arr = J.components
    elif isinstance(J, PolyMatrix):
        arr = J.entries
    else:
        raise ArgumentError("expected an endomorphism field")
    check_acs(J)
    m = arr.shape[0]
    phi = _diffeo(phi, m)
    jac = jacobian(phi)
    if truncate is None:
        inv = jac.inverse_unipotent()
    else:
        inv = jac.inverse_truncated(truncate)
    out = matmul(matmul(inv.entries, _compose(arr, phi)), jac.entries)
    result = PolyMatrix._wrap(out, m)
    if truncate is not None:
        result = result.truncate(truncate)
    return TensorPolyField.endomorphism(result)


def compose_diffeo(phi, psi):
    """``phi o psi`` as polynomials."""
    return [p.substitute(list(psi)) for p in phi]


def inverse_triangular_diffeo(phi):
    """Inverse of ``x + f`` where ``f^mu`` depends only on ``x^{mu+1}..x^m``.

    Such maps have unipotent Jacobian and a polynomial inverse found by
    back-substitution.
    """
    m = len(phi)
    xs = [PolyScalar.variable(i, m) for i in range(m)]
    inv = [None] * m
    for mu in reversed(range(m)):
        f = phi[mu] - xs[mu]
        if any(f.degree_in(v) > 0 for v in range(mu + 1)):
            raise UnsupportedInputError("diffeomorphism is not triangular")
        sub = list(xs)
        for nu in range(mu + 1, m):
            sub[nu] = inv[nu]
        inv[mu] = xs[mu] - f.substitute(sub)
    return inv
