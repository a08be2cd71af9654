from gmpy2 import mpq
import numpy as np
import pytest
import sympy as sp

from curvlab import linalg
from curvlab.actions import gauge_transform, pullback_acs, pure_gauge
from curvlab.curvature import (
    MetricField,
    christoffel,
    exterior_derivative,
    metric_curvature,
    nijenhuis,
    nijenhuis_vector_form,
    weyl,
    yang_mills_curvature,
)
from curvlab.errors import (
    ArgumentError,
    DegenerateMetricError,
    InvalidSectionError,
    UnsupportedInputError,
)
from curvlab.generators import Generator
from curvlab.jets import canonical_acs
from curvlab.polyfield import PolyMatrix, PolyScalar, TensorPolyField, coordinates


def to_sympy(p, xs):
    return sum((sp.Rational(int(c.numerator), int(c.denominator))
                * sp.Mul(*[x ** e for x, e in zip(xs, exp)]) for exp, c in p.terms.items()),
               sp.Integer(0))


def sympy_riemann(G, xs, point):
    """Textbook R^r_{s m n} straight from the Christoffel symbols, evaluated at ``point``."""
    m = len(xs)
    Gi = G.inv()
    gam = [[[sum(Gi[r, l] * (sp.diff(G[l, a], xs[b]) + sp.diff(G[l, b], xs[a])
                             - sp.diff(G[a, b], xs[l])) for l in range(m)) / 2
             for b in range(m)] for a in range(m)] for r in range(m)]
    subs = dict(zip(xs, point))
    R = np.empty((m,) * 4, dtype=object)
    for r in range(m):
        for s in range(m):
            for a in range(m):
                for b in range(m):
                    v = (sp.diff(gam[r][b][s], xs[a]) - sp.diff(gam[r][a][s], xs[b])
                         + sum(gam[r][a][l] * gam[l][b][s] - gam[r][b][l] * gam[l][a][s]
                               for l in range(m)))
                    v = sp.Rational(sp.cancel(v.subs(subs)))
                    R[r, s, a, b] = mpq(int(v.p), int(v.q))
    return R


def metric_from(rows):
    m = len(rows)
    return PolyMatrix([[PolyScalar.parse(t, m) for t in row] for row in rows], m)


# -- exterior derivative --------------------------------------------------------


def test_d_of_one_form():
    x1, x2 = coordinates(2)
    w = TensorPolyField.form([x2 * x1 ** 2, x1], 2)
    dw = exterior_derivative(w).components
    # d(x1^2 x2 dx1 + x1 dx2) = (1 - x1^2) dx1 ^ dx2
    assert dw[0, 1] == 1 - x1 ** 2 and dw[1, 0] == x1 ** 2 - 1


def test_d_of_constant_symplectic_form():
    m = 4
    arr = [[0] * m for _ in range(m)]
    arr[0][2], arr[2][0], arr[1][3], arr[3][1] = 1, -1, 1, -1
    assert exterior_derivative(TensorPolyField.form(arr, m)).is_zero()


def test_dd_zero_random():
    for seed in range(10):
        gen = Generator(seed)
        w = gen.form(4, 1, 3)
        assert exterior_derivative(exterior_derivative(w)).is_zero()


# -- Yang-Mills --------------------------------------------------------------------


def test_yang_mills_frozen():
    x1, x2 = coordinates(2)
    A = TensorPolyField.connection([PolyMatrix([[0]], 2), PolyMatrix([[x1]], 2)])
    F = yang_mills_curvature(A).components
    assert F[0, 1, 0, 0] == 1 and F[1, 0, 0, 0] == -1 and F[0, 0, 0, 0] == 0


def test_yang_mills_commutator_term():
    # constant non-commuting connection: F_12 = [A_1, A_2]
    A = TensorPolyField.connection([PolyMatrix([[0, 1], [0, 0]], 2),
                                    PolyMatrix([[0, 0], [1, 0]], 2)])
    F = yang_mills_curvature(A).matrix(0, 1)
    assert F == PolyMatrix([[1, 0], [0, -1]], 2)


def test_pure_gauge_flat_and_covariance():
    gen = Generator(5)
    phi = gen.unipotent(3, 2, 2)
    assert yang_mills_curvature(pure_gauge(phi)).is_zero()
    A = gen.connection(2, 3, 1)
    F = yang_mills_curvature(A)
    G = yang_mills_curvature(gauge_transform(A, phi))
    inv = phi.inverse_unipotent()
    assert G.matrix(0, 1) == inv @ F.matrix(0, 1) @ phi


# -- Riemann ---------------------------------------------------------------------


def test_flat_and_polar_vanish():
    assert not any(metric_curvature(PolyMatrix.identity(3, 3)).riemann.flat)
    g = metric_from([["1", "0"], ["0", "(1 + x1)^2"]])
    pack = metric_curvature(g, [mpq(1, 3), 2])
    assert linalg.is_zero(pack.riemann)


def test_scalar_curvature_frozen():
    g = metric_from([["1", "0"], ["0", "x1"]])
    # r = 1/(2 x1^2) for diag(1, x1)
    assert metric_curvature(g, [1, 1]).scalar == mpq(1, 2)
    assert metric_curvature(g, [2, 5]).scalar == mpq(1, 8)


@pytest.mark.parametrize("seed", range(4))
def test_riemann_matches_independent_oracle(seed):
    gen = Generator(seed)
    m = 3
    g = gen.metric_general(m, 2)
    point = [mpq(1, 2), mpq(-1, 3), mpq(1, 4)]
    xs = sp.symbols(f"x1:{m + 1}")
    G = sp.Matrix(m, m, lambda i, k: to_sympy(g.entries[i, k], xs))
    ours = metric_curvature(g, point).riemann
    assert linalg.array_equal(ours, sympy_riemann(G, xs, point))


def test_polynomial_pipeline_matches_pointwise():
    gen = Generator(9)
    g = gen.metric_polynomial(3, 1)
    pack = metric_curvature(g)
    pt = [mpq(1, 2), 0, -1]
    assert linalg.array_equal(pack.at(pt).riemann, metric_curvature(g, pt).riemann)


def test_polynomial_pipeline_needs_constant_det():
    g = metric_from([["1", "0"], ["0", "1 + x1^2"]])
    with pytest.raises(UnsupportedInputError):
        metric_curvature(g)


def test_degenerate_and_asymmetric_metrics():
    g = metric_from([["1", "0"], ["0", "x1"]])
    with pytest.raises(DegenerateMetricError):
        metric_curvature(g, [0, 0])
    with pytest.raises(InvalidSectionError):
        MetricField(metric_from([["1", "x1"], ["0", "1"]]))


def test_christoffel_polar():
    g = metric_from([["1", "0"], ["0", "x1^2"]])
    gam = christoffel(g, [2, 0])
    # Gamma^1_22 = -x1, Gamma^2_12 = 1/x1
    assert gam[0, 1, 1] == -2 and gam[1, 0, 1] == mpq(1, 2)


# -- Weyl -----------------------------------------------------------------------


def test_weyl_conformally_flat_zero():
    x = coordinates(4)
    f = (1 + x[0]) ** 2
    g = PolyMatrix([[f if i == k else 0 for k in range(4)] for i in range(4)], 4)
    assert linalg.is_zero(weyl(g, [mpq(1, 2), 1, 0, 3]).covariant)


def test_weyl_vanishes_in_dimension_three():
    gen = Generator(2)
    g = gen.metric_general(3, 2)
    assert linalg.is_zero(weyl(g, [mpq(1, 5), 0, mpq(1, 2)]).covariant)


def test_weyl_trace_free_and_nonzero():
    gen = Generator(4)
    g = gen.metric_general(4, 2)
    pt = [mpq(1, 2), mpq(1, 3), 0, -1]
    w = weyl(g, pt)
    assert not linalg.is_zero(w.covariant)
    assert linalg.is_zero(np.einsum("rsrn->sn", w.mixed))


def test_weyl_needs_dimension_three():
    with pytest.raises(ArgumentError):
        weyl(PolyMatrix.identity(2, 2), [0, 0])


# -- Nijenhuis ------------------------------------------------------------------


def hand_acs():
    x3 = coordinates(4)[2]
    P = PolyMatrix.identity(4, 4).entries.copy()
    P[0, 1] = x3
    Q = PolyMatrix.identity(4, 4).entries.copy()
    Q[0, 1] = -x3
    J0 = PolyMatrix.from_constant(canonical_acs(4), 4)
    return TensorPolyField.endomorphism(PolyMatrix(P, 4) @ J0 @ PolyMatrix(Q, 4))


def test_nijenhuis_canonical_zero():
    J0 = TensorPolyField.endomorphism(PolyMatrix.from_constant(canonical_acs(4), 4))
    assert nijenhuis(J0).is_zero()


def test_nijenhuis_hand_instance_frozen():
    N = nijenhuis(hand_acs())
    x3 = coordinates(4)[2]
    expected = {(0, 0, 3): -1, (0, 1, 2): 1, (0, 1, 3): x3, (2, 0, 1): -1, (2, 2, 3): 1}
    got = {k: v for k, v in N.nonzero_components().items() if k[1] < k[2]}
    assert got == expected
    # the (1,3) pair in 1-based indexing
    assert all(N.components[r, 0, 2] == 0 for r in range(4))


def test_nijenhuis_forms_agree_on_hand_instance():
    J = hand_acs()
    N = nijenhuis(J).components
    m = 4
    for a in range(m):
        for b in range(m):
            X = [PolyScalar.constant(int(i == a), m) for i in range(m)]
            Y = [PolyScalar.constant(int(i == b), m) for i in range(m)]
            assert nijenhuis_vector_form(J, X, Y) == list(N[:, a, b])


def test_nijenhuis_dim2_zero():
    gen = Generator(1)
    assert nijenhuis(gen.acs_field(2, 2)).is_zero()


def test_nijenhuis_integrable_pullback():
    gen = Generator(3)
    phi = gen.triangular_diffeo(4, 2)
    J0 = TensorPolyField.endomorphism(PolyMatrix.from_constant(canonical_acs(4), 4))
    assert nijenhuis(pullback_acs(J0, phi)).is_zero()


def test_invalid_acs_rejected():
    J = TensorPolyField.endomorphism(PolyMatrix([[0, -1], [2, 0]], 2))
    with pytest.raises(InvalidSectionError):
        nijenhuis(J)
