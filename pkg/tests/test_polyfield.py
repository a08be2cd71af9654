import importlib

from gmpy2 import mpq
from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from curvlab import _kernel_py
from curvlab.errors import ArgumentError, InvalidSectionError, ParseError
from curvlab.parsing import parse_point, parse_polynomial
from curvlab.polyfield import (
    PolyMatrix,
    PolyScalar,
    SlotKind,
    TensorPolyField,
    coordinates,
)

M = 3

coeffs = st.builds(mpq, st.integers(-6, 6), st.integers(1, 4))
exponents = st.tuples(*[st.integers(0, 2)] * M)
polys = st.dictionaries(exponents, coeffs, max_size=4).map(lambda t: PolyScalar(M, t))
points = st.lists(coeffs, min_size=M, max_size=M)


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == 0
    assert p * 1 == p


@given(polys, polys, points)
def test_evaluation_is_a_ring_map(p, q, pt):
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p - q).evaluate(pt) == p.evaluate(pt) - q.evaluate(pt)


@given(polys, polys, st.integers(0, M - 1))
def test_leibniz(p, q, var):
    assert (p * q).partial(var) == p.partial(var) * q + p * q.partial(var)


@given(polys)
def test_str_parse_round_trip(p):
    assert parse_polynomial(str(p), M) == p


@given(polys, points)
def test_shift(p, pt):
    assert p.shift(pt).evaluate([0] * M) == p.evaluate(pt)


def test_frozen_values():
    x1, x2 = coordinates(2)
    p = x1 ** 3 - 2 * x1
    assert p.partial(0) == 3 * x1 ** 2 - 2
    assert (x1 * x1 * x2)(3, "1/2") == mpq(9, 2)
    assert str(parse_polynomial("3*x1^2*x2 - 1/2", 2)) == "3*x1^2*x2 - 1/2"
    assert str((x1 - x2) ** 2) == "x1^2 - 2*x1*x2 + x2^2"
    assert (x1 + x2).shift([1, 2]) == x1 + x2 + 3


def test_no_floats():
    x1 = coordinates(1)[0]
    with pytest.raises(TypeError):
        x1 * 0.5
    with pytest.raises(ArgumentError):
        PolyScalar.constant(1.5, 1)


def test_num_vars_mismatch():
    a, b = coordinates(1)[0], coordinates(2)[0]
    with pytest.raises(ArgumentError):
        a + b


@pytest.mark.parametrize("text,where", [("1 +* x1", "column"), ("x3", "x3"), ("2/0", "zero"),
                                        ("x1^", "column"), ("1.5", "'.'")])
def test_parse_errors_locate(text, where):
    with pytest.raises(ParseError) as exc:
        parse_polynomial(text, 2)
    assert where in str(exc.value)


def test_parse_point():
    assert parse_point("0, 1/2,-3") == [0, mpq(1, 2), -3]
    with pytest.raises(ParseError):
        parse_point("1,2", 3)


def test_matrix_ops():
    x1, x2 = coordinates(2)
    U = PolyMatrix([[1, x1 * x2, x2], [0, 1, x1], [0, 0, 1]], 2)
    V = U.inverse_unipotent()
    assert (U @ V).is_identity() and (V @ U).is_identity()
    assert U.det() == 1
    A = PolyMatrix([[x1, 1], [2, x2]], 2)
    assert A @ A.adjugate() == PolyMatrix.identity(2, 2) * A.det()


def test_inverse_unipotent_rejects_general():
    x1 = coordinates(1)[0]
    with pytest.raises(Exception):
        PolyMatrix([[2, x1], [0, 1]], 1).inverse_unipotent()


def test_tensor_symmetry_validated():
    x1, x2 = coordinates(2)
    with pytest.raises(InvalidSectionError):
        TensorPolyField.form([[0, x1], [x1, 0]], 2)
    w = TensorPolyField.form([[0, x1], [-x1, 0]], 2)
    assert w.partial(0).evaluate([5, 5])[0, 1] == 1
    with pytest.raises(ArgumentError):
        TensorPolyField([x1], [(SlotKind.COV, 2)], 2)


def _random_terms(rng, m, n):
    out = {}
    for _ in range(n):
        e = tuple(int(v) for v in rng.integers(0, 3, m))
        c = mpq(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        if c:
            out[e] = c if c.denominator != 1 else int(c)
    return out


def test_compiled_and_python_kernels_agree():
    try:
        compiled = importlib.import_module("curvlab._kernel")
    except ImportError:
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b = _random_terms(rng, 3, 5), _random_terms(rng, 3, 5)
        pt = [mpq(int(rng.integers(-3, 4)), 2) for _ in range(3)]
        for name in ("add", "sub", "mul"):
            assert getattr(compiled, name)(a, b) == getattr(_kernel_py, name)(a, b)
        assert compiled.scale(a, mpq(2, 3)) == _kernel_py.scale(a, mpq(2, 3))
        assert compiled.partial(a, 1) == _kernel_py.partial(a, 1)
        assert compiled.evaluate(a, pt) == _kernel_py.evaluate(a, pt)
        assert compiled.truncate(a, 2) == _kernel_py.truncate(a, 2)


def test_kernel_keeps_integers_integral():
    out = _kernel_py.add({(1,): mpq(1, 2)}, {(1,): mpq(1, 2)})
    assert out == {(1,): 1} and type(out[(1,)]) is int
    assert _kernel_py.sub({(0,): 3}, {(0,): 3}) == {}


@settings(max_examples=30)
@given(polys)
def test_truncate(p):
    t = p.truncate(2)
    assert t.degree <= 2
    assert all(t.coefficient(e) == c for e, c in p.terms.items() if sum(e) <= 2)
