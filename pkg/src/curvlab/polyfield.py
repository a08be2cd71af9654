"""Exact multivariate polynomials over Q and the dense containers built on them.

Every field in curvlab is a polynomial in the base coordinates ``x1..xm``.
Coordinates are addressed 0-based from Python (``x1`` is variable 0); the
text syntax used in files is 1-based.
"""
import enum
import itertools
import os
from dataclasses import dataclass
from functools import reduce
from numbers import Rational

from gmpy2 import mpq
import numpy as np

from .errors import ArgumentError, InvalidSectionError, UnsupportedInputError

if os.environ.get("CURVLAB_PURE_PYTHON"):
    from . import _kernel_py as _k
else:
    try:
        from . import _kernel as _k
    except ImportError:
        from . import _kernel_py as _k

KERNEL = "compiled" if _k.__name__.endswith("._kernel") else "python"

MAX_VARS = 8
MAX_FIBER = 8
MAX_DEGREE = 8


def rational(value):
    """Coerce ``value`` to an exact rational (int when integral).

    Floats are rejected: nothing in the exact pipelines may depend on them.
    """
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, mpq):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        try:
            value = mpq(value.strip())
        except ValueError as exc:
            raise ArgumentError(f"not a rational literal: {value!r}") from exc
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return rational(mpq(value.numerator, value.denominator))
    raise ArgumentError(f"expected an exact rational, got {type(value).__name__}")


def _check_num_vars(num_vars):
    if not isinstance(num_vars, int) or not 0 <= num_vars <= MAX_VARS:
        raise ArgumentError(f"num_vars must be an int in [0, {MAX_VARS}], got {num_vars!r}")


class PolyScalar:
    """Polynomial with rational coefficients in ``num_vars`` commuting variables.

    Instances are immutable and hashable. The term map never stores zero
    coefficients, so structural equality is polynomial equality.
    """

    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars, terms=()):
        _check_num_vars(num_vars)
        items = terms.items() if hasattr(terms, "items") else terms
        clean = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars:
                raise ArgumentError(f"exponent {exp} does not have length {num_vars}")
            if any(e < 0 for e in exp):
                raise ArgumentError(f"negative exponent in {exp}")
            coeff = rational(coeff)
            if coeff:
                clean = _k.add(clean, {exp: coeff})
        self.num_vars = num_vars
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, num_vars, terms):
        obj = object.__new__(cls)
        obj.num_vars = num_vars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value, num_vars):
        _check_num_vars(num_vars)
        value = rational(value)
        return cls._make(num_vars, {(0,) * num_vars: value} if value else {})

    @classmethod
    def zero(cls, num_vars):
        _check_num_vars(num_vars)
        return cls._make(num_vars, {})

    @classmethod
    def variable(cls, index, num_vars):
        _check_num_vars(num_vars)
        if not 0 <= index < num_vars:
            raise ArgumentError(f"variable index {index} out of range for {num_vars} variables")
        exp = [0] * num_vars
        exp[index] = 1
        return cls._make(num_vars, {tuple(exp): 1})

    @classmethod
    def parse(cls, text, num_vars):
        from .parsing import parse_polynomial

        return parse_polynomial(text, num_vars)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self):
        return {e: mpq(c) for e, c in self._terms.items()}

    def coefficient(self, exp):
        return mpq(self._terms.get(tuple(exp), 0))

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var):
        return max((e[var] for e in self._terms), default=-1)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    @property
    def constant_term(self):
        return mpq(self._terms.get((0,) * self.num_vars, 0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PolyScalar):
            if other.num_vars != self.num_vars:
                raise ArgumentError(
                    f"cannot combine polynomials in {self.num_vars} and {other.num_vars} variables")
            return other
        try:
            return PolyScalar.constant(other, self.num_vars)
        except ArgumentError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PolyScalar._make(self.num_vars, _k.add(self._terms, other._terms))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PolyScalar._make(self.num_vars, _k.sub(self._terms, other._terms))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return PolyScalar._make(self.num_vars, _k.scale(self._terms, -1))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, PolyScalar):
            if other.num_vars != self.num_vars:
                raise ArgumentError(
                    f"cannot combine polynomials in {self.num_vars} and {other.num_vars} variables")
            return PolyScalar._make(self.num_vars, _k.mul(self._terms, other._terms))
        try:
            k = rational(other)
        except ArgumentError:
            return NotImplemented
        return PolyScalar._make(self.num_vars, _k.scale(self._terms, k))

    __rmul__ = __mul__

    def __truediv__(self, other):
        # only division by a nonzero rational scalar is defined
        k = rational(other)
        if not k:
            raise ZeroDivisionError("polynomial divided by zero")
        return self * (mpq(1) / k)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ArgumentError("polynomial powers must be nonnegative ints")
        result = PolyScalar.constant(1, self.num_vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, PolyScalar):
            return self.num_vars == other.num_vars and self._terms == other._terms
        try:
            k = rational(other)
        except ArgumentError:
            return NotImplemented
        if not k:
            return not self._terms
        return self._terms == {(0,) * self.num_vars: k}

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and evaluation -----------------------------------------

    def partial(self, var):
        if not isinstance(var, (int, np.integer)) or not 0 <= var < self.num_vars:
            raise ArgumentError(f"direction {var} out of range for {self.num_vars} variables")
        return PolyScalar._make(self.num_vars, _k.partial(self._terms, int(var)))

    def evaluate(self, point):
        if len(point) != self.num_vars:
            raise ArgumentError(f"point has length {len(point)}, expected {self.num_vars}")
        return _k.evaluate(self._terms, [rational(c) for c in point])

    def evaluate_float(self, point):
        """Float evaluation; only for numeric cross-checks and norms."""
        if len(point) != self.num_vars:
            raise ArgumentError(f"point has length {len(point)}, expected {self.num_vars}")
        total = 0.0
        for exp, coeff in self._terms.items():
            term = float(coeff)
            for x, e in zip(point, exp):
                if e:
                    term *= float(x) ** e
            total += term
        return total

    def substitute(self, values):
        """Compose with polynomials: ``p(q_1, ..., q_m)``."""
        if len(values) != self.num_vars:
            raise ArgumentError(f"need {self.num_vars} substitutions, got {len(values)}")
        if not values:
            return self
        target = values[0].num_vars
        powers = [[PolyScalar.constant(1, target)] for _ in values]
        out = {}
        for exp, coeff in self._terms.items():
            term = {(0,) * target: coeff}
            for i, k in enumerate(exp):
                if k:
                    row = powers[i]
                    while len(row) <= k:
                        row.append(row[-1] * values[i])
                    term = _k.mul(term, row[k]._terms)
            out = _k.add(out, term)
        return PolyScalar._make(target, out)

    def shift(self, point):
        """Translate coordinates: returns ``q`` with ``q(x) = p(x + point)``."""
        m = self.num_vars
        if len(point) != m:
            raise ArgumentError(f"point has length {len(point)}, expected {m}")
        if not any(rational(c) for c in point):
            return self
        return self.substitute(
            [PolyScalar.variable(i, m) + rational(c) for i, c in enumerate(point)])

    def truncate(self, max_degree):
        return PolyScalar._make(self.num_vars, _k.truncate(self._terms, max_degree))

    def __call__(self, *point):
        return self.evaluate(point)

    # -- formatting -------------------------------------------------------

    def sorted_terms(self):
        """Terms in graded-lexicographic order, highest first."""
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, coeff in self.sorted_terms():
            coeff = mpq(coeff)
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(exp) if k)
            mag = abs(coeff)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"PolyScalar({self.num_vars}, {str(self)!r})"


def poly_partial(p, var):
    """Formal partial derivative of ``p`` in variable ``var`` (0-based)."""
    return p.partial(var)


def poly_eval(p, point):
    """Exact value of ``p`` at a rational point."""
    return p.evaluate(point)


def coordinates(num_vars):
    """The coordinate functions ``x1..xm`` as polynomials."""
    return [PolyScalar.variable(i, num_vars) for i in range(num_vars)]


def _to_poly(value, num_vars):
    if isinstance(value, PolyScalar):
        if num_vars is not None and value.num_vars != num_vars:
            raise ArgumentError(
                f"entry has {value.num_vars} variables, expected {num_vars}")
        return value
    if num_vars is None:
        raise ArgumentError("num_vars is required for non-polynomial entries")
    return PolyScalar.constant(value, num_vars)


def poly_array(data, num_vars=None):
    """Object ndarray of PolyScalar from nested data (scalars become constants)."""
    arr = np.asarray(data, dtype=object)
    if num_vars is None:
        for v in arr.flat:
            if isinstance(v, PolyScalar):
                num_vars = v.num_vars
                break
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = _to_poly(v, num_vars)
    return out


def frozen(arr):
    arr.flags.writeable = False
    return arr


def _map(fn, arr):
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = fn(v)
    return out


def evaluate_array(arr, point):
    """Evaluate every polynomial in an object array at ``point``."""
    return _map(lambda p: p.evaluate(point), arr)


def partial_array(arr, var):
    return _map(lambda p: p.partial(var), arr)


class PolyMatrix:
    """Dense matrix of PolyScalar entries sharing one variable count."""

    __slots__ = ("entries", "num_vars")

    def __init__(self, entries, num_vars=None):
        arr = poly_array(entries, num_vars)
        if arr.ndim != 2:
            raise ArgumentError(f"PolyMatrix needs a 2-d grid, got shape {arr.shape}")
        if arr.size == 0:
            raise ArgumentError("PolyMatrix must be non-empty")
        nv = {p.num_vars for p in arr.flat}
        if len(nv) != 1:
            raise ArgumentError("matrix entries disagree on num_vars")
        self.entries = frozen(arr)
        self.num_vars = nv.pop()

    @classmethod
    def _wrap(cls, arr, num_vars):
        obj = object.__new__(cls)
        obj.entries = frozen(arr)
        obj.num_vars = num_vars
        return obj

    @classmethod
    def identity(cls, n, num_vars):
        return cls.from_constant(np.eye(n, dtype=int).tolist(), num_vars)

    @classmethod
    def zeros(cls, rows, cols, num_vars):
        return cls.from_constant([[0] * cols for _ in range(rows)], num_vars)

    @classmethod
    def from_constant(cls, values, num_vars):
        return cls(values, num_vars)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    def __getitem__(self, idx):
        return self.entries[idx]

    def _check_same_shape(self, other):
        if not isinstance(other, PolyMatrix):
            raise ArgumentError("expected a PolyMatrix")
        if other.shape != self.shape:
            raise ArgumentError(f"shape mismatch {self.shape} vs {other.shape}")
        if other.num_vars != self.num_vars:
            raise ArgumentError("num_vars mismatch")

    def __add__(self, other):
        self._check_same_shape(other)
        return PolyMatrix._wrap(self.entries + other.entries, self.num_vars)

    def __sub__(self, other):
        self._check_same_shape(other)
        return PolyMatrix._wrap(self.entries - other.entries, self.num_vars)

    def __neg__(self):
        return PolyMatrix._wrap(-self.entries, self.num_vars)

    def __matmul__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ArgumentError(f"cannot multiply {self.shape} by {other.shape}")
        if other.num_vars != self.num_vars:
            raise ArgumentError("num_vars mismatch")
        return PolyMatrix._wrap(matmul(self.entries, other.entries), self.num_vars)

    def __mul__(self, scalar):
        if isinstance(scalar, PolyMatrix):
            raise ArgumentError("use @ for matrix products")
        if not isinstance(scalar, PolyScalar):
            scalar = rational(scalar)
        return PolyMatrix._wrap(_map(lambda p: p * scalar, self.entries), self.num_vars)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.num_vars == other.num_vars
                and all(a == b for a, b in zip(self.entries.flat, other.entries.flat)))

    def __hash__(self):
        return hash((self.shape, tuple(self.entries.flat)))

    def __repr__(self):
        rows = ["[" + ", ".join(str(p) for p in row) + "]" for row in self.entries]
        return "PolyMatrix([" + ", ".join(rows) + "])"

    def is_zero(self):
        return all(p.is_zero() for p in self.entries.flat)

    def is_identity(self):
        return self.rows == self.cols and self == PolyMatrix.identity(self.rows, self.num_vars)

    @property
    def T(self):
        return PolyMatrix._wrap(self.entries.T.copy(), self.num_vars)

    @property
    def degree(self):
        return max(p.degree for p in self.entries.flat)

    def partial(self, var):
        return PolyMatrix._wrap(partial_array(self.entries, var), self.num_vars)

    def evaluate(self, point):
        return evaluate_array(self.entries, point)

    def substitute(self, values):
        target = values[0].num_vars
        return PolyMatrix._wrap(_map(lambda p: p.substitute(values), self.entries), target)

    def shift(self, point):
        return PolyMatrix._wrap(_map(lambda p: p.shift(point), self.entries), self.num_vars)

    def truncate(self, max_degree):
        return PolyMatrix._wrap(_map(lambda p: p.truncate(max_degree), self.entries),
                                self.num_vars)

    def trace(self):
        return reduce(lambda a, b: a + b, (self.entries[i, i] for i in range(self.rows)))

    def det(self):
        """Determinant in the polynomial ring (Laplace expansion with memoized minors)."""
        if self.rows != self.cols:
            raise ArgumentError("determinant of a non-square matrix")
        return _det(self.entries)

    def adjugate(self):
        n = self.rows
        if n != self.cols:
            raise ArgumentError("adjugate of a non-square matrix")
        if n == 1:
            return PolyMatrix.identity(1, self.num_vars)
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                minor = np.delete(np.delete(self.entries, i, axis=0), j, axis=1)
                out[j, i] = _det(minor) * (-1) ** (i + j)
        return PolyMatrix._wrap(out, self.num_vars)

    def inverse_unipotent(self):
        """Exact inverse of ``I + N`` with ``N`` nilpotent, via the finite Neumann series.

        Raises UnsupportedInputError for anything else: general polynomial
        matrices have no polynomial inverse.
        """
        n = self.rows
        if n != self.cols:
            raise ArgumentError("inverse of a non-square matrix")
        eye = PolyMatrix.identity(n, self.num_vars)
        nil = self - eye
        power = eye
        total = eye
        for k in range(1, n + 1):
            power = power @ (-nil)
            if power.is_zero():
                return total
            total = total + power
        raise UnsupportedInputError(
            "matrix is not unipotent (I + nilpotent); it has no polynomial inverse")

    def inverse_truncated(self, order):
        """Inverse as a power series at the origin, truncated at total degree ``order``.

        Requires the value at 0 to be invertible. Agrees with the true inverse
        up to ``order``, which is all a jet computation needs.
        """
        from .linalg import inverse as rat_inverse

        m0 = self.evaluate([0] * self.num_vars)
        m0_inv = PolyMatrix.from_constant(rat_inverse(m0), self.num_vars)
        nil = m0_inv @ (PolyMatrix.from_constant(m0, self.num_vars) - self)
        eye = PolyMatrix.identity(self.rows, self.num_vars)
        total = eye
        power = eye
        for _ in range(order):
            power = (power @ nil).truncate(order)
            total = total + power
        return (total @ m0_inv).truncate(order)


def matmul(a, b):
    """Product of object arrays of PolyScalar, accumulated without int seeds."""
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            acc = a[i, 0] * b[0, j]
            for k in range(1, inner):
                acc = acc + a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def _det(entries):
    n = entries.shape[0]
    cache = {}

    def minor(row, cols):
        if row == n:
            return PolyScalar.constant(1, entries[0, 0].num_vars)
        key = cols
        if key in cache:
            return cache[key]
        total = None
        free = [c for c in range(n) if not cols >> c & 1]
        for pos, c in enumerate(free):
            entry = entries[row, c]
            if entry.is_zero():
                continue
            term = entry * minor(row + 1, cols | (1 << c))
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = PolyScalar.zero(entries[0, 0].num_vars)
        cache[key] = total
        return total

    return minor(0, 0)


def commutator(a, b):
    """``ab - ba`` for square PolyMatrix operands."""
    return a @ b - b @ a


def matrix_add(a, b):
    return a + b


def matrix_multiply(a, b):
    return a @ b


def matrix_inverse(a):
    return a.inverse_unipotent()


class SlotKind(enum.Enum):
    COV = "cov"
    CONTRA = "contra"
    FIBER_IN = "fiber_in"
    FIBER_OUT = "fiber_out"

    @property
    def is_base(self):
        return self in (SlotKind.COV, SlotKind.CONTRA)


@dataclass(frozen=True)
class Slot:
    kind: SlotKind
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "kind", SlotKind(self.kind))


def _slots(spec):
    out = []
    for s in spec:
        if isinstance(s, Slot):
            out.append(s)
        else:
            kind, dim = s
            out.append(Slot(SlotKind(kind), int(dim)))
    return tuple(out)


def check_symmetry(arr, i, j, sign):
    """First index tuple where ``arr`` fails ``T[..i..j..] == sign * T[..j..i..]``, or None."""
    for idx in itertools.product(*(range(d) for d in arr.shape)):
        if idx[i] >= idx[j] and sign == 1:
            continue
        if idx[i] > idx[j]:
            continue
        swapped = list(idx)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        a, b = arr[idx], arr[tuple(swapped)]
        if a != b * sign:
            return idx
    return None


class TensorPolyField:
    """Indexed family of polynomial components with typed slots.

    ``slots`` fixes the index order of ``components``; base slots have
    dimension ``base_dim``. Optional ``symmetries`` are ``(i, j, sign)``
    triples (sign +1 symmetric, -1 antisymmetric) validated exactly on
    construction.
    """

    __slots__ = ("base_dim", "slots", "components", "symmetries")

    def __init__(self, components, slots, base_dim, symmetries=()):
        _check_num_vars(base_dim)
        slots = _slots(slots)
        arr = poly_array(components, base_dim)
        if arr.shape != tuple(s.dim for s in slots):
            raise ArgumentError(
                f"components have shape {arr.shape}, slots require {tuple(s.dim for s in slots)}")
        for s in slots:
            if s.kind.is_base and s.dim != base_dim:
                raise ArgumentError(f"base slot of dimension {s.dim} on a {base_dim}-dim base")
            if not s.kind.is_base and not 1 <= s.dim <= MAX_FIBER:
                raise ArgumentError(f"fiber dimension {s.dim} outside [1, {MAX_FIBER}]")
        if any(p.num_vars != base_dim for p in arr.flat):
            raise ArgumentError("component num_vars differs from base_dim")
        symmetries = tuple((int(i), int(j), int(sign)) for i, j, sign in symmetries)
        for i, j, sign in symmetries:
            if slots[i].dim != slots[j].dim:
                raise ArgumentError(f"slots {i} and {j} have different dimensions")
            bad = check_symmetry(arr, i, j, sign)
            if bad is not None:
                kind = "symmetric" if sign == 1 else "antisymmetric"
                raise InvalidSectionError(
                    f"component {bad} breaks the declared {kind} pair ({i}, {j})", bad)
        self.base_dim = base_dim
        self.slots = slots
        self.components = frozen(arr)
        self.symmetries = symmetries

    @classmethod
    def _wrap(cls, arr, slots, base_dim, symmetries=()):
        obj = object.__new__(cls)
        obj.base_dim = base_dim
        obj.slots = _slots(slots)
        obj.components = frozen(arr)
        obj.symmetries = tuple(symmetries)
        return obj

    @classmethod
    def zeros(cls, slots, base_dim):
        slots = _slots(slots)
        arr = np.empty(tuple(s.dim for s in slots), dtype=object)
        z = PolyScalar.zero(base_dim)
        for idx in np.ndindex(arr.shape):
            arr[idx] = z
        return cls._wrap(arr, slots, base_dim)

    @classmethod
    def form(cls, components, base_dim):
        """A differential form (all covariant slots, antisymmetry declared)."""
        arr = poly_array(components, base_dim)
        k = arr.ndim
        syms = [(i, j, -1) for i in range(k) for j in range(i + 1, k)]
        return cls(arr, [(SlotKind.COV, base_dim)] * k, base_dim, syms)

    @classmethod
    def connection(cls, matrices):
        """Connection coefficients ``A[mu][a, b]`` from m PolyMatrix values."""
        matrices = list(matrices)
        if not matrices:
            raise ArgumentError("a connection needs at least one direction")
        m = matrices[0].num_vars
        if len(matrices) != m:
            raise ArgumentError(f"need {m} connection matrices, got {len(matrices)}")
        n = matrices[0].rows
        arr = np.empty((m, n, n), dtype=object)
        for mu, a in enumerate(matrices):
            if a.shape != (n, n) or a.num_vars != m:
                raise ArgumentError("connection matrices must be n x n in the base variables")
            arr[mu] = a.entries
        return cls(arr, [(SlotKind.COV, m), (SlotKind.FIBER_OUT, n), (SlotKind.FIBER_IN, n)], m)

    @classmethod
    def endomorphism(cls, matrix):
        """A (1,1) tensor ``J[mu, nu]`` acting as ``(Jv)^mu = J[mu, nu] v^nu``."""
        m = matrix.num_vars
        if matrix.shape != (m, m):
            raise ArgumentError(f"endomorphism field must be {m} x {m}")
        return cls(matrix.entries, [(SlotKind.CONTRA, m), (SlotKind.COV, m)], m)

    @classmethod
    def metric(cls, matrix):
        m = matrix.num_vars
        if matrix.shape != (m, m):
            raise ArgumentError(f"metric must be {m} x {m}")
        return cls(matrix.entries, [(SlotKind.COV, m), (SlotKind.COV, m)], m, [(0, 1, 1)])

    @property
    def shape(self):
        return self.components.shape

    @property
    def rank(self):
        return len(self.slots)

    def __getitem__(self, idx):
        return self.components[idx]

    def matrix(self, *prefix):
        """The trailing two slots at a fixed prefix, as a PolyMatrix."""
        return PolyMatrix._wrap(self.components[prefix].copy(), self.base_dim)

    def _like(self, arr):
        return TensorPolyField._wrap(arr, self.slots, self.base_dim, self.symmetries)

    def _check_compatible(self, other):
        if not isinstance(other, TensorPolyField):
            raise ArgumentError("expected a TensorPolyField")
        if other.slots != self.slots or other.base_dim != self.base_dim:
            raise ArgumentError("fields have different slot layouts")

    def __add__(self, other):
        self._check_compatible(other)
        return self._like(self.components + other.components)

    def __sub__(self, other):
        self._check_compatible(other)
        return self._like(self.components - other.components)

    def __neg__(self):
        return self._like(-self.components)

    def __mul__(self, scalar):
        if isinstance(scalar, TensorPolyField):
            return NotImplemented
        if not isinstance(scalar, PolyScalar):
            scalar = rational(scalar)
        return self._like(_map(lambda p: p * scalar, self.components))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TensorPolyField):
            return NotImplemented
        return (self.slots == other.slots and self.base_dim == other.base_dim
                and all(a == b for a, b in zip(self.components.flat, other.components.flat)))

    def __hash__(self):
        return hash((self.slots, tuple(self.components.flat)))

    def __repr__(self):
        kinds = ",".join(s.kind.value for s in self.slots)
        return f"TensorPolyField(base_dim={self.base_dim}, slots=[{kinds}], shape={self.shape})"

    def is_zero(self):
        return all(p.is_zero() for p in self.components.flat)

    @property
    def degree(self):
        return max((p.degree for p in self.components.flat), default=-1)

    def partial(self, var):
        return self._like(partial_array(self.components, var))

    def evaluate(self, point):
        return evaluate_array(self.components, point)

    def shift(self, point):
        return self._like(_map(lambda p: p.shift(point), self.components))

    def map(self, fn):
        return self._like(_map(fn, self.components))

    def nonzero_components(self):
        """``{index tuple: PolyScalar}`` for the nonzero entries."""
        return {idx: p for idx, p in np.ndenumerate(self.components) if not p.is_zero()}
