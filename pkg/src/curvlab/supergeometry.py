"""Z2-graded bundles, superconnections and their two curvature notions.

A superconnection on ``xi+ (+) xi-`` is ``nabla + chi``: a grading-preserving
connection ``(A+, A-)`` plus an odd endomorphism with blocks
``chi_pm: xi- -> xi+`` and ``chi_mp: xi+ -> xi-``. Assembled matrices put
the plus block first.
"""
from dataclasses import dataclass

import numpy as np

from . import actions
from .curvature import covariant_differential, section, yang_mills_curvature
from .errors import ArgumentError
from .polyfield import MAX_FIBER, PolyMatrix, SlotKind, TensorPolyField, matmul

FOUT = SlotKind.FIBER_OUT
FIN = SlotKind.FIBER_IN
COV = SlotKind.COV


@dataclass(frozen=True)
class GradedBundleSpec:
    n_plus: int
    n_minus: int
    base_dim: int

    def __post_init__(self):
        for name in ("n_plus", "n_minus"):
            v = getattr(self, name)
            if not isinstance(v, int) or not 1 <= v <= MAX_FIBER:
                raise ArgumentError(f"{name} must be an int in [1, {MAX_FIBER}], got {v!r}")

    @property
    def rank(self):
        return self.n_plus + self.n_minus

    def parity(self, a, b):
        """0 for even (diagonal) positions of an assembled matrix, 1 for odd."""
        p = self.n_plus
        return int((a < p) != (b < p))


def _connection(A):
    if isinstance(A, TensorPolyField):
        return A
    return TensorPolyField.connection(list(A))


class SuperconnectionField:
    """``(A+, A-, chi_pm, chi_mp)`` with shapes checked against one grading."""

    __slots__ = ("A_plus", "A_minus", "chi_pm", "chi_mp", "spec")

    def __init__(self, A_plus, A_minus, chi_pm, chi_mp):
        ap = _connection(A_plus)
        am = _connection(A_minus)
        m = ap.base_dim
        p, q = ap.shape[1], am.shape[1]
        if am.base_dim != m:
            raise ArgumentError("A+ and A- live on different bases")
        if not isinstance(chi_pm, PolyMatrix) or not isinstance(chi_mp, PolyMatrix):
            raise ArgumentError("chi blocks must be PolyMatrix values")
        if chi_pm.shape != (p, q) or chi_mp.shape != (q, p):
            raise ArgumentError(
                f"chi blocks must be {p}x{q} and {q}x{p}, got {chi_pm.shape} and {chi_mp.shape}")
        if chi_pm.num_vars != m or chi_mp.num_vars != m:
            raise ArgumentError("chi blocks must be polynomials in the base variables")
        self.spec = GradedBundleSpec(p, q, m)
        self.A_plus = ap
        self.A_minus = am
        self.chi_pm = chi_pm
        self.chi_mp = chi_mp

    @classmethod
    def zero(cls, m, n_plus, n_minus):
        def conn(n):
            return TensorPolyField.zeros([(COV, m), (FOUT, n), (FIN, n)], m)
        return cls(conn(n_plus), conn(n_minus), PolyMatrix.zeros(n_plus, n_minus, m),
                   PolyMatrix.zeros(n_minus, n_plus, m))

    @property
    def base_dim(self):
        return self.spec.base_dim

    def __eq__(self, other):
        if not isinstance(other, SuperconnectionField):
            return NotImplemented
        return (self.A_plus == other.A_plus and self.A_minus == other.A_minus
                and self.chi_pm == other.chi_pm and self.chi_mp == other.chi_mp)

    def __hash__(self):
        return hash((self.A_plus, self.A_minus, self.chi_pm, self.chi_mp))

    def chi(self):
        """The assembled odd endomorphism (zero diagonal blocks)."""
        p, m = self.spec.n_plus, self.base_dim
        n = self.spec.rank
        out = PolyMatrix.zeros(n, n, m).entries.copy()
        out[:p, p:] = self.chi_pm.entries
        out[p:, :p] = self.chi_mp.entries
        return PolyMatrix._wrap(out, m)

    def connection(self):
        """Block-diagonal connection ``A+ (+) A-`` on the total bundle."""
        p, m, n = self.spec.n_plus, self.base_dim, self.spec.rank
        arr = TensorPolyField.zeros([(COV, m), (FOUT, n), (FIN, n)], m).components.copy()
        arr[:, :p, :p] = self.A_plus.components
        arr[:, p:, p:] = self.A_minus.components
        return TensorPolyField._wrap(arr, [(COV, m), (FOUT, n), (FIN, n)], m)


@dataclass(frozen=True, eq=False)
class SuperSectionValue:
    """``nabla_s psi`` split by form degree: ``deg0 = chi psi``, ``deg1[mu] = nabla_mu psi``."""

    deg0: np.ndarray
    deg1: np.ndarray
    spec: GradedBundleSpec

    def __eq__(self, other):
        return (isinstance(other, SuperSectionValue)
                and all(a == b for a, b in zip(self.deg0.flat, other.deg0.flat))
                and all(a == b for a, b in zip(self.deg1.flat, other.deg1.flat)))

    def plus(self):
        p = self.spec.n_plus
        return self.deg0[:p], self.deg1[:, :p]

    def minus(self):
        p = self.spec.n_plus
        return self.deg0[p:], self.deg1[:, p:]


def apply_superconnection(s, psi_plus, psi_minus):
    """Act on a graded section given as two lists of polynomials."""
    psi_plus, psi_minus = list(psi_plus), list(psi_minus)
    if len(psi_plus) != s.spec.n_plus or len(psi_minus) != s.spec.n_minus:
        raise ArgumentError("section does not match the grading")
    m = s.base_dim
    psi = section(psi_plus + psi_minus, m)
    deg1 = covariant_differential(s.connection(), psi).components
    chi = s.chi().entries
    deg0 = matmul(chi, psi.components.reshape(-1, 1)).reshape(-1)
    return SuperSectionValue(deg0, deg1, s.spec)


@dataclass(frozen=True, eq=False)
class SuperCurvatureValue:
    """Supercurvature split into form degrees 0, 1, 2.

    Every degree is an assembled ``(n+ + n-)``-square End-valued field:
    ``deg0`` with no base slots, ``deg1[mu]``, ``deg2[mu, nu]``.
    ``parity`` records the endomorphism parity of each degree.
    """

    variant: str
    deg0: TensorPolyField
    deg1: TensorPolyField
    deg2: TensorPolyField
    spec: GradedBundleSpec

    @property
    def parity(self):
        return {0: "odd" if self.variant == "obstruction" else "even", 1: "odd", 2: "even"}

    def block(self, degree, which):
        """Sub-block ``which`` in {"++", "+-", "-+", "--"} of one degree."""
        arr = (self.deg0, self.deg1, self.deg2)[degree].components
        p = self.spec.n_plus
        rows = slice(0, p) if which[0] == "+" else slice(p, None)
        cols = slice(0, p) if which[1] == "+" else slice(p, None)
        return arr[(Ellipsis, rows, cols)]

    def blocks(self):
        """Named nonredundant blocks, in the order (chi, nabla chi, F+, F-)."""
        d0 = "chi" if self.variant == "obstruction" else "chi2"
        if self.variant == "obstruction":
            zero_deg = {f"{d0}_pm": self.block(0, "+-"), f"{d0}_mp": self.block(0, "-+")}
        else:
            zero_deg = {f"{d0}_pp": self.block(0, "++"), f"{d0}_mm": self.block(0, "--")}
        return {
            **zero_deg,
            "nabla_chi_pm": self.block(1, "+-"),
            "nabla_chi_mp": self.block(1, "-+"),
            "F_plus": self.block(2, "++"),
            "F_minus": self.block(2, "--"),
        }

    def evaluate(self, point):
        return {name: _eval(arr, point) for name, arr in self.blocks().items()}

    def is_zero(self):
        return self.deg0.is_zero() and self.deg1.is_zero() and self.deg2.is_zero()

    def __eq__(self, other):
        return (isinstance(other, SuperCurvatureValue) and self.variant == other.variant
                and self.deg0 == other.deg0 and self.deg1 == other.deg1
                and self.deg2 == other.deg2)


def _eval(arr, point):
    out = np.empty(arr.shape, dtype=object)
    for idx, p in np.ndenumerate(arr):
        out[idx] = p.evaluate(point)
    return out


def _curvature(s, variant):
    m, n = s.base_dim, s.spec.rank
    chi = s.chi()
    conn = s.connection()
    zero_form = TensorPolyField._wrap(chi.entries, [(FOUT, n), (FIN, n)], m)
    deg1 = covariant_differential(conn, zero_form)
    deg2 = yang_mills_curvature(conn)
    if variant == "quillen":
        deg0 = TensorPolyField._wrap((chi @ chi).entries, [(FOUT, n), (FIN, n)], m)
    else:
        deg0 = zero_form
    return SuperCurvatureValue(variant, deg0, deg1, deg2, s.spec)


def quillen_supercurvature(s):
    """``chi^2 + d^nabla chi + F^nabla``."""
    return _curvature(s, "quillen")


def obstruction_supercurvature(s):
    """``(chi, nabla chi, F^nabla)``: the order-1 orbit invariant of the superconnection."""
    return _curvature(s, "obstruction")


def super_gauge_transform(s, phi_plus, phi_minus, inv_plus=None, inv_minus=None):
    """Act by a grading-preserving automorphism ``(phi+, phi-)``.

    ``chi_pm -> phi+^-1 chi_pm phi-``, ``chi_mp -> phi-^-1 chi_mp phi+`` and
    each ``A`` block by the usual gauge formula.
    """
    ip = actions.checked_inverse(phi_plus, inv_plus)
    im = actions.checked_inverse(phi_minus, inv_minus)
    return SuperconnectionField(
        actions.gauge_transform(s.A_plus, phi_plus, ip),
        actions.gauge_transform(s.A_minus, phi_minus, im),
        ip @ s.chi_pm @ phi_minus,
        im @ s.chi_mp @ phi_plus,
    )


def conjugate_curvature(value, phi_plus, phi_minus, inv_plus=None, inv_minus=None):
    """``Phi^-1 X Phi`` on every degree with ``Phi = phi+ (+) phi-``."""
    p = value.spec.n_plus
    n, m = value.spec.rank, value.spec.base_dim
    ip = actions.checked_inverse(phi_plus, inv_plus)
    im = actions.checked_inverse(phi_minus, inv_minus)

    def block_diag(a, b):
        out = PolyMatrix.zeros(n, n, m).entries.copy()
        out[:p, :p] = a.entries
        out[p:, p:] = b.entries
        return PolyMatrix._wrap(out, m)

    big = block_diag(phi_plus, phi_minus)
    big_inv = block_diag(ip, im)
    return SuperCurvatureValue(
        value.variant,
        actions.conjugate(value.deg0, big, big_inv),
        actions.conjugate(value.deg1, big, big_inv),
        actions.conjugate(value.deg2, big, big_inv),
        value.spec,
    )


def graded_parity_table(spec):
    """Parity of each entry of an assembled endomorphism."""
    n = spec.rank
    return np.array([[spec.parity(a, b) for b in range(n)] for a in range(n)], dtype=int)
