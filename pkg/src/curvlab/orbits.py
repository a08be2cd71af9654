"""Group actions on jets, normal forms, and order-1 orbit invariants.

Three cases are worked out:

* connections under vertical automorphisms (invariant: ``F(0)``),
* almost complex structures under diffeomorphisms fixing the point
  (invariant: the component of ``C`` complementary to the gauge directions),
* superconnections under grading-preserving automorphisms
  (invariant: ``(chi, nabla chi, F+, F-)`` at the point).

All actions are right actions: ``act(h2, act(h1, j)) == act(h1 * h2, j)``
where ``*`` is the pointwise product (automorphisms) or composition
``h1 o h2`` (diffeomorphisms).
"""
import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from gmpy2 import mpq
import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

from . import linalg
from .errors import ArgumentError, UnsupportedInputError
from .jets import Jet1ACS, Jet1Connection, Jet1Super, Jet2Diffeo, Jet2VertAut

EQUIVALENT = "equivalent-at-order-1"
OBSTRUCTED = "obstructed"
UNDECIDED = "undecided-higher-order"

MAX_CONJUGATION_DIM = 4


def _mm(*mats):
    out = mats[0]
    for b in mats[1:]:
        out = out @ b
    return out


def _sym_pair(arr):
    """Symmetrize an ``(m, m, ...)`` array in its first two indices."""
    return (arr + np.swapaxes(arr, 0, 1)) * mpq(1, 2)


# -- connections ---------------------------------------------------------------


def act_on_connection_jet(aut, j):
    """Normalized automorphism jet ``1 + B_a x^a + 1/2 B2_ab x^a x^b`` acting on a connection 1-jet.

    ``A_mu -> A_mu + B_mu`` and
    ``A_{mu a} -> A_{mu a} + A_mu B_a - B_a A_mu - B_a B_mu + B2_{mu a}``.
    """
    if not isinstance(aut, Jet2VertAut) or not isinstance(j, Jet1Connection):
        raise ArgumentError("expected (Jet2VertAut, Jet1Connection)")
    if not aut.is_normalized():
        raise UnsupportedInputError(
            "automorphism jet has B0 != 1; use act_on_connection_jet_general")
    if aut.base_dim != j.base_dim or aut.fiber_dim != j.fiber_dim:
        raise ArgumentError("automorphism and connection jets have different dimensions")
    m = j.base_dim
    A, dA, B, B2 = j.A, j.dA, aut.B, aut.B2
    new_a = A + B
    new_da = np.empty(dA.shape, dtype=object)
    for mu, a in itertools.product(range(m), repeat=2):
        new_da[mu, a] = (dA[mu, a] + A[mu] @ B[a] - B[a] @ A[mu] - B[a] @ B[mu] + B2[mu, a])
    return Jet1Connection(new_a, new_da)


def _conjugate_connection_jet(g, j):
    """Constant gauge ``g``: every coefficient goes to ``g^-1 X g``."""
    gi = linalg.inverse(g)
    A = np.array([gi @ a @ g for a in j.A])
    dA = np.empty(j.dA.shape, dtype=object)
    for mu, a in itertools.product(range(j.base_dim), repeat=2):
        dA[mu, a] = gi @ j.dA[mu, a] @ g
    return Jet1Connection(A, dA)


def _split_leading(aut):
    """``aut = B0 * n`` with ``n`` normalized."""
    c0 = linalg.inverse(aut.B0)
    m = aut.base_dim
    n = Jet2VertAut.normalized(np.array([c0 @ b for b in aut.B]),
                               np.array([[c0 @ aut.B2[a, b] for b in range(m)]
                                         for a in range(m)]))
    return aut.B0, n


def act_on_connection_jet_general(aut, j):
    """Any automorphism jet: constant conjugation by ``B0`` then the normalized action."""
    b0, n = _split_leading(aut)
    return act_on_connection_jet(n, _conjugate_connection_jet(b0, j))


def connection_invariant(j):
    """``F_{mu a} = dA[a, mu] - dA[mu, a] + [A_mu, A_a]`` (curvature at the point)."""
    m, n = j.base_dim, j.fiber_dim
    F = np.empty((m, m, n, n), dtype=object)
    for mu, a in itertools.product(range(m), repeat=2):
        F[mu, a] = j.dA[a, mu] - j.dA[mu, a] + j.A[mu] @ j.A[a] - j.A[a] @ j.A[mu]
    return F


@dataclass(frozen=True, eq=False)
class ConnectionReduction:
    normal_form: Jet1Connection
    witness: Jet2VertAut
    invariant: np.ndarray


def reduce_connection_jet(j):
    """Normal form, witness and invariant of a connection 1-jet.

    The witness has ``B = -A`` and ``B2 = -sym(A~)`` where
    ``A~_{mu a} = dA_{mu a} - A_mu A_a``. The normal form has ``A = 0`` and
    ``dA = -F/2``.
    """
    tilde = np.empty(j.dA.shape, dtype=object)
    m = j.base_dim
    for mu, a in itertools.product(range(m), repeat=2):
        tilde[mu, a] = j.dA[mu, a] - j.A[mu] @ j.A[a]
    witness = Jet2VertAut.normalized(-j.A, -_sym_pair(tilde))
    nf = act_on_connection_jet(witness, j)
    return ConnectionReduction(nf, witness, connection_invariant(j))


def connection_witness_between(j1, j2):
    """Normalized ``h`` with ``act(h, j1) == j2``, or None when the invariants differ."""
    r1, r2 = reduce_connection_jet(j1), reduce_connection_jet(j2)
    if not linalg.array_equal(r1.invariant, r2.invariant):
        return None
    return r1.witness.compose(r2.witness.inverse())


def find_conjugator(F1, F2, mask=None):
    """Constant ``g`` with ``g^-1 F1[k] g == F2[k]`` for every ``k``.

    ``F1``, ``F2`` are stacks ``(..., n, n)``. ``mask`` (boolean ``n x n``)
    restricts which entries of ``g`` may be nonzero, e.g. block-diagonal for
    graded bundles. Returns ``g``, or None when no invertible solution
    exists. The solution space of ``F1 g = g F2`` is computed exactly;
    existence of an invertible member is decided by the determinant of its
    generic element, and a witness is read off by fixing one parameter at a
    time to a small integer that keeps that determinant nonzero.
    """
    n = F1.shape[-1]
    if mask is None:
        if n > MAX_CONJUGATION_DIM:
            raise UnsupportedInputError(
                f"conjugation search is limited to n <= {MAX_CONJUGATION_DIM}")
        mask = np.ones((n, n), dtype=bool)
    free = [(int(i), int(k)) for i, k in np.argwhere(mask)]
    col = {e: i for i, e in enumerate(free)}
    f1 = F1.reshape(-1, n, n)
    f2 = F2.reshape(-1, n, n)
    rows = []
    for a, b in zip(f1, f2):
        # (F1 g - g F2)[i, k] is linear in the free entries g[j, l]
        for i, k in itertools.product(range(n), repeat=2):
            row = [mpq(0)] * len(free)
            for t in range(n):
                if (t, k) in col:
                    row[col[t, k]] += a[i, t]
                if (i, t) in col:
                    row[col[i, t]] -= b[t, k]
            rows.append(row)
    basis = linalg.nullspace(np.array(rows, dtype=object)) if rows else linalg.identity(len(free))
    if basis.shape[0] == 0:
        return None
    mats = []
    for vec in basis:
        g = linalg.zeros((n, n))
        for e, v in zip(free, vec):
            g[e] = v
        mats.append(g)
    R, *ts = ring([f"t{i}" for i in range(len(mats))], QQ)
    generic = [[sum((t * QQ(mat[i, k]) for t, mat in zip(ts, mats)), R.zero)
                for k in range(n)] for i in range(n)]
    det = DomainMatrix(generic, (n, n), R.to_domain()).det()
    if det == 0:
        return None
    coeffs = []
    for t in ts:
        # det restricted to t = c is a polynomial of degree <= n in t, so some c in 0..n works
        for c in range(n + 1):
            reduced = det.subs(t, c)
            if reduced != 0:
                det = reduced
                coeffs.append(c)
                break
    return sum((mat * c for mat, c in zip(mats, coeffs)), linalg.zeros((n, n)))


# -- almost complex structures ----------------------------------------------------


def act_on_acs_jet(d, j):
    """Normalized diffeomorphism jet ``x + 1/2 B2(x, x)`` acting on an ACS 1-jet (pullback).

    ``C^mu_{nu rho} -> C^mu_{nu rho} + J^mu_a B2^a_{nu rho} - B2^mu_{a rho} J^a_nu``.
    """
    if not isinstance(d, Jet2Diffeo) or not isinstance(j, Jet1ACS):
        raise ArgumentError("expected (Jet2Diffeo, Jet1ACS)")
    if not d.is_normalized():
        raise UnsupportedInputError("diffeomorphism jet has B != 1; use act_on_acs_jet_general")
    if d.base_dim != j.base_dim:
        raise ArgumentError("diffeomorphism and structure jets have different dimensions")
    return Jet1ACS(j.J, j.C + k_map(d.B2, j.J))


def act_on_acs_jet_general(d, j):
    """Any diffeomorphism jet: linear change of coordinates, then the normalized action."""
    L = d.B
    Li = linalg.inverse(L)
    J = Li @ j.J @ L
    C = np.einsum("ma,abs,bn,sr->mnr", Li, j.C, L, L, optimize=True)
    if d.base_dim != j.base_dim:
        raise ArgumentError("diffeomorphism and structure jets have different dimensions")
    if not linalg.is_zero(d.B2):
        C = C + k_map(np.einsum("mn,nab->mab", Li, d.B2), J)
    return Jet1ACS(J, C)


def k_map(B, J):
    """``K(B)(u, v) = J B(u, v) - B(J u, v)`` for ``B`` symmetric in its lower pair."""
    B = linalg.as_rational(B)
    J = linalg.as_rational(J)
    m = J.shape[0]
    if B.shape != (m, m, m):
        raise ArgumentError(f"B must have shape ({m}, {m}, {m})")
    if not all(linalg.array_equal(B[mu], B[mu].T) for mu in range(m)):
        raise ArgumentError("B must be symmetric in its lower indices")
    return np.einsum("ma,anr->mnr", J, B) - np.einsum("mar,an->mnr", B, J)


def symmetrize(C):
    """``s(C)(u, v) = (C(u, v) + C(v, u)) / 2``."""
    return (C + np.swapaxes(C, 1, 2)) * mpq(1, 2)


def in_w(C, J):
    """``J C(u, v) + C(J u, v) == 0`` for all ``u, v``."""
    return linalg.is_zero(np.einsum("ma,anr->mnr", J, C) + np.einsum("mar,an->mnr", C, J))


class AcsSplitting:
    """Linear algebra of ``W = K(S) + (ker s n W)`` for one constant ``J``.

    ``S`` is the space of ``B`` symmetric in the lower pair; ``A = s o K``
    restricted to ``S``. The projection onto the gauge directions is
    ``P = K o A^+ o s`` where ``A^+`` picks any exact solution of
    ``A b = s(C)``; ``K`` kills the ambiguity, so ``P`` is well defined.
    """

    def __init__(self, J):
        self.J = linalg.as_rational(J)
        m = self.J.shape[0]
        self.m = m
        self.sym_index = [(mu, a, b) for mu in range(m) for a in range(m) for b in range(a, m)]

    def _coords(self, B):
        return np.array([B[mu, a, b] for mu, a, b in self.sym_index], dtype=object)

    def _from_coords(self, vec):
        B = linalg.zeros((self.m,) * 3)
        for (mu, a, b), v in zip(self.sym_index, vec):
            B[mu, a, b] += v
            if a != b:
                B[mu, b, a] += v
        return B

    @cached_property
    def k_matrix(self):
        """Columns ``K(e_k)`` flattened, one per basis element of ``S``."""
        m, J = self.m, self.J
        out = linalg.zeros((m, m, m, len(self.sym_index)))
        for k, (al, a, b) in enumerate(self.sym_index):
            for be, ga in {(a, b), (b, a)}:
                # unit B[al, be, ga] feeds J[mu, al] into (mu, be, ga)
                # and -J[be, nu] into (al, nu, ga)
                for i in range(m):
                    out[i, be, ga, k] += J[i, al]
                    out[al, i, ga, k] -= J[be, i]
        return out.reshape(m ** 3, -1)

    @cached_property
    def a_matrix(self):
        """``A = s o K`` in the basis of ``S`` (input) and ``S`` coordinates (output)."""
        m = self.m
        K = self.k_matrix.reshape(m, m, m, -1)
        half = mpq(1, 2)
        return np.array([(K[mu, a, b] + K[mu, b, a]) * half for mu, a, b in self.sym_index],
                        dtype=object)

    @cached_property
    def w_matrix(self):
        """Constraints cutting ``W`` out of all ``C``."""
        m = self.m
        rows = []
        for e in range(m ** 3):
            C = linalg.zeros(m ** 3)
            C[e] = mpq(1)
            C = C.reshape(m, m, m)
            rows.append((np.einsum("ma,anr->mnr", self.J, C)
                         + np.einsum("mar,an->mnr", C, self.J)).reshape(-1))
        return np.array(rows, dtype=object).T

    @cached_property
    def dims(self):
        """Dimensions of ``S``, ``W``, ``K(S)``, ``ker s n W`` and ``rank A``."""
        m = self.m
        s_rows = []
        for e in range(m ** 3):
            C = linalg.zeros(m ** 3)
            C[e] = mpq(1)
            s_rows.append(symmetrize(C.reshape(m, m, m)).reshape(-1))
        s_mat = np.array(s_rows, dtype=object).T
        dim_w = m ** 3 - linalg.rank(self.w_matrix)
        ker_s_w = m ** 3 - linalg.rank(np.concatenate([self.w_matrix, s_mat], axis=0))
        return {
            "S": len(self.sym_index),
            "W": dim_w,
            "K(S)": linalg.rank(self.k_matrix),
            "ker_s_in_W": ker_s_w,
            "rank_A": linalg.rank(self.a_matrix),
        }

    @cached_property
    def _solver(self):
        return linalg.Solver(self.a_matrix)

    @cached_property
    def k_solver(self):
        """Solves ``K(b) = delta`` for ``delta`` in the image of ``K``."""
        return linalg.Solver(self.k_matrix)

    @property
    def a_invertible(self):
        return self.dims["rank_A"] == self.dims["S"]

    def gauge_part(self, C):
        """``P(C) = K(b)`` with ``A b = s(C)``."""
        C = linalg.as_rational(C)
        b = self._solver(self._coords(symmetrize(C)))
        return (self.k_matrix @ b).reshape(C.shape)

    def projection(self, C):
        """``(1 - P)(C)``: the component in ``ker s``."""
        C = linalg.as_rational(C)
        return C - self.gauge_part(C)

    def closed_form(self, C):
        """``(1 - P)(C)(u, v) = (C(u,v) - C(v,u) + J C(u, Jv) - J C(v, Ju)) / 4``."""
        C = linalg.as_rational(C)
        J = self.J
        jc_u_jv = np.einsum("ma,anb,br->mnr", J, C, J, optimize=True)
        return (C - np.swapaxes(C, 1, 2) + jc_u_jv - np.swapaxes(jc_u_jv, 1, 2)) * mpq(1, 4)


def jet_nijenhuis(j):
    """``N(J)`` at the point from the 1-jet alone, ``N[rho, mu, nu]``.

    ``N(u, v) = C(v, Ju) - C(u, Jv) - J C(v, u) + J C(u, v)``.
    """
    J, C = j.J, j.C
    a = np.einsum("rna,am->rmn", C, J)  # C(v, Ju): C[rho, nu, a] J[a, mu]
    jc_uv = np.einsum("ra,amn->rmn", J, C)
    return a - np.swapaxes(a, 1, 2) - np.swapaxes(jc_uv, 1, 2) + jc_uv


@dataclass(frozen=True, eq=False)
class AcsProjection:
    ker_s_part: np.ndarray
    closed_form: np.ndarray
    minus_half_jn: np.ndarray
    nijenhuis: np.ndarray


def acs_projection(j, splitting=None):
    """Component of ``C`` in ``ker s``, by linear solve and by closed form.

    Also returns ``N`` at the point and ``-1/2 J.N`` for comparison; the
    projection equals ``-1/4 J.N``.
    """
    splitting = splitting or AcsSplitting(j.J)
    n = jet_nijenhuis(j)
    jn = np.einsum("ra,amn->rmn", j.J, n)
    return AcsProjection(splitting.projection(j.C), splitting.closed_form(j.C),
                         jn * mpq(-1, 2), n)


def acs_invariant(j, splitting=None):
    """``J`` and the ``ker s`` component of ``C``.

    Without an explicit splitting the projection is taken in the ``J0`` frame
    and carried back: the splitting is natural under constant frame changes
    (``K`` vanishes on ``ker A``), so only the ``J0`` splitting is ever built.
    """
    if splitting is not None:
        return {"J": j.J, "ker_s_part": acs_projection(j, splitting).ker_s_part}
    m = j.base_dim
    d = Jet2Diffeo(complex_frame(j.J), linalg.zeros((m, m, m)))
    f = act_on_acs_jet_general(d, j)
    q = Jet1ACS(f.J, splitting_for(f.J).projection(f.C))
    return {"J": j.J, "ker_s_part": act_on_acs_jet_general(d.inverse(), q).C}


@lru_cache(maxsize=64)
def _splitting_cached(m, flat):
    return AcsSplitting(np.array(flat, dtype=object).reshape(m, m))


def splitting_for(J):
    """Shared ``AcsSplitting`` per constant ``J`` (the linear algebra is reused)."""
    J = linalg.as_rational(J)
    return _splitting_cached(J.shape[0], tuple(J.flat))


def complex_frame(J):
    """Constant ``L`` with ``L^-1 J L = J0``: columns ``v_1..v_l, J v_1..J v_l``."""
    J = linalg.as_rational(J)
    m = J.shape[0]
    vs = []
    for k in range(m):
        e = linalg.zeros(m)
        e[k] = mpq(1)
        trial = vs + [e, J @ e]
        if linalg.rank(np.array(trial, dtype=object)) == len(trial):
            vs = trial
        if len(vs) == m:
            break
    first, second = vs[0::2], vs[1::2]
    return np.array(first + second, dtype=object).T


# -- superconnections -------------------------------------------------------------


def act_on_super_jet(aut_plus, aut_minus, j):
    """Grading-preserving automorphism jets with identity leading terms.

    ``chi_pm_mu -> chi_pm_mu - phi+_mu chi_pm + chi_pm phi-_mu`` (and mirror);
    each ``A`` block transforms as a connection.
    """
    if not isinstance(j, Jet1Super):
        raise ArgumentError("expected a Jet1Super")
    p, q = j.grading
    if aut_plus.fiber_dim != p or aut_minus.fiber_dim != q:
        raise ArgumentError("automorphism jets do not match the grading")
    if aut_plus.base_dim != j.base_dim or aut_minus.base_dim != j.base_dim:
        raise ArgumentError("automorphism and superconnection jets have different bases")
    if not (aut_plus.is_normalized() and aut_minus.is_normalized()):
        raise UnsupportedInputError("super automorphism jets must begin with the identity")
    m = j.base_dim
    bp, bm = aut_plus.B, aut_minus.B
    dpm = np.array([j.dchi_pm[mu] - bp[mu] @ j.chi_pm + j.chi_pm @ bm[mu] for mu in range(m)])
    dmp = np.array([j.dchi_mp[mu] - bm[mu] @ j.chi_mp + j.chi_mp @ bp[mu] for mu in range(m)])
    plus = act_on_connection_jet(aut_plus, j.plus_connection())
    minus = act_on_connection_jet(aut_minus, j.minus_connection())
    return Jet1Super(j.chi_pm, j.chi_mp, dpm, dmp, plus.A, plus.dA, minus.A, minus.dA)


def _conjugate_super_jet(gp, gm, j):
    """Constant graded gauge ``(g+, g-)``: ``X -> g^-1 X g`` blockwise."""
    ip, im = linalg.inverse(gp), linalg.inverse(gm)
    plus = _conjugate_connection_jet(gp, j.plus_connection())
    minus = _conjugate_connection_jet(gm, j.minus_connection())
    return Jet1Super(ip @ j.chi_pm @ gm, im @ j.chi_mp @ gp,
                     np.array([ip @ d @ gm for d in j.dchi_pm]),
                     np.array([im @ d @ gp for d in j.dchi_mp]),
                     plus.A, plus.dA, minus.A, minus.dA)


def act_on_super_jet_general(aut_plus, aut_minus, j):
    """Any pair of automorphism jets: constant conjugation by the leading terms, then
    the normalized action."""
    gp, hp = _split_leading(aut_plus)
    gm, hm = _split_leading(aut_minus)
    return act_on_super_jet(hp, hm, _conjugate_super_jet(gp, gm, j))


@dataclass(frozen=True, eq=False)
class SuperReduction:
    normal_form: Jet1Super
    witness: tuple
    invariant: dict


def reduce_super_jet(j):
    """Kill ``A+-`` with ``phi+-_mu = -A+-_mu``, then the symmetric part of ``A~``.

    Invariant blocks: ``chi_pm``, ``nabla_chi_pm``, ``chi_mp``, ``nabla_chi_mp``,
    ``F_plus``, ``F_minus`` at the point, where
    ``nabla_chi_pm[mu] = chi_pm_mu + A+_mu chi_pm - chi_pm A-_mu``.
    """
    rp = reduce_connection_jet(j.plus_connection())
    rm = reduce_connection_jet(j.minus_connection())
    nf = act_on_super_jet(rp.witness, rm.witness, j)
    invariant = {
        "chi_pm": nf.chi_pm,
        "nabla_chi_pm": nf.dchi_pm,
        "chi_mp": nf.chi_mp,
        "nabla_chi_mp": nf.dchi_mp,
        "F_plus": rp.invariant,
        "F_minus": rm.invariant,
    }
    return SuperReduction(nf, (rp.witness, rm.witness), invariant)


# -- verdicts -----------------------------------------------------------------------


def _sup(arr):
    return max((abs(float(v)) for v in np.asarray(arr, dtype=object).flat), default=0.0)


@dataclass(frozen=True, eq=False)
class ObstructionReport:
    case_tag: str
    invariant_blocks: dict
    other_blocks: dict
    differing: tuple
    sup_norm: float
    verdict: str
    note: str = ""
    witness: object = field(default=None, repr=False)


def _compare(case, inv1, inv2, note):
    differing = tuple(k for k in inv1 if not linalg.array_equal(inv1[k], inv2[k]))
    sup = max((_sup(np.asarray(inv1[k], dtype=object) - np.asarray(inv2[k], dtype=object))
               if inv1[k].shape == inv2[k].shape else float("inf") for k in differing),
              default=0.0)
    verdict = OBSTRUCTED if differing else EQUIVALENT
    return ObstructionReport(case, inv1, inv2, differing, sup, verdict, note)


_ORDER1_NOTE = "equal order-1 invariants do not by themselves prove local equivalence"


def decide_equivalence(j1, j2):
    """Compare the order-1 invariants of two jets of the same kind.

    Invariants of the normalized groups are compared first. When they differ,
    the constant leading part of the stationary group is searched as well:
    simultaneous conjugation for connections and superconnections, a linear
    change of frame for almost complex structures. Every ``equivalent`` verdict
    carries a witness jet that has been checked by acting with it.
    """
    if type(j1) is not type(j2):
        raise ArgumentError(f"cannot compare {type(j1).__name__} with {type(j2).__name__}")
    if isinstance(j1, Jet1Connection):
        return _decide_connection(j1, j2)
    if isinstance(j1, Jet1ACS):
        if j1.base_dim != j2.base_dim:
            raise ArgumentError("jets live on bases of different dimension")
        return _decide_acs(j1, j2)
    if isinstance(j1, Jet1Super):
        if j1.grading != j2.grading or j1.base_dim != j2.base_dim:
            raise ArgumentError("superconnection jets have different gradings or bases")
        return _decide_super(j1, j2)
    raise ArgumentError(f"no equivalence test for {type(j1).__name__}")


def _decide_connection(j1, j2):
    if (j1.base_dim, j1.fiber_dim) != (j2.base_dim, j2.fiber_dim):
        raise ArgumentError("connection jets have different dimensions")
    r1, r2 = reduce_connection_jet(j1), reduce_connection_jet(j2)
    inv1, inv2 = {"F": r1.invariant}, {"F": r2.invariant}
    rep = _compare("connection", inv1, inv2, _ORDER1_NOTE)
    if rep.verdict == EQUIVALENT:
        w = r1.witness.compose(r2.witness.inverse())
        return _equivalent(rep, w, act_on_connection_jet(w, j1) == j2)
    n = j1.fiber_dim
    if n > MAX_CONJUGATION_DIM:
        return _verdict(rep, UNDECIDED, f"constant-conjugation search skipped for n = {n}")
    g = find_conjugator(r1.invariant, r2.invariant)
    if g is None:
        return _verdict(rep, OBSTRUCTED, "F(0) families are not simultaneously similar")
    m = j1.base_dim
    lead = Jet2VertAut(g, linalg.zeros((m, n, n)), linalg.zeros((m, m, n, n)))
    moved = act_on_connection_jet_general(lead, j1)
    witness = lead.compose(connection_witness_between(moved, j2))
    return _equivalent(rep, witness, act_on_connection_jet_general(witness, j1) == j2,
                       "equal up to constant conjugation")


def _verdict(rep, verdict, note):
    return ObstructionReport(rep.case_tag, rep.invariant_blocks, rep.other_blocks, rep.differing,
                             rep.sup_norm, verdict, f"{note}; {_ORDER1_NOTE}"
                             if verdict == EQUIVALENT else note)


def _equivalent(rep, witness, checked, note=None):
    if not checked:
        raise AssertionError("constructed witness does not map the first jet to the second")
    text = _ORDER1_NOTE if note is None else f"{note}; {_ORDER1_NOTE}"
    return ObstructionReport(rep.case_tag, rep.invariant_blocks, rep.other_blocks, (), 0.0,
                             EQUIVALENT, text, witness)


# -- acs verdicts


def _gauge_solve(splitting, delta):
    """Normalized diffeomorphism jet whose ``K(B2)`` equals ``delta``."""
    b = splitting.k_solver(delta.reshape(-1))
    return Jet2Diffeo.normalized(splitting._from_coords(b))


def _realify(z, l):
    """Real ``2l x 2l`` matrix of a complex ``l x l`` matrix given as (re, im) arrays."""
    re, im = z
    out = linalg.zeros((2 * l, 2 * l))
    out[:l, :l], out[:l, l:] = re, -im
    out[l:, :l], out[l:, l:] = im, re
    return out


def _sl2_column(w):
    """Complex ``M`` with ``det M = 1`` and ``M e_1 = w`` (``w != 0`` in ``C^2``)."""
    (p_re, q_re), (p_im, q_im) = w
    re, im = linalg.zeros((2, 2)), linalg.zeros((2, 2))
    re[:, 0], im[:, 0] = [p_re, q_re], [p_im, q_im]
    if p_re or p_im:
        n = p_re * p_re + p_im * p_im
        re[1, 1], im[1, 1] = p_re / n, -p_im / n
    else:
        n = q_re * q_re + q_im * q_im
        re[0, 1], im[0, 1] = -q_re / n, q_im / n
    return _realify((re, im), 2)


def _decide_acs(j1, j2):
    rep = _compare("acs", acs_invariant(j1), acs_invariant(j2), _ORDER1_NOTE)
    m = j1.base_dim
    d1 = Jet2Diffeo(complex_frame(j1.J), linalg.zeros((m, m, m)))
    d2 = Jet2Diffeo(complex_frame(j2.J), linalg.zeros((m, m, m)))
    f1, f2 = act_on_acs_jet_general(d1, j1), act_on_acs_jet_general(d2, j2)
    sp = splitting_for(f1.J)
    q1, q2 = sp.projection(f1.C), sp.projection(f2.C)
    steps = [d1]
    note = None if rep.verdict == EQUIVALENT else "equal after a constant change of frame"
    if not linalg.array_equal(q1, q2):
        z1, z2 = linalg.is_zero(q1), linalg.is_zero(q2)
        if z1 or z2:
            return _verdict(rep, OBSTRUCTED, "J.N vanishes at the point for one jet only")
        if m != 4:
            return _verdict(rep, UNDECIDED, f"frame search on nonzero J.N skipped for m = {m}")
        # q is antilinear and antisymmetric on C^2, so q(Lu, Lv) = conj(det L) q(u, v):
        # any SL(2, C) map sending w2 = q2(e1, e2) to w1 = q1(e1, e2) matches them.
        w1 = (q1[:2, 0, 1], q1[2:, 0, 1])
        w2 = (q2[:2, 0, 1], q2[2:, 0, 1])
        L = _sl2_column(w1) @ linalg.inverse(_sl2_column(w2))
        dr = Jet2Diffeo(L, linalg.zeros((m, m, m)))
        f1 = act_on_acs_jet_general(dr, f1)
        steps.append(dr)
        note = "equal after a constant complex-linear change of frame"
    steps += [_gauge_solve(sp, f2.C - f1.C), d2.inverse()]
    witness = steps[0]
    for s in steps[1:]:
        witness = witness.compose(s)
    return _equivalent(rep, witness, act_on_acs_jet_general(witness, j1) == j2, note)


# -- super verdicts


def _super_stack(inv):
    """Assembled ``(n+ + n-)``-square matrices on which a constant gauge acts by conjugation."""
    p, q = inv["chi_pm"].shape
    n = p + q

    def odd(a, b):
        out = linalg.zeros((n, n))
        out[:p, p:], out[p:, :p] = a, b
        return out

    def even(a, b):
        out = linalg.zeros((n, n))
        out[:p, :p], out[p:, p:] = a, b
        return out

    m = inv["F_plus"].shape[0]
    mats = [odd(inv["chi_pm"], inv["chi_mp"])]
    mats += [odd(inv["nabla_chi_pm"][mu], inv["nabla_chi_mp"][mu]) for mu in range(m)]
    mats += [even(inv["F_plus"][mu, nu], inv["F_minus"][mu, nu])
             for mu, nu in itertools.combinations(range(m), 2)]
    return np.array(mats, dtype=object)


def _super_witness(j1, j2):
    r1, r2 = reduce_super_jet(j1), reduce_super_jet(j2)
    return tuple(a.compose(b.inverse()) for a, b in zip(r1.witness, r2.witness))


def _decide_super(j1, j2):
    inv1, inv2 = reduce_super_jet(j1).invariant, reduce_super_jet(j2).invariant
    rep = _compare("superconnection", inv1, inv2, _ORDER1_NOTE)
    if rep.verdict == EQUIVALENT:
        wp, wm = _super_witness(j1, j2)
        return _equivalent(rep, (wp, wm), act_on_super_jet(wp, wm, j1) == j2)
    p, q = j1.grading
    if max(p, q) > MAX_CONJUGATION_DIM:
        return _verdict(rep, UNDECIDED, f"constant-conjugation search skipped for n = {p}+{q}")
    mask = np.zeros((p + q, p + q), dtype=bool)
    mask[:p, :p] = mask[p:, p:] = True
    g = find_conjugator(_super_stack(inv1), _super_stack(inv2), mask)
    if g is None:
        return _verdict(rep, OBSTRUCTED, "invariants are not related by a constant graded gauge")
    m = j1.base_dim

    def lead(block):
        k = block.shape[0]
        return Jet2VertAut(block, linalg.zeros((m, k, k)), linalg.zeros((m, m, k, k)))

    lp, lm = lead(g[:p, :p]), lead(g[p:, p:])
    hp, hm = _super_witness(act_on_super_jet_general(lp, lm, j1), j2)
    witness = (lp.compose(hp), lm.compose(hm))
    return _equivalent(rep, witness, act_on_super_jet_general(*witness, j1) == j2,
                       "equal up to a constant graded gauge")
