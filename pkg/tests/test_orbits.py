from gmpy2 import mpq
import numpy as np
import pytest

from curvlab import linalg
from curvlab.curvature import nijenhuis, yang_mills_curvature
from curvlab.errors import ArgumentError, InvalidSectionError, UnsupportedInputError
from curvlab.generators import Generator
from curvlab.jets import (
    Jet1ACS,
    Jet1Connection,
    Jet1Super,
    Jet2Diffeo,
    Jet2VertAut,
    canonical_acs,
    prolong_acs,
    prolong_connection,
    prolong_diffeo,
    prolong_gauge,
    prolong_super,
)
from curvlab.orbits import (
    EQUIVALENT,
    OBSTRUCTED,
    UNDECIDED,
    AcsSplitting,
    acs_invariant,
    acs_projection,
    act_on_acs_jet,
    act_on_acs_jet_general,
    act_on_connection_jet,
    act_on_connection_jet_general,
    act_on_super_jet,
    act_on_super_jet_general,
    complex_frame,
    connection_witness_between,
    decide_equivalence,
    find_conjugator,
    jet_nijenhuis,
    k_map,
    reduce_connection_jet,
    reduce_super_jet,
    symmetrize,
)
from curvlab.polyfield import PolyMatrix, TensorPolyField, coordinates
from curvlab.supergeometry import SuperconnectionField, obstruction_supercurvature

from test_curvature import hand_acs


# -- prolongation ------------------------------------------------------------------


def test_prolong_connection_frozen():
    x1, x2 = coordinates(2)
    A = TensorPolyField.connection([PolyMatrix([[x1 * x2]], 2), PolyMatrix([[x1 ** 2]], 2)])
    j = prolong_connection(A, [2, 3])
    assert j.A[0, 0, 0] == 6 and j.A[1, 0, 0] == 4
    # dA[mu, alpha] = d_alpha A_mu
    assert j.dA[0, 0, 0, 0] == 3 and j.dA[0, 1, 0, 0] == 2
    assert j.dA[1, 0, 0, 0] == 4 and j.dA[1, 1, 0, 0] == 0


def test_prolong_hand_acs_frozen():
    j = prolong_acs(hand_acs(), [0, 0, 0, 0])
    assert linalg.array_equal(j.J, canonical_acs(4))
    nonzero = {(a, b, c): v for (a, b, c), v in np.ndenumerate(j.C) if v != 0}
    assert nonzero == {(0, 3, 2): -1, (2, 1, 2): -1}


def test_prolong_gauge_and_diffeo_round_trip():
    gen = Generator(2)
    aut = gen.vert_aut(2, 2, normalized=False)
    assert prolong_gauge(aut.polynomial(), [0, 0]) == aut
    d = gen.diffeo_jet(3, normalized=False)
    assert prolong_diffeo(d.polynomial(), [0, 0, 0]) == d


def test_jet_validation():
    with pytest.raises(InvalidSectionError):
        Jet1ACS(canonical_acs(2) * 2, linalg.zeros((2, 2, 2)))
    with pytest.raises(ArgumentError):
        Jet2VertAut(linalg.zeros((2, 2)), linalg.zeros((1, 2, 2)), linalg.zeros((1, 1, 2, 2)))


# -- connection case -------------------------------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_connection_group_law_and_identity(seed):
    gen = Generator(seed)
    j = gen.connection_jet(3, 2)
    h1, h2 = gen.vert_aut(3, 2), gen.vert_aut(3, 2)
    assert act_on_connection_jet(Jet2VertAut.identity(3, 2), j) == j
    assert act_on_connection_jet(h2, act_on_connection_jet(h1, j)) == \
        act_on_connection_jet(h1.compose(h2), j)
    g1, g2 = gen.vert_aut(3, 2, False), gen.vert_aut(3, 2, False)
    assert act_on_connection_jet_general(g2, act_on_connection_jet_general(g1, j)) == \
        act_on_connection_jet_general(g1.compose(g2), j)


def test_connection_normal_form():
    gen = Generator(4)
    j = gen.connection_jet(2, 3)
    red = reduce_connection_jet(j)
    assert linalg.is_zero(red.normal_form.A)
    assert linalg.array_equal(red.normal_form.dA, -red.invariant / 2)
    assert act_on_connection_jet(red.witness, j) == red.normal_form


def test_connection_invariant_is_curvature_at_point():
    gen = Generator(8)
    A = gen.connection(3, 2, 2)
    pt = [mpq(1, 2), -1, 2]
    F = yang_mills_curvature(A).evaluate(pt)
    assert linalg.array_equal(reduce_connection_jet(prolong_connection(A, pt)).invariant, F)


def test_completeness_witness():
    gen = Generator(6)
    j = gen.connection_jet(2, 2)
    moved = act_on_connection_jet(gen.vert_aut(2, 2), j)
    h = connection_witness_between(j, moved)
    assert act_on_connection_jet(h, j) == moved
    assert connection_witness_between(j, gen.connection_jet(2, 2)) is None


def test_normalized_action_rejects_general():
    gen = Generator(1)
    with pytest.raises(UnsupportedInputError):
        act_on_connection_jet(gen.vert_aut(2, 2, False), gen.connection_jet(2, 2))


def test_decide_connection_examples():
    flat = Jet1Connection.zero(2, 1)
    x1 = coordinates(2)[0]
    curved = prolong_connection(
        TensorPolyField.connection([PolyMatrix([[0]], 2), PolyMatrix([[x1]], 2)]), [0, 0])
    assert decide_equivalence(flat, flat).verdict == EQUIVALENT
    rep = decide_equivalence(flat, curved)
    assert rep.verdict == OBSTRUCTED and rep.differing == ("F",)
    gen = Generator(3)
    j = gen.connection_jet(2, 2)
    g = gen.vert_aut(2, 2, False)
    rep = decide_equivalence(j, act_on_connection_jet_general(g, j))
    assert rep.verdict == EQUIVALENT
    assert act_on_connection_jet_general(rep.witness, j) == act_on_connection_jet_general(g, j)


def test_find_conjugator():
    F1 = linalg.as_rational([[[1, 1], [0, 1]]])
    F2 = linalg.as_rational([[[1, 0], [1, 1]]])
    g = find_conjugator(F1, F2)
    assert linalg.array_equal(linalg.inverse(g) @ F1[0] @ g, F2[0])
    assert find_conjugator(F1, linalg.as_rational([[[1, 0], [0, 1]]])) is None


# -- acs case -----------------------------------------------------------------------


FROZEN_DIMS = {
    2: {"S": 6, "W": 4, "K(S)": 4, "ker_s_in_W": 0, "rank_A": 4},
    4: {"S": 40, "W": 32, "K(S)": 28, "ker_s_in_W": 4, "rank_A": 28},
    6: {"S": 126, "W": 108, "K(S)": 90, "ker_s_in_W": 18, "rank_A": 90},
}


@pytest.mark.parametrize("m", [2, 4, 6])
def test_splitting_dimensions_frozen(m):
    sp = AcsSplitting(canonical_acs(m))
    assert sp.dims == FROZEN_DIMS[m]
    assert not sp.a_invertible


@pytest.mark.parametrize("seed", range(6))
def test_projection_properties(seed):
    gen = Generator(seed)
    m = 4
    j = gen.acs_jet(m)
    sp = AcsSplitting(j.J)
    P = sp.gauge_part(j.C)
    assert linalg.array_equal(sp.gauge_part(P), P)
    assert linalg.is_zero(symmetrize(sp.projection(j.C)))
    pr = acs_projection(j, sp)
    assert linalg.array_equal(pr.ker_s_part, pr.closed_form)
    assert linalg.array_equal(pr.ker_s_part, pr.minus_half_jn / 2)
    assert linalg.array_equal(pr.ker_s_part, acs_invariant(j)["ker_s_part"])


def test_projection_kills_gauge_directions():
    gen = Generator(2)
    J = gen.constant_acs(4)
    C = k_map(gen.diffeo_jet(4).B2, J)
    assert linalg.is_zero(AcsSplitting(J).projection(C))


def test_jet_nijenhuis_matches_field():
    J = hand_acs()
    j = prolong_acs(J, [0, 0, 0, 0])
    assert linalg.array_equal(jet_nijenhuis(j), nijenhuis(J).evaluate([0, 0, 0, 0]))


def test_acs_group_law():
    gen = Generator(5)
    j = gen.acs_jet(4)
    d1, d2 = gen.diffeo_jet(4), gen.diffeo_jet(4)
    assert act_on_acs_jet(d2, act_on_acs_jet(d1, j)) == act_on_acs_jet(d1.compose(d2), j)
    e1, e2 = gen.diffeo_jet(4, False), gen.diffeo_jet(4, False)
    assert act_on_acs_jet_general(e2, act_on_acs_jet_general(e1, j)) == \
        act_on_acs_jet_general(e1.compose(e2), j)
    assert act_on_acs_jet(Jet2Diffeo.identity(4), j) == j


def test_complex_frame():
    gen = Generator(7)
    J = gen.constant_acs(6)
    L = complex_frame(J)
    assert linalg.array_equal(linalg.inverse(L) @ J @ L, canonical_acs(6))


def test_acs_verdicts():
    gen = Generator(11)
    j = gen.acs_jet(4)
    moved = act_on_acs_jet_general(gen.diffeo_jet(4, False), j)
    rep = decide_equivalence(j, moved)
    assert rep.verdict == EQUIVALENT
    assert act_on_acs_jet_general(rep.witness, j) == moved
    flat = Jet1ACS(j.J, linalg.zeros((4, 4, 4)))
    assert decide_equivalence(flat, j).verdict == OBSTRUCTED


def test_acs_nonzero_pair_in_dimension_four_is_matched():
    gen = Generator(12)
    j1 = gen.acs_jet(4, canonical_acs(4))
    j2 = gen.acs_jet(4, canonical_acs(4))
    assert not linalg.is_zero(acs_invariant(j1)["ker_s_part"])
    rep = decide_equivalence(j1, j2)
    assert rep.verdict == EQUIVALENT
    assert act_on_acs_jet_general(rep.witness, j1) == j2


def test_acs_nonzero_pair_in_dimension_six_is_undecided():
    gen = Generator(13)
    j1 = gen.acs_jet(6, canonical_acs(6))
    j2 = gen.acs_jet(6, canonical_acs(6))
    assert decide_equivalence(j1, j2).verdict == UNDECIDED


# -- super case -----------------------------------------------------------------------


def test_super_group_law():
    gen = Generator(3)
    j = gen.super_jet(2, 2, 1)
    a1, b1, a2, b2 = gen.vert_aut(2, 2), gen.vert_aut(2, 1), gen.vert_aut(2, 2), gen.vert_aut(2, 1)
    assert act_on_super_jet(a2, b2, act_on_super_jet(a1, b1, j)) == \
        act_on_super_jet(a1.compose(a2), b1.compose(b2), j)


def test_super_reduction_uses_minus_sign_in_both_blocks():
    gen = Generator(4)
    j = gen.super_jet(2, 1, 2)
    nf = reduce_super_jet(j).normal_form
    for A, dA, nA in ((j.Ap, j.dAp, nf.dAp), (j.Am, j.dAm, nf.dAm)):
        tilde = np.array([[dA[mu, r] - A[mu] @ A[r] for r in range(2)] for mu in range(2)])
        anti = (tilde - np.swapaxes(tilde, 0, 1)) / 2
        assert linalg.array_equal(nA, anti)


def test_super_commuting_square():
    gen = Generator(9)
    s = gen.superconnection(2, 2, 1, 2)
    pt = [mpq(1, 3), -2]
    inv = reduce_super_jet(prolong_super(s, pt)).invariant
    curv = obstruction_supercurvature(s).evaluate(pt)
    assert set(inv) == set(curv)
    assert all(linalg.array_equal(inv[k], curv[k]) for k in inv)


def test_super_constant_gauge_equivalence():
    gen = Generator(5)
    j = gen.super_jet(2, 1, 1)
    moved = act_on_super_jet_general(gen.vert_aut(2, 1, False), gen.vert_aut(2, 1, False), j)
    rep = decide_equivalence(j, moved)
    assert rep.verdict == EQUIVALENT
    assert act_on_super_jet_general(*rep.witness, j) == moved


def test_super_zero_vs_nonzero_chi_obstructed():
    z = Jet1Super.zero(2, 1, 1)
    s = SuperconnectionField.zero(2, 1, 1)
    chi = PolyMatrix([[1]], 2)
    s = SuperconnectionField(s.A_plus, s.A_minus, chi, s.chi_mp)
    rep = decide_equivalence(z, prolong_super(s, [0, 0]))
    assert rep.verdict == OBSTRUCTED and "chi_pm" in rep.differing


def test_kind_mismatch():
    with pytest.raises(ArgumentError):
        decide_equivalence(Jet1Connection.zero(2, 1), Jet1Super.zero(2, 1, 1))
