"""Seeded property batteries behind ``curvlab verify``.

Each property draws fresh instances from a generator seeded by
``"{seed}:{property}:{index}"``, so any failing instance can be replayed on
its own. Exact properties report deviation 0 when they hold; the
finite-difference oracle reports its worst relative error.
"""
import itertools
import math
from dataclasses import dataclass, field

from gmpy2 import mpq
import numpy as np

from . import linalg
from .actions import (
    conjugate,
    gauge_transform,
    pullback_acs,
    pure_gauge,
)
from .curvature import (
    MetricField,
    apply_curvature,
    contract,
    covariant_differential,
    exterior_derivative,
    kulkarni_nomizu,
    metric_curvature,
    nijenhuis,
    nijenhuis_vector_form,
    weyl,
    yang_mills_curvature,
)
from .generators import Generator
from .jets import Jet1ACS, canonical_acs, jet_array, prolong_connection, prolong_super
from .orbits import (
    AcsSplitting,
    act_on_acs_jet,
    act_on_acs_jet_general,
    act_on_connection_jet,
    act_on_connection_jet_general,
    act_on_super_jet,
    act_on_super_jet_general,
    acs_invariant,
    acs_projection,
    connection_witness_between,
    decide_equivalence,
    in_w,
    k_map,
    reduce_connection_jet,
    reduce_super_jet,
    splitting_for,
    symmetrize,
    EQUIVALENT,
    OBSTRUCTED,
)
from .polyfield import PolyMatrix, PolyScalar, TensorPolyField, coordinates
from .supergeometry import (
    SuperconnectionField,
    conjugate_curvature,
    obstruction_supercurvature,
    quillen_supercurvature,
    super_gauge_transform,
)

FD_STEP = 1e-4
FD_TOLERANCE = 1e-6


def _norm(v):
    if isinstance(v, PolyScalar):
        return max((abs(float(c)) for c in v.terms.values()), default=0.0)
    return abs(float(v))


def deviation(a, b):
    """Largest entrywise norm of ``a - b`` (coefficient norm for polynomials)."""
    a = a.components if isinstance(a, TensorPolyField) else np.asarray(a, dtype=object)
    b = b.components if isinstance(b, TensorPolyField) else np.asarray(b, dtype=object)
    if a.shape != b.shape:
        return math.inf
    return max((_norm(x - y) for x, y in zip(a.flat, b.flat)), default=0.0)


def magnitude(a):
    a = a.components if isinstance(a, TensorPolyField) else np.asarray(a, dtype=object)
    return max((_norm(x) for x in a.flat), default=0.0)


@dataclass
class PropertyResult:
    name: str
    instances: int = 0
    max_deviation: float = 0.0
    tolerance: float = 0.0
    failure: dict = None
    info: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.failure is None and self.max_deviation <= self.tolerance

    def as_dict(self):
        return {
            "property": self.name,
            "instances": self.instances,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            **({"info": self.info} if self.info else {}),
            **({"failure": self.failure} if self.failure else {}),
        }


class _Property:
    def __init__(self, name, check, tolerance=0.0, count=None):
        self.name = name
        self.check = check
        self.tolerance = tolerance
        self.count = count


def _run(prop, seed, count):
    res = PropertyResult(prop.name, tolerance=prop.tolerance)
    n = count if prop.count is None else min(count, prop.count)
    for i in range(n):
        inst_seed = f"{seed}:{prop.name}:{i}"
        gen = Generator(inst_seed)
        dev, instance = prop.check(gen)
        res.instances += 1
        res.max_deviation = max(res.max_deviation, dev)
        if dev > prop.tolerance:
            res.failure = {"index": i, "instance_seed": inst_seed, "deviation": dev,
                           "instance": {k: _describe(v) for k, v in instance.items()}}
            break
    return res


def _describe(v):
    if isinstance(v, (list, tuple)):
        return [_describe(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_describe(x) for x in v.tolist()] if v.ndim else _describe(v.item())
    if isinstance(v, TensorPolyField):
        return {",".join(str(i + 1) for i in idx): str(p)
                for idx, p in v.nonzero_components().items()}
    if isinstance(v, PolyMatrix):
        return [[str(p) for p in row] for row in v.entries]
    if isinstance(v, MetricField):
        return _describe(v.g)
    if isinstance(v, (mpq, PolyScalar)):
        return str(v)
    return repr(v)


def _pick(gen, options):
    return gen.rng.choice(options)


# -- gauge ---------------------------------------------------------------------------


def _gauge_covariance(gen):
    m, n = _pick(gen, [2, 3]), _pick(gen, [2, 3])
    A = gen.connection(m, n, 1)
    phi = gen.unipotent(n, m, 1)
    lhs = yang_mills_curvature(gauge_transform(A, phi))
    rhs = conjugate(yang_mills_curvature(A), phi)
    return deviation(lhs, rhs), {"A": A, "phi": phi}


def _pure_gauge(gen):
    m, n = _pick(gen, [2, 3]), _pick(gen, [2, 3])
    phi = gen.unipotent(n, m, 2)
    F = yang_mills_curvature(pure_gauge(phi))
    return magnitude(F), {"phi": phi}


# -- bianchi -------------------------------------------------------------------------


def _dd_zero(gen):
    m = _pick(gen, [2, 3, 4])
    k = gen.rng.randint(0, min(2, m - 2))
    w = gen.form(m, k, 3)
    return magnitude(exterior_derivative(exterior_derivative(w))), {"omega": w}


def _dnabla_squared(gen):
    m, n = _pick(gen, [2, 3]), _pick(gen, [1, 2, 3])
    A = gen.connection(m, n, 2)
    psi = gen.section(n, m, 2)
    lhs = covariant_differential(A, covariant_differential(A, psi))
    rhs = apply_curvature(yang_mills_curvature(A), psi)
    return deviation(lhs, rhs), {"A": A, "psi": psi}


def _bianchi(gen):
    m, n = _pick(gen, [3, 4]), _pick(gen, [1, 2])
    A = gen.connection(m, n, 1)
    F = yang_mills_curvature(A)
    return magnitude(covariant_differential(A, F)), {"A": A}


# -- riemann / weyl ---------------------------------------------------------------------


def _riemann_flat(gen):
    m = _pick(gen, [2, 3, 4])
    x = coordinates(m)
    if gen.rng.random() < 0.5:
        g = PolyMatrix.identity(m, m)
        name = "flat"
    else:
        entries = PolyMatrix.identity(m, m).entries.copy()
        entries[1, 1] = (1 + x[0]) ** 2
        g = PolyMatrix(entries, m)
        name = "polar"
    point = gen.point(m)
    if name == "polar" and point[0] == -1:
        point[0] = mpq(0)
    pack = metric_curvature(g, point)
    return magnitude(pack.riemann), {"metric": name, "point": point}


def _generic_metric_point(gen, m):
    while True:
        g = gen.metric_general(m, 2)
        point = gen.point(m)
        if linalg.det(np.array([[p.evaluate(point) for p in row] for row in g.entries],
                               dtype=object)) != 0:
            return g, point


def _riemann_symmetries(gen):
    m = _pick(gen, [2, 3, 4])
    g, point = _generic_metric_point(gen, m)
    R = metric_curvature(g, point).riemann_lowered
    dev = max(
        deviation(R, -np.transpose(R, (1, 0, 2, 3))),
        deviation(R, -np.transpose(R, (0, 1, 3, 2))),
        deviation(R, np.transpose(R, (2, 3, 0, 1))),
        magnitude(R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))),
    )
    return dev, {"g": g, "point": point}


def _riemann_polynomial(gen):
    m = _pick(gen, [2, 3])
    g = gen.metric_polynomial(m, 1)
    pack = metric_curvature(g)
    point = gen.point(m)
    at = metric_curvature(g, point)
    R = pack.riemann_lowered
    dev = max(
        deviation(R, -np.transpose(R, (1, 0, 2, 3))),
        deviation(R, np.transpose(R, (2, 3, 0, 1))),
        magnitude(R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))),
        deviation(pack.at(point).riemann, at.riemann),
    )
    return dev, {"g": g, "point": point}


def _weyl_traces(gen):
    g, point = _generic_metric_point(gen, 4)
    w = weyl(g, point)
    ginv = metric_curvature(g, point).metric_inverse
    W = w.covariant
    traces = [np.einsum("ab,abmn->mn", ginv, W), np.einsum("am,samn->sn", ginv, W),
              np.einsum("an,samn->sm", ginv, W), np.einsum("sm,rsmn->rn", ginv, W),
              np.einsum("sn,rsmn->rm", ginv, W), np.einsum("mn,rsmn->rs", ginv, W),
              np.einsum("mmsn->sn", w.mixed), np.einsum("rsrn->sn", w.mixed),
              np.einsum("rsnr->sn", w.mixed)]
    return max(magnitude(t) for t in traces), {"g": g, "point": point}


def _weyl_conformal(gen):
    g, point = _generic_metric_point(gen, 4)
    x = coordinates(4)
    f = (1 + x[0] * mpq(1, 2)) ** 2
    if f.evaluate(point) == 0:
        point[0] = mpq(0)
    scaled = PolyMatrix._wrap(np.array([[p * f for p in row] for row in g.entries],
                                       dtype=object), 4)
    w1 = weyl(g, point).mixed
    w2 = weyl(scaled, point).mixed
    return deviation(w1, w2), {"g": g, "point": point}


def _weyl_conformally_flat(gen):
    x = coordinates(4)
    factor = _pick(gen, [(1 + x[0]) ** 2, (1 + x[0] * mpq(1, 2)) ** 2,
                         1 + x[1] ** 2 + x[2] ** 2])
    g = PolyMatrix([[factor if i == k else 0 for k in range(4)] for i in range(4)], 4)
    point = gen.point(4)
    while factor.evaluate(point) == 0:
        point = gen.point(4)
    return magnitude(weyl(g, point).covariant), {"factor": factor, "point": point}


# -- nijenhuis --------------------------------------------------------------------------


def _random_vector(gen, m, degree=1):
    return [gen.poly(m, degree) for _ in range(m)]


def _nijenhuis_forms_agree(gen):
    m = _pick(gen, [2, 4])
    J = gen.acs_field(m, 1, factors=2)
    N = nijenhuis(J)
    X, Y = _random_vector(gen, m), _random_vector(gen, m)
    lhs = nijenhuis_vector_form(J, X, Y)
    rhs = contract(N, X, Y)
    return deviation(np.array(lhs, dtype=object), np.array(rhs, dtype=object)), {
        "J": J, "X": X, "Y": Y}


def _nijenhuis_tensorial(gen):
    m = 4
    J = gen.acs_field(m, 1, factors=2)
    X, Y = _random_vector(gen, m), _random_vector(gen, m)
    f = gen.poly(m, 1)
    lhs = nijenhuis_vector_form(J, [f * c for c in X], Y)
    rhs = [f * c for c in nijenhuis_vector_form(J, X, Y)]
    return deviation(np.array(lhs, dtype=object), np.array(rhs, dtype=object)), {
        "J": J, "X": X, "Y": Y, "f": f}


def _nijenhuis_dim2(gen):
    J = gen.acs_field(2, 2)
    return magnitude(nijenhuis(J)), {"J": J}


def _nijenhuis_integrable(gen):
    m = 4
    phi = gen.triangular_diffeo(m, 2)
    J0 = TensorPolyField.endomorphism(PolyMatrix.from_constant(canonical_acs(m), m))
    J = pullback_acs(J0, phi)
    return magnitude(nijenhuis(J)), {"phi": phi}


# -- splitting -------------------------------------------------------------------------


def _splitting(J):
    return splitting_for(J)


def _splitting_props(dim):
    # a fixed pool of conjugates of J0 keeps the per-J linear algebra shared
    pool = [canonical_acs(dim)] + [Generator(1000 + k).constant_acs(dim) for k in range(8)]

    def setup(gen):
        return gen.acs_jet(dim, gen.rng.choice(pool))

    def idempotent(gen):
        j = setup(gen)
        sp = _splitting(j.J)
        p1 = sp.gauge_part(j.C)
        return deviation(sp.gauge_part(p1), p1), {"J": j.J, "C": j.C}

    def s_kills(gen):
        j = setup(gen)
        sp = _splitting(j.J)
        return magnitude(symmetrize(sp.projection(j.C))), {"J": j.J, "C": j.C}

    def closed_form(gen):
        j = setup(gen)
        pr = acs_projection(j, _splitting(j.J))
        return deviation(pr.ker_s_part, pr.closed_form), {"J": j.J, "C": j.C}

    def quarter_jn(gen):
        j = setup(gen)
        pr = acs_projection(j, _splitting(j.J))
        return deviation(pr.ker_s_part, pr.minus_half_jn * mpq(1, 2)), {"J": j.J, "C": j.C}

    def gauge_dies(gen):
        j = setup(gen)
        B = gen.diffeo_jet(dim).B2
        C = k_map(B, j.J)
        dev = 0.0 if in_w(C, j.J) else math.inf
        return max(dev, magnitude(_splitting(j.J).projection(C))), {"J": j.J, "B": B}

    def transported(gen):
        j = setup(gen)
        direct = acs_projection(j, _splitting(j.J)).ker_s_part
        return deviation(direct, acs_invariant(j)["ker_s_part"]), {"J": j.J, "C": j.C}

    return [
        _Property(f"P^2 = P (m={dim})", idempotent),
        _Property(f"s(1 - P) = 0 (m={dim})", s_kills),
        _Property(f"linear solve = closed form (m={dim})", closed_form),
        _Property(f"(1 - P)C = -1/4 J.N (m={dim})", quarter_jn),
        _Property(f"P(K(B)) = K(B), K(B) in W (m={dim})", gauge_dies),
        _Property(f"projection commutes with constant frame changes (m={dim})", transported),
        _dims_property(dim),
    ]


def _dims_property(dim):
    def dims(gen):
        d = _splitting(canonical_acs(dim)).dims
        return (0.0 if d["W"] == d["K(S)"] + d["ker_s_in_W"] else 1.0), {"dims": d}

    return _Property(f"dim W = dim K(S) + dim(ker s in W) (m={dim})", dims, count=1)


# -- orbits -----------------------------------------------------------------------------


def _dims(gen):
    return _pick(gen, [1, 2, 3, 4]), _pick(gen, [1, 2, 3])


def _connection_group_law(gen):
    m, n = _dims(gen)
    j = gen.connection_jet(m, n)
    h1, h2 = gen.vert_aut(m, n), gen.vert_aut(m, n)
    lhs = act_on_connection_jet(h2, act_on_connection_jet(h1, j))
    rhs = act_on_connection_jet(h1.compose(h2), j)
    ident = act_on_connection_jet(type(h1).identity(m, n), j)
    dev = 0.0 if (lhs == rhs and ident == j) else 1.0
    return dev, {"j": j.A, "h1": h1.B, "h2": h2.B}


def _connection_general_group_law(gen):
    m, n = _pick(gen, [1, 2, 3]), _pick(gen, [1, 2])
    j = gen.connection_jet(m, n)
    h1, h2 = gen.vert_aut(m, n, False), gen.vert_aut(m, n, False)
    lhs = act_on_connection_jet_general(h2, act_on_connection_jet_general(h1, j))
    rhs = act_on_connection_jet_general(h1.compose(h2), j)
    return (0.0 if lhs == rhs else 1.0), {"j": j.A}


def _connection_orbit_invariance(gen):
    m, n = _dims(gen)
    j = gen.connection_jet(m, n)
    h = gen.vert_aut(m, n)
    a = reduce_connection_jet(j).invariant
    b = reduce_connection_jet(act_on_connection_jet(h, j)).invariant
    return deviation(a, b), {"j": j.A, "h": h.B}


def _connection_completeness(gen):
    m, n = _dims(gen)
    j1 = gen.connection_jet(m, n)
    j2 = act_on_connection_jet(gen.vert_aut(m, n), j1)
    h = connection_witness_between(j1, j2)
    ok = h is not None and h.is_normalized() and act_on_connection_jet(h, j1) == j2
    return (0.0 if ok else 1.0), {"j1": j1.A}


def _connection_conjugation(gen):
    m, n = _pick(gen, [2, 3]), _pick(gen, [1, 2, 3])
    j1 = gen.connection_jet(m, n)
    j2 = act_on_connection_jet_general(gen.vert_aut(m, n, False), j1)
    rep = decide_equivalence(j1, j2)
    ok = rep.verdict == EQUIVALENT and act_on_connection_jet_general(rep.witness, j1) == j2
    return (0.0 if ok else 1.0), {"j1": j1.A}


def _acs_group_law(gen):
    m = _pick(gen, [2, 4])
    j = gen.acs_jet(m)
    d1, d2 = gen.diffeo_jet(m), gen.diffeo_jet(m)
    lhs = act_on_acs_jet(d2, act_on_acs_jet(d1, j))
    rhs = act_on_acs_jet(d1.compose(d2), j)
    ident = act_on_acs_jet(type(d1).identity(m), j)
    return (0.0 if lhs == rhs and ident == j else 1.0), {"J": j.J, "C": j.C}


def _acs_general_group_law(gen):
    m = _pick(gen, [2, 4])
    j = gen.acs_jet(m)
    d1, d2 = gen.diffeo_jet(m, False), gen.diffeo_jet(m, False)
    lhs = act_on_acs_jet_general(d2, act_on_acs_jet_general(d1, j))
    rhs = act_on_acs_jet_general(d1.compose(d2), j)
    return (0.0 if lhs == rhs else 1.0), {"J": j.J, "C": j.C}


def _acs_orbit_invariance(gen):
    m = _pick(gen, [2, 4])
    j = gen.acs_jet(m)
    d = gen.diffeo_jet(m)
    moved = act_on_acs_jet(d, j)
    rep = decide_equivalence(j, moved)
    return (0.0 if rep.verdict == EQUIVALENT and in_w(moved.C, moved.J) else 1.0), {
        "J": j.J, "C": j.C}


def _acs_frame_equivalence(gen):
    m = _pick(gen, [2, 4])
    j = gen.acs_jet(m)
    moved = act_on_acs_jet_general(gen.diffeo_jet(m, False), j)
    rep = decide_equivalence(j, moved)
    ok = rep.verdict == EQUIVALENT and act_on_acs_jet_general(rep.witness, j) == moved
    if m == 4:
        # N = 0 against N != 0 at the point: no frame change can match them
        flat = Jet1ACS(j.J, linalg.zeros((m, m, m)))
        nonzero = not linalg.is_zero(acs_invariant(j)["ker_s_part"])
        ok = ok and (decide_equivalence(flat, j).verdict == OBSTRUCTED) == nonzero
    return (0.0 if ok else 1.0), {"J": j.J, "C": j.C}


def _super_group_law(gen):
    m, p, q = _pick(gen, [1, 2, 3]), _pick(gen, [1, 2]), _pick(gen, [1, 2])
    j = gen.super_jet(m, p, q)
    a1, b1 = gen.vert_aut(m, p), gen.vert_aut(m, q)
    a2, b2 = gen.vert_aut(m, p), gen.vert_aut(m, q)
    lhs = act_on_super_jet(a2, b2, act_on_super_jet(a1, b1, j))
    rhs = act_on_super_jet(a1.compose(a2), b1.compose(b2), j)
    return (0.0 if lhs == rhs else 1.0), {"chi_pm": j.chi_pm}


def _super_orbit_invariance(gen):
    m, p, q = _pick(gen, [1, 2, 3]), _pick(gen, [1, 2]), _pick(gen, [1, 2])
    j = gen.super_jet(m, p, q)
    moved = act_on_super_jet(gen.vert_aut(m, p), gen.vert_aut(m, q), j)
    a, b = reduce_super_jet(j).invariant, reduce_super_jet(moved).invariant
    return max(deviation(a[k], b[k]) for k in a), {"chi_pm": j.chi_pm}


# -- superjet ---------------------------------------------------------------------------


def _super_constant_gauge(gen):
    m, p, q = _pick(gen, [1, 2, 3]), _pick(gen, [1, 2]), _pick(gen, [1, 2])
    j = gen.super_jet(m, p, q)
    moved = act_on_super_jet_general(gen.vert_aut(m, p, False), gen.vert_aut(m, q, False), j)
    rep = decide_equivalence(j, moved)
    ok = rep.verdict == EQUIVALENT and act_on_super_jet_general(*rep.witness, j) == moved
    return (0.0 if ok else 1.0), {"chi_pm": j.chi_pm}


def _super_square(gen):
    m, p, q = _pick(gen, [2, 3]), _pick(gen, [1, 2]), _pick(gen, [1, 2])
    s = gen.superconnection(m, p, q, 2)
    point = gen.point(m)
    red = reduce_super_jet(prolong_super(s, point)).invariant
    direct = obstruction_supercurvature(s).evaluate(point)
    return max(deviation(red[k], direct[k]) for k in red), {"s": _describe_super(s),
                                                           "point": point}


def _super_covariance(gen):
    m, p, q = _pick(gen, [2, 3]), _pick(gen, [1, 2]), _pick(gen, [1, 2])
    s = gen.superconnection(m, p, q, 1)
    fp, fm = gen.unipotent(p, m, 1), gen.unipotent(q, m, 1)
    lhs = obstruction_supercurvature(super_gauge_transform(s, fp, fm))
    rhs = conjugate_curvature(obstruction_supercurvature(s), fp, fm)
    dev = max(deviation(lhs.deg0, rhs.deg0), deviation(lhs.deg1, rhs.deg1),
              deviation(lhs.deg2, rhs.deg2))
    return dev, {"s": _describe_super(s), "phi_plus": fp, "phi_minus": fm}


def _super_shared(gen):
    m, p, q = _pick(gen, [2, 3]), _pick(gen, [1, 2]), _pick(gen, [1, 2])
    s = gen.superconnection(m, p, q, 2)
    a, b = quillen_supercurvature(s), obstruction_supercurvature(s)
    return max(deviation(a.deg1, b.deg1), deviation(a.deg2, b.deg2)), {"s": _describe_super(s)}


def distinguishing_instance(m=2, c=1):
    """``chi_pm = c``, ``chi_mp = 0``, ``A = 0`` on a (1, 1) grading."""
    z = SuperconnectionField.zero(m, 1, 1)
    return SuperconnectionField(z.A_plus, z.A_minus, PolyMatrix([[c]], m), z.chi_mp)


def _super_distinguishing(gen):
    c = gen.integer(1, 5) * _pick(gen, [1, -1])
    s = distinguishing_instance(_pick(gen, [2, 3]), c)
    ok = quillen_supercurvature(s).is_zero() and not obstruction_supercurvature(s).deg0.is_zero()
    return (0.0 if ok else 1.0), {"c": c}


def _describe_super(s):
    return {"A_plus": _describe(s.A_plus), "A_minus": _describe(s.A_minus),
            "chi_pm": _describe(s.chi_pm), "chi_mp": _describe(s.chi_mp)}


# -- finite differences ----------------------------------------------------------------


def central_difference(f, x, direction, h=FD_STEP):
    """Central difference with one Richardson level (error O(h^4))."""
    def d(step):
        xp = list(x)
        xm = list(x)
        xp[direction] += step
        xm[direction] -= step
        return (f(xp) - f(xm)) / (2 * step)
    return (4 * d(h / 2) - d(h)) / 3


def relative_error(approx, exact):
    return abs(approx - exact) / max(1.0, abs(exact))


def _fd_poly(gen):
    m = _pick(gen, [1, 2, 3, 4])
    p = gen.poly(m, 3)
    x = [float(c) for c in gen.point(m)]
    worst = 0.0
    for mu in range(m):
        exact = p.partial(mu).evaluate_float(x)
        worst = max(worst, relative_error(central_difference(p.evaluate_float, x, mu), exact))
    return worst, {"p": p, "point": x}


def _fd_jet(gen):
    m, n = _pick(gen, [2, 3]), _pick(gen, [1, 2])
    A = gen.connection(m, n, 3)
    point = gen.point(m)
    jet = prolong_connection(A, point)
    x = [float(c) for c in point]
    worst = 0.0
    for mu, a, b in itertools.product(range(m), range(n), range(n)):
        p = A.components[mu, a, b]
        worst = max(worst, relative_error(p.evaluate_float(x), float(jet.A[mu, a, b])))
        for alpha in range(m):
            approx = central_difference(p.evaluate_float, x, alpha)
            worst = max(worst, relative_error(approx, float(jet.dA[mu, alpha, a, b])))
    return worst, {"A": A, "point": point}


def _fd_acs_jet(gen):
    J = gen.acs_field(4, 1)
    point = gen.point(4)
    value, grad = jet_array(J.components, point)
    x = [float(c) for c in point]
    worst = 0.0
    for (mu, nu), p in np.ndenumerate(J.components):
        for rho in range(4):
            approx = central_difference(p.evaluate_float, x, rho)
            worst = max(worst, relative_error(approx, float(grad[mu, nu, rho])))
    return worst, {"J": J, "point": point}


# -- registry -----------------------------------------------------------------------------


def suites(dim=None):
    split_dims = [dim] if dim else [2, 4]
    return {
        "gauge": [
            _Property("F(phi*A) = phi^-1 F phi", _gauge_covariance),
            _Property("F(phi^-1 d phi) = 0", _pure_gauge),
        ],
        "bianchi": [
            _Property("d d = 0", _dd_zero),
            _Property("d^nabla d^nabla psi = F psi", _dnabla_squared),
            _Property("d^nabla F = 0", _bianchi),
        ],
        "riemann": [
            _Property("R = 0 for flat and polar metrics", _riemann_flat),
            _Property("Riemann symmetries and first Bianchi (pointwise)", _riemann_symmetries),
            _Property("Riemann symmetries (polynomial pipeline)", _riemann_polynomial),
        ],
        "weyl": [
            _Property("W = 0 for conformally flat metrics", _weyl_conformally_flat),
            _Property("all traces of W vanish", _weyl_traces),
            _Property("W^r_smn conformally invariant", _weyl_conformal),
        ],
        "nijenhuis": [
            _Property("coordinate N = bracket N", _nijenhuis_forms_agree),
            _Property("N(fX, Y) = f N(X, Y)", _nijenhuis_tensorial),
            _Property("N = 0 in dimension 2", _nijenhuis_dim2),
            _Property("N(phi* J0) = 0", _nijenhuis_integrable),
        ],
        "splitting": [p for d in split_dims for p in _splitting_props(d)]
        + ([_dims_property(6)] if dim is None else []),
        "orbits-connection": [
            _Property("connection group law", _connection_group_law),
            _Property("connection group law, general B0", _connection_general_group_law),
            _Property("connection orbit invariance", _connection_orbit_invariance),
            _Property("connection completeness witness", _connection_completeness),
            _Property("connection equivalence up to constant conjugation",
                      _connection_conjugation),
        ],
        "orbits-acs": [
            _Property("acs group law", _acs_group_law),
            _Property("acs group law, general linear part", _acs_general_group_law),
            _Property("acs orbit invariance", _acs_orbit_invariance),
            _Property("acs equivalence under frame changes", _acs_frame_equivalence),
        ],
        "orbits-super": [
            _Property("super group law", _super_group_law),
            _Property("super orbit invariance", _super_orbit_invariance),
            _Property("super equivalence under constant graded gauge", _super_constant_gauge),
        ],
        "superjet": [
            _Property("reduce(prolong(s)) = obstruction curvature", _super_square),
            _Property("obstruction curvature gauge covariant", _super_covariance),
            _Property("Quillen and obstruction share deg1, deg2", _super_shared),
            _Property("distinguishing instance", _super_distinguishing),
        ],
        "oracle-fd": [
            _Property("exact partials vs central differences", _fd_poly, FD_TOLERANCE),
            _Property("connection jets vs central differences", _fd_jet, FD_TOLERANCE),
            _Property("acs jets vs central differences", _fd_acs_jet, FD_TOLERANCE),
        ],
    }


SUITE_NAMES = tuple(suites())


def run_suite(name, seed=0, count=100, dim=None):
    """Run one battery; returns a list of PropertyResult."""
    table = suites(dim)
    if name not in table:
        raise KeyError(name)
    results = [_run(prop, seed, count) for prop in table[name]]
    if name == "splitting":
        for d in ([dim] if dim else [2, 4, 6]):
            sp = _splitting(canonical_acs(d))
            info = dict(sp.dims)
            info["A_invertible"] = sp.a_invertible
            if d == 2:
                info["N_identically_zero"] = True
            for r in results:
                if r.name.endswith(f"(m={d})") and r.name.startswith("dim W"):
                    r.info = info
    return results
