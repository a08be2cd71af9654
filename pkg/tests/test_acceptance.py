"""Acceptance battery.

Each criterion prints one PASS/FAIL line, with indented sub-lines for its
parts.  Run with ``pytest -s tests/test_acceptance.py`` or directly as a
script; under plain ``pytest`` the lines are repeated in the terminal summary.
"""
import subprocess
import sys
import time
from pathlib import Path

from gmpy2 import mpq
import numpy as np
import pytest

from curvlab import linalg, verify
from curvlab.curvature import nijenhuis, weyl
from curvlab.generators import Generator
from curvlab.jets import canonical_acs
from curvlab.orbits import AcsSplitting, acs_projection
from curvlab.polyfield import PolyMatrix, TensorPolyField, coordinates
from curvlab.supergeometry import obstruction_supercurvature, quillen_supercurvature

HERE = Path(__file__).parent
SUITE_BUDGET = 5.0

pytestmark = pytest.mark.acceptance

REPORT = []


class Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.parts = []

    def check(self, label, ok, detail=""):
        self.parts.append((label, bool(ok), detail))
        return ok

    def suite(self, name, count, dim=None):
        t0 = time.perf_counter()
        results = verify.run_suite(name, seed=0, count=count, dim=dim)
        elapsed = time.perf_counter() - t0
        for r in results:
            enough = r.instances >= min(count, 1 if r.name.startswith("dim W") else count)
            self.check(f"{name}: {r.name}", r.passed and enough,
                       f"{r.instances} instances, max deviation {r.max_deviation:g}"
                       f" (tol {r.tolerance:g})")
        self.check(f"{name}: runs under {SUITE_BUDGET:g} s", elapsed < SUITE_BUDGET,
                   f"{elapsed:.2f} s")
        return results

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.parts)

    def lines(self):
        head = f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.title}"
        out = [head]
        for label, ok, detail in self.parts:
            tail = f" [{detail}]" if detail else ""
            out.append(f"    {'pass' if ok else 'FAIL'} {label}{tail}")
        return out

    def finish(self):
        REPORT.append(self)
        print("\n".join(self.lines()))
        failed = [label for label, ok, _ in self.parts if not ok]
        assert not failed, f"criterion {self.number} failed: {failed}"


def rational_points(m, count, seed):
    gen = Generator(seed)
    return [gen.point(m) for _ in range(count)]


def test_criterion_1_exact_identities():
    c = Criterion(1, "d d = 0, d^nabla d^nabla = F, Bianchi, gauge covariance, pure gauge")
    c.suite("bianchi", 100)
    c.suite("gauge", 100)
    c.finish()


def test_criterion_2_riemann():
    c = Criterion(2, "Riemann: flat and polar vanish, symmetries and first Bianchi")
    c.suite("riemann", 100)
    c.finish()


def test_criterion_3_weyl():
    c = Criterion(3, "Weyl (m=4): conformally flat zero, traces, (1,3) invariance")
    x = coordinates(4)
    for name, factor in (("flat", None), ("(1+x1)^2 delta", (1 + x[0]) ** 2)):
        worst = 0
        for pt in rational_points(4, 20, 31):
            if factor is None:
                g = PolyMatrix.identity(4, 4)
            else:
                if factor.evaluate(pt) == 0:
                    pt[0] = mpq(0)
                g = PolyMatrix([[factor if i == k else 0 for k in range(4)]
                                for i in range(4)], 4)
            worst = max(worst, verify.magnitude(weyl(g, pt).covariant))
        c.check(f"W = 0 for {name} at 20 rational points", worst == 0, f"max |W| {worst:g}")
    c.suite("weyl", 100)
    c.finish()


def test_criterion_4_nijenhuis():
    c = Criterion(4, "Nijenhuis: J0, m=2, coordinate = bracket, hand instance, pullbacks")
    c.suite("nijenhuis", 100)
    x3 = coordinates(4)[2]
    P = PolyMatrix.identity(4, 4).entries.copy()
    Q = PolyMatrix.identity(4, 4).entries.copy()
    P[0, 1], Q[0, 1] = x3, -x3
    J0 = PolyMatrix.from_constant(canonical_acs(4), 4)
    J = TensorPolyField.endomorphism(PolyMatrix(P, 4) @ J0 @ PolyMatrix(Q, 4))
    N = nijenhuis(J).components
    got = [N[r, 0, 2] for r in range(4)]
    want = [x3, 1 + 0 * x3, 0 * x3, 0 * x3]
    c.check("hand instance N(d1, d3) = x3 d1 + d2", got == want,
            "computed N(d1, d3) = (" + ", ".join(str(v) for v in got) + ")")
    c.finish()


def _literal_closed_form(J, C):
    jc = np.einsum("ma,anb,br->mnr", J, C, J, optimize=True)
    return (C - np.swapaxes(C, 1, 2) - jc + np.swapaxes(jc, 1, 2)) * mpq(1, 2)


def test_criterion_5_splitting():
    c = Criterion(5, "splitting (m in {2, 4}, 50 jets): P, s(1-P), A, closed form, -1/2 J.N")
    results = {r.name: r for d in (2, 4) for r in c.suite("splitting", 50, dim=d)}
    for d in (2, 4):
        sp = AcsSplitting(canonical_acs(d))
        dims = sp.dims
        c.check(f"A = s K invertible (m={d})", sp.a_invertible,
                f"rank A = {dims['rank_A']} of {dims['S']}")
        gen = Generator(500 + d)
        literal_dev = half_dev = 0.0
        for _ in range(50):
            j = gen.acs_jet(d)
            pr = acs_projection(j, AcsSplitting(j.J))
            literal_dev = max(literal_dev, verify.deviation(pr.ker_s_part,
                                                            _literal_closed_form(j.J, j.C)))
            half_dev = max(half_dev, verify.deviation(pr.ker_s_part, pr.minus_half_jn))
        c.check(f"linear solve = stated closed form 1/2(C(u,v) - C(v,u) - JC(u,Jv) + "
                f"JC(v,Ju)) (m={d})", literal_dev == 0, f"max deviation {literal_dev:g}")
        c.check(f"(1 - P)C = -1/2 J.N (m={d})", half_dev == 0, f"max deviation {half_dev:g}")
        quarter = results[f"(1 - P)C = -1/4 J.N (m={d})"]
        c.check(f"info: derived (1 - P)C = -1/4 J.N holds (m={d})", quarter.passed,
                f"{quarter.instances} instances")
    c.finish()


def test_criterion_6_orbits():
    c = Criterion(6, "orbits: group laws, orbit invariance, completeness witness")
    for name in ("orbits-connection", "orbits-acs", "orbits-super"):
        c.suite(name, 100)
    c.finish()


def test_criterion_7_superjet():
    c = Criterion(7, "superjet commuting square and distinguishing instance")
    c.suite("superjet", 50)
    s = verify.distinguishing_instance(2, 1)
    deg0 = obstruction_supercurvature(s).evaluate([0, 0])["chi_pm"]
    c.check("distinguishing instance: Quillen = 0, obstruction deg0 != 0",
            quillen_supercurvature(s).is_zero() and not linalg.is_zero(deg0))
    c.finish()


def test_criterion_8_finite_differences():
    c = Criterion(8, "exact derivatives vs Richardson central differences, rel err <= 1e-6")
    c.suite("oracle-fd", 100)
    c.finish()


def test_criterion_9_cli():
    c = Criterion(9, "CLI round trip, determinism, exit codes, golden fixtures")
    for name in ("yangmills_a2_x1", "nijenhuis_hand", "super_distinguishing"):
        c.check(f"golden fixture {name}.json ships", (HERE / "golden" / f"{name}.json").exists())
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           str(HERE / "test_cli.py")], capture_output=True, text=True)
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr
    c.check("CLI test module", proc.returncode == 0, summary)
    c.finish()


if __name__ == "__main__":
    sys.exit(pytest.main(["-q", "-s", __file__]))
