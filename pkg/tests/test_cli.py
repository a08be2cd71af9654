import json
import shutil
from pathlib import Path

from gmpy2 import mpq
import numpy as np
import pytest

from curvlab import cli, formats
from curvlab.curvature import MetricField
from curvlab.generators import Generator
from curvlab.polyfield import PolyScalar

GOLDEN = Path(__file__).parent / "golden"


def write(path, doc):
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def golden_dir(tmp_path, monkeypatch):
    for f in GOLDEN.iterdir():
        shutil.copy(f, tmp_path / f.name)
    monkeypatch.chdir(tmp_path)
    return tmp_path


# -- golden files ---------------------------------------------------------------

GOLDEN_RUNS = [
    (["curvature", "--kind", "yangmills", "yangmills_a2_x1.json"],
     "yangmills_a2_x1.report.json"),
    (["curvature", "--kind", "nijenhuis", "nijenhuis_hand.json"],
     "nijenhuis_hand.report.json"),
    (["curvature", "--kind", "nijenhuis", "--point", "0,0,0,0", "nijenhuis_hand.json"],
     "nijenhuis_hand_at0.report.json"),
    (["curvature", "--kind", "superq", "super_distinguishing.json"],
     "super_distinguishing_quillen.report.json"),
    (["curvature", "--kind", "superobstruction", "super_distinguishing.json"],
     "super_distinguishing_obstruction.report.json"),
    (["equivalence", "--point", "0,0", "flat_connection.json", "yangmills_a2_x1.json"],
     "flat_vs_yangmills.report.json"),
]


@pytest.mark.parametrize("argv,expected", GOLDEN_RUNS, ids=[g[1] for g in GOLDEN_RUNS])
def test_golden(golden_dir, capsys, argv, expected):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (golden_dir / expected).read_text(encoding="utf-8")


def test_golden_yangmills_value(golden_dir, capsys):
    _, out, _ = run(["curvature", "--kind", "yangmills", "yangmills_a2_x1.json"], capsys)
    F = formats.parse_block(json.loads(out)["blocks"]["F"], 2)
    assert F[0, 1, 0, 0] == 1 and F[1, 0, 0, 0] == -1


def test_golden_super_distinguishing_values(golden_dir, capsys):
    _, q, _ = run(["curvature", "--kind", "superq", "super_distinguishing.json"], capsys)
    _, o, _ = run(["curvature", "--kind", "superobstruction", "super_distinguishing.json"], capsys)
    assert all(b["sup_norm"] == 0 for b in json.loads(q)["blocks"].values())
    assert json.loads(o)["blocks"]["chi_pm"]["components"] == {"1,1": "1"}


# -- exit codes -----------------------------------------------------------------


def test_exit_invalid_section(tmp_path, capsys):
    f = write(tmp_path / "j.json", {"format_version": 1, "case": "acs", "base_dim": 2,
                                    "components": {"1,2": "-1", "2,1": "2"}})
    code, _, err = run(["curvature", "--kind", "nijenhuis", f], capsys)
    assert code == 3
    assert "component" in err


def test_exit_degenerate_metric(tmp_path, capsys):
    f = write(tmp_path / "g.json", {"format_version": 1, "case": "metric", "base_dim": 2,
                                    "components": {"1,1": "1", "2,2": "x1"}})
    code, _, _ = run(["curvature", "--kind", "riemann", "--point", "0,1", f], capsys)
    assert code == 4
    code, out, _ = run(["curvature", "--kind", "riemann", "--point", "1,1", f], capsys)
    assert code == 0
    assert json.loads(out)["blocks"]["scalar"]["components"] == {"scalar": "1/2"}


@pytest.mark.parametrize("text", ["1 +* x1", "x3", "1.5*x1", "x1^-1", "(x1"])
def test_exit_parse_error(tmp_path, capsys, text):
    f = write(tmp_path / "g.json", {"format_version": 1, "case": "metric", "base_dim": 2,
                                    "components": {"1,1": text, "2,2": "1"}})
    code, _, err = run(["curvature", "--kind", "riemann", f], capsys)
    assert code == 2
    assert "error" in err


def test_exit_bad_json(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json", encoding="utf-8")
    code, _, err = run(["curvature", "--kind", "dform", str(p)], capsys)
    assert code == 2
    assert "line 1" in err


def test_exit_case_mismatch(golden_dir, capsys):
    code, _, _ = run(["equivalence", "--point", "0,0,0,0", "nijenhuis_hand.json",
                      "yangmills_a2_x1.json"], capsys)
    assert code == 2
    code, _, _ = run(["curvature", "--kind", "riemann", "yangmills_a2_x1.json"], capsys)
    assert code == 2


def test_exit_missing_inverse(tmp_path, capsys):
    A = write(tmp_path / "a.json", {"format_version": 1, "case": "connection", "base_dim": 2,
                                    "fiber_dim": 2, "components": {}})
    g = {"format_version": 1, "case": "gauge", "base_dim": 2, "fiber_dim": 2,
         "components": {"1,1": "2", "2,2": "1"}}
    code, _, _ = run(["transform", "--by", write(tmp_path / "g.json", g), A], capsys)
    assert code == 3
    g["inverse"] = {"1,1": "1/3", "2,2": "1"}
    code, _, _ = run(["transform", "--by", write(tmp_path / "g.json", g), A], capsys)
    assert code == 3
    g["inverse"] = {"1,1": "1/2", "2,2": "1"}
    code, _, _ = run(["transform", "--by", write(tmp_path / "g.json", g), A], capsys)
    assert code == 0


def test_exit_verify_failure(monkeypatch, capsys):
    from curvlab import verify

    def broken(gen):
        return 1.0, {"x": gen.rational()}

    monkeypatch.setattr(verify, "suites",
                        lambda dim=None: {"gauge": [verify._Property("broken", broken)]})
    code, out, err = run(["verify", "--suite", "gauge", "--count", "3"], capsys)
    assert code == 1
    assert "replay seed 0:broken:0" in err
    assert json.loads(out)["details"]["properties"][0]["failure"]["instance"]["x"]


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--suite", "nope"])
    assert exc.value.code == 2


# -- transform ------------------------------------------------------------------


def test_identity_transform_is_byte_identical(golden_dir, tmp_path, capsys):
    spec = formats.read_spec("yangmills_a2_x1.json")
    canon = tmp_path / "canon.json"
    canon.write_text(spec.dumps(), encoding="utf-8")
    g = write(tmp_path / "id.json", {"format_version": 1, "case": "gauge", "base_dim": 2,
                                     "fiber_dim": 1, "components": {"1,1": "1"}})
    code, out, _ = run(["transform", "--by", g, str(canon)], capsys)
    assert code == 0
    assert out == canon.read_text(encoding="utf-8")


def test_pure_gauge_then_curvature_is_flat(tmp_path, capsys):
    A = write(tmp_path / "a.json", {"format_version": 1, "case": "connection", "base_dim": 2,
                                    "fiber_dim": 2, "components": {}})
    g = write(tmp_path / "g.json", {"format_version": 1, "case": "gauge", "base_dim": 2,
                                    "fiber_dim": 2,
                                    "components": {"1,1": "1", "2,2": "1",
                                                   "1,2": "x1^2*x2 - 1/2"}})
    out_path = str(tmp_path / "pg.json")
    assert run(["transform", "--by", g, A, "-o", out_path], capsys)[0] == 0
    assert formats.read_spec(out_path).data["components"][0, 0, 1] == \
        formats.load_spec(json.dumps({"format_version": 1, "case": "connection", "base_dim": 2,
                                      "fiber_dim": 2, "components": {"1,1,2": "2*x1*x2"}})
                          ).data["components"][0, 0, 1]
    code, out, _ = run(["curvature", "--kind", "yangmills", out_path], capsys)
    assert code == 0
    assert json.loads(out)["blocks"]["F"]["components"] == {}


def test_transformed_pair_is_equivalent(golden_dir, tmp_path, capsys):
    g = write(tmp_path / "g.json", {"format_version": 1, "case": "gauge", "base_dim": 2,
                                    "fiber_dim": 1, "components": {"1,1": "1"}})
    moved = str(tmp_path / "moved.json")
    run(["transform", "--by", g, "yangmills_a2_x1.json", "-o", moved], capsys)
    code, out, _ = run(["equivalence", "--point", "1/2,-1", "yangmills_a2_x1.json", moved],
                       capsys)
    assert code == 0
    assert json.loads(out)["verdict"] == "equivalent-at-order-1"


def test_super_transform_and_equivalence(golden_dir, tmp_path, capsys):
    gg = write(tmp_path / "gg.json", {
        "format_version": 1, "case": "gauge", "base_dim": 2, "grading": [1, 1],
        "components": {"plus": {"1,1": "2"}, "minus": {"1,1": "3"}},
        "inverse": {"plus": {"1,1": "1/2"}, "minus": {"1,1": "1/3"}}})
    moved = str(tmp_path / "moved.json")
    assert run(["transform", "--by", gg, "super_distinguishing.json", "-o", moved],
               capsys)[0] == 0
    # chi_pm -> phi_+^-1 chi_pm phi_- = 3/2
    assert formats.read_spec(moved).data["chi_pm"][0, 0] == PolyScalar.constant(mpq(3, 2), 2)
    code, out, _ = run(["equivalence", "--point", "0,0", "super_distinguishing.json", moved],
                       capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "equivalent-at-order-1"
    assert "witness.plus.B0" in rep["blocks"]


def test_equivalence_with_itself(golden_dir, capsys):
    code, out, _ = run(["equivalence", "--point", "0,0,0,0", "nijenhuis_hand.json",
                        "nijenhuis_hand.json"], capsys)
    assert code == 0
    assert json.loads(out)["verdict"] == "equivalent-at-order-1"


# -- round trip and determinism ---------------------------------------------------


def _random_values(seed):
    gen = Generator(seed)
    m = 3
    return [
        ("form", gen.form(m, 2, 2)),
        ("metric", gen.metric_general(m, 2)),
        ("connection", gen.connection(m, 2, 2)),
        ("acs", gen.acs_field(4, 1, factors=2)),
        ("superconnection", gen.superconnection(2, 1, 2, 2)),
        ("gauge", gen.unipotent(2, m, 2)),
        ("gauge", (gen.unipotent(2, m, 1), gen.unipotent(1, m, 1))),
        ("diffeo", gen.triangular_diffeo(m, 2)),
    ]


@pytest.mark.parametrize("seed", range(5))
def test_round_trip(seed):
    for case, value in _random_values(seed):
        spec = formats.FieldSpec.from_value(case, value)
        back = formats.load_spec(spec.dumps())
        assert back == spec
        got = back.value()
        assert got == (MetricField(value) if case == "metric" else value)


def test_report_round_trip():
    gen = Generator(3)
    arr = gen.rat_array((2, 3))
    rep = formats.make_report("x", [], {"a": arr}, point=[0, "1/2"])
    back = formats.load_report(formats.dump_report(rep))
    assert back == rep
    assert np.array_equal(formats.parse_block(back["blocks"]["a"]), arr)


def test_verify_deterministic(capsys):
    argv = ["verify", "--suite", "bianchi", "--count", "5", "--seed", "11"]
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first[0] == 0
    assert first[1] == second[1]
    assert json.loads(first[1])["timing_seconds"] is None


def test_timing_opt_in(golden_dir, capsys):
    _, out, _ = run(["curvature", "--kind", "yangmills", "--timing", "yangmills_a2_x1.json"],
                    capsys)
    assert isinstance(json.loads(out)["timing_seconds"], float)


def test_verify_splitting_reports_dim2_degeneracy(capsys):
    code, out, _ = run(["verify", "--suite", "splitting", "--dim", "2", "--count", "5"], capsys)
    assert code == 0
    props = json.loads(out)["details"]["properties"]
    info = [p["info"] for p in props if "info" in p][0]
    assert info["N_identically_zero"] is True
