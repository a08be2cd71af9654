import pytest

from curvlab import verify


@pytest.mark.parametrize("name", verify.SUITE_NAMES)
def test_suite_passes_small(name):
    results = verify.run_suite(name, seed=3, count=5)
    assert results
    for r in results:
        assert r.passed, r.as_dict()
        assert r.instances >= 1


def test_deterministic():
    a = [r.as_dict() for r in verify.run_suite("gauge", seed=9, count=4)]
    b = [r.as_dict() for r in verify.run_suite("gauge", seed=9, count=4)]
    assert a == b


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run_suite("nope")


def test_dimension_restricted_splitting():
    results = verify.run_suite("splitting", seed=0, count=3, dim=2)
    assert all(r.name.endswith("(m=2)") for r in results)
    info = [r.info for r in results if r.info][0]
    assert info["A_invertible"] is False and info["ker_s_in_W"] == 0


def test_failure_carries_replay_seed():
    prop = verify._Property("always off", lambda gen: (1.0, {"x": 1}))
    res = verify._run(prop, 4, 10)
    assert not res.passed and res.instances == 1
    assert res.failure["instance_seed"] == "4:always off:0"


def test_richardson_difference_is_fourth_order():
    f = lambda x: x[0] ** 5
    approx = verify.central_difference(f, [1.3], 0)
    assert verify.relative_error(approx, 5 * 1.3 ** 4) < 1e-9
