import json

import numpy as np
import pytest

from shellvisc import suites as st


def test_runconfig_defaults_and_echo():
    cfg = st.RunConfig()
    assert cfg.a_values == [0.5, 1.0, 2.0, 5.0]
    assert cfg.n_samples("geometry") == 1000 and cfg.n_samples("limits") == 100
    echo = cfg.echo()
    assert echo["tolerances"] == st.DEFAULT_TOLERANCES
    json.dumps(echo)


@pytest.mark.parametrize(
    "kw",
    [
        {"a_values": []},
        {"a_values": [-1.0]},
        {"samples": 0},
        {"seed": -1},
        {"seed": 2**64},
        {"h_first": 0.0},
        {"grid": (1, 8)},
        {"tolerances": {"nope": 1e-3}},
        {"tolerances": {"geometry": -1.0}},
    ],
)
def test_runconfig_rejects(kw):
    with pytest.raises(ValueError):
        st.RunConfig(**kw)


def test_tolerance_override():
    cfg = st.RunConfig(tolerances={"limits": 1e-3})
    assert cfg.tol("limits") == 1e-3 and cfg.tol("geometry") == st.DEFAULT_TOLERANCES["geometry"]


def test_check_pass_rules():
    assert st.Check("x", "t", 1.0, np.array([1e-7]), 1e-6).passed
    assert not st.Check("x", "t", 1.0, np.array([1e-7, np.nan]), 1e-6).passed
    assert not st.Check("x", "t", 1.0, np.array([2e-6]), 1e-6).passed
    assert st.Check("x", "t", 1.0, np.array([5.0]), None, lower=1.0).passed
    assert st.Check("s", "t", 1.0, slope=2.05, window=(1.8, 2.2), steps=[1, 2, 3], errors=[1, 1, 1]).passed
    assert not st.Check("s", "t", 1.0, slope=1.0, window=(1.8, 2.2), steps=[1, 2, 3], errors=[1, 1, 1]).passed
    # exact up to roundoff: the fitted slope carries no information
    assert st.Check("s", "t", 1.0, slope=0.1, window=(1.8, 2.2), steps=[1, 2, 3], errors=[1e-12] * 3).passed
    assert not st.Check("s", "t", 1.0, slope=0.5, window=(-0.2, 0.2), steps=[1, 2, 3], errors=[1e-12] * 3).passed


def test_check_dict_is_json_clean():
    c = st.Check("s", "t", 2.0, slope=2.0, window=(1.8, np.inf), steps=[1, 2, 3], errors=[1, 2, 3])
    d = c.to_dict()
    assert d["window"] == [1.8, None]
    json.dumps(d, allow_nan=False)
    d = st.Check("x", "t", 1.0, np.arange(100.0), 1e3).to_dict()
    assert list(d)[:8] == ["id", "tag", "a", "n", "max", "mean", "p99", "tol"]


def test_rng_streams_are_independent_and_reproducible():
    a = st._rng(5, "geometry", 0).random(4)
    assert np.array_equal(a, st._rng(5, "geometry", 0).random(4))
    assert not np.array_equal(a, st._rng(5, "geometry", 1).random(4))
    assert not np.array_equal(a, st._rng(5, "boundary", 0).random(4))


def test_samples_respect_pole_band():
    from shellvisc.geometry import EllipsoidParams

    params = EllipsoidParams(2.0, 0.2)
    p = st.sample_points(params, st._rng(0, "geometry", 0), 500)
    assert p.phi.min() >= 0.2 and p.phi.max() <= np.pi - 0.2


@pytest.mark.parametrize("name", st.SUITES)
def test_small_suite_runs_pass(name):
    checks = st.run_suite(st.RunConfig(a_values=[2.0], samples=20), name)
    assert checks and all(c.passed for c in checks), [c.id for c in checks if not c.passed]


def test_unknown_suite():
    with pytest.raises(ValueError):
        st.run_suite(st.RunConfig(), "nope")
