import numpy as np
import pytest

from shellvisc.geometry import EllipsoidParams, SurfacePoint

# criterion number -> (passed, summary); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")


A_VALUES = (0.5, 1.0, 2.0, 5.0)


@pytest.fixture(params=A_VALUES, ids=lambda a: f"a={a:g}")
def params(request):
    return EllipsoidParams(request.param)


def sample(params, n=40, seed=0):
    rng = np.random.default_rng(seed)
    d = max(params.delta_pole, 0.05)
    return SurfacePoint(rng.uniform(d, np.pi - d, n), rng.uniform(-np.pi, np.pi, n))
