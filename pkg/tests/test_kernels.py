import math
import os
import random
import subprocess
import sys

import numpy as np
import pytest

from flatcone import DirectedPoint, density_profile, trace
from flatcone import kernels
from flatcone.cli import FIXTURES

from conftest import fixture_surface

needs_cython = pytest.mark.skipif("cython" not in kernels.BACKENDS,
                                  reason="compiled extension not built")


def random_start(surface, rng):
    t = rng.choice(surface.triangulation.triangles)
    a, b = rng.random(), rng.random()
    if a + b > 1:
        a, b = 1 - a, 1 - b
    p0, p1, p2 = t.points
    x = p0[0] + a * (p1[0] - p0[0]) + b * (p2[0] - p0[0])
    y = p0[1] + a * (p1[1] - p0[1]) + b * (p2[1] - p0[1])
    return t.chart, x, y, rng.uniform(0, 2 * math.pi)


@needs_cython
@pytest.mark.parametrize("name", FIXTURES)
def test_trace_run_backends_agree(name):
    s = fixture_surface(name)
    tables = s.kernel_tables
    rng = random.Random(1)
    for _ in range(50):
        chart, x, y, a = random_start(s, rng)
        pos = [c.id for c in s.charts].index(chart)
        args = (tables, pos, x, y, math.cos(a), math.sin(a), 30.0, -1, -1, s.eps_geom, 1e-9)
        py = kernels.trace_run(*args, backend="python")
        cy = kernels.trace_run(*args, backend="cython")
        assert py[0] == cy[0] and py[1] == cy[1]
        np.testing.assert_allclose(py[2], cy[2], rtol=0, atol=1e-12)
        np.testing.assert_allclose(py[3], cy[3], rtol=0, atol=1e-12)
        assert py[4] == cy[4]
        np.testing.assert_allclose(py[5:10], cy[5:10], rtol=0, atol=1e-12)


@needs_cython
def test_mark_segment_backends_agree():
    rng = random.Random(2)
    n = 17
    py = [False] * (n * n)
    cy = np.zeros(n * n, dtype=bool)
    for _ in range(500):
        seg = (rng.uniform(-0.1, 1.1), rng.uniform(-0.1, 1.1), rng.uniform(-0.1, 1.1), rng.uniform(-0.1, 1.1))
        kernels.mark_segment(*seg, 0.0, 0.0, 1 / n, 1 / n, n, n, py, 0, backend="python")
        kernels.mark_segment(*seg, 0.0, 0.0, 1 / n, 1 / n, n, n, cy, 0, backend="cython")
        assert py == cy.tolist()


@needs_cython
@pytest.mark.parametrize("name", ["octagon", "l_shape", "badangle"])
def test_public_results_identical(name):
    s = fixture_surface(name)
    rng = random.Random(4)
    starts = [DirectedPoint(c, (x, y), a) for c, x, y, a in (random_start(s, rng) for _ in range(10))]
    old = kernels.BACKEND
    out = {}
    try:
        for b in ("python", "cython"):
            kernels.set_backend(b)
            paths = [trace(s, p, 25.0) for p in starts]
            out[b] = ([(len(q.segments), type(q.terminal).__name__, round(q.length, 9)) for q in paths],
                      density_profile(s, starts[0], 200.0, 16).coverage)
    finally:
        kernels.set_backend(old)
    assert out["python"] == out["cython"]


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_environment_forces_fallback():
    env = dict(os.environ, FLATCONE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from flatcone import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
