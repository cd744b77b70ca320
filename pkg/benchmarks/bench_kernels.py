"""Compare the compiled and pure-Python kernel backends.

Times the tracing kernel on long geodesics and the grid-marking kernel on
random segments, then a full density run, for every available backend.

    python3 benchmarks/bench_kernels.py --repeat 5
"""

from __future__ import annotations

import argparse
import json
import math
import random
import time

import numpy as np

from flatcone import DirectedPoint, density_profile, load_surface
from flatcone.cli import resolve_surface_path
from flatcone.kernels import BACKENDS, mark_segment, trace_run


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_trace(surface, backend: str, length: float):
    tables = surface.kernel_tables
    slope = (1 + math.sqrt(5)) / 2
    dx, dy = math.cos(math.atan(slope)), math.sin(math.atan(slope))
    x0, y0 = surface.charts[0].vertices[0]

    def run():
        chart, x, y, rem = 0, x0 + 0.123, y0 + 0.0456, length
        while rem > 0:
            res = trace_run(tables, chart, x, y, dx, dy, rem, -1, -1,
                            surface.eps_geom, 1e-9, cap=4096, backend=backend)
            status, chart, x, y, rem = res[0], res[4], res[5], res[6], res[9]
            if status != 2 and status != 0:
                raise RuntimeError(f"kernel stopped with status {status}")
            if status == 0:
                break
    return run


def bench_mark(backend: str, segments: int, grid: int):
    rng = random.Random(0)
    segs = [(rng.random(), rng.random(), rng.random(), rng.random()) for _ in range(segments)]
    mask = np.zeros(grid * grid, dtype=bool) if backend == "cython" else [False] * (grid * grid)
    cw = 1.0 / grid

    def run():
        for x0, y0, x1, y1 in segs:
            mark_segment(x0, y0, x1, y1, 0.0, 0.0, cw, cw, grid, grid, mask, 0, backend=backend)
    return run


def bench_density(surface, backend: str, length: float):
    start = DirectedPoint(surface.charts[0].id, (0.123, 0.0456), math.atan((1 + math.sqrt(5)) / 2))
    return lambda: density_profile(surface, start, length, 32, backend=backend)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--surface", default="octagon")
    ap.add_argument("--length", type=float, default=2e4, help="geodesic length per trace")
    ap.add_argument("--segments", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="print one JSON object per result")
    args = ap.parse_args(argv)

    surface = load_surface(resolve_surface_path(args.surface))
    cases = {
        "trace_run": lambda b: bench_trace(surface, b, args.length),
        "mark_segment": lambda b: bench_mark(b, args.segments, 64),
        "density_profile": lambda b: bench_density(load_surface(resolve_surface_path("torus")),
                                                   b, 1e4),
    }
    results = {}
    for name, make in cases.items():
        for backend in sorted(BACKENDS):
            results[(name, backend)] = best_of(make(backend), args.repeat)

    backends = sorted(BACKENDS)
    if args.json:
        for (name, backend), t in results.items():
            print(json.dumps({"case": name, "backend": backend, "seconds": t}))
        return
    print(f"{'case':<18}" + "".join(f"{b:>12}" for b in backends) + "   speedup")
    for name in cases:
        ts = [results[(name, b)] for b in backends]
        speed = ""
        if "cython" in BACKENDS:
            speed = f"{results[(name, 'python')] / results[(name, 'cython')]:8.1f}x"
        print(f"{name:<18}" + "".join(f"{t:11.4f}s" for t in ts) + "  " + speed)


if __name__ == "__main__":
    main()
