"""Hot loops for geodesic tracing and grid coverage.

The compiled extension ``_ckernels`` is used when it was built; otherwise
the pure-Python ``_pykernels`` is used. Set ``FLATCONE_PURE_PYTHON=1`` to
force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from types import ModuleType

import numpy as np

from . import _pykernels

LENGTH, VERTEX, FULL, STALL, NOEXIT = (_pykernels.LENGTH, _pykernels.VERTEX, _pykernels.FULL,
                                       _pykernels.STALL, _pykernels.NOEXIT)

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("FLATCONE_PURE_PYTHON", "") not in ("1", "true"):
    BACKEND = "cython"
else:
    BACKEND = "python"


def set_backend(name: str) -> None:
    global BACKEND
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {sorted(BACKENDS)}")
    BACKEND = name


@dataclass
class KernelTables:
    """Flat arrays describing charts and side maps, indexed by global edge."""

    offsets: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    edge_chart: np.ndarray
    partner: np.ndarray
    gc: np.ndarray
    gs: np.ndarray
    gtx: np.ndarray
    gty: np.ndarray
    edge_ref: list   # global edge -> EdgeRef

    @classmethod
    def from_surface(cls, surface) -> KernelTables:
        offsets = [0]
        for c in surface.charts:
            offsets.append(offsets[-1] + c.n)
        glob = {}
        refs = []
        for pos, c in enumerate(surface.charts):
            for k in range(c.n):
                glob[(c.id, k)] = offsets[pos] + k
                refs.append((c.id, k))
        N = offsets[-1]
        vx = np.empty(N)
        vy = np.empty(N)
        edge_chart = np.empty(N, dtype=np.int_)
        partner = np.empty(N, dtype=np.int_)
        gc, gs, gtx, gty = (np.empty(N) for _ in range(4))
        for pos, c in enumerate(surface.charts):
            for k, v in enumerate(c.vertices):
                g = offsets[pos] + k
                vx[g], vy[g] = v
                edge_chart[g] = pos
                s = surface.side((c.id, k))
                partner[g] = glob[tuple(s.partner)]
                gc[g], gs[g], gtx[g], gty[g] = s.cos, s.sin, s.tx, s.ty
        from ..surface import EdgeRef
        return cls(np.asarray(offsets, dtype=np.int_), vx, vy, edge_chart, partner,
                   gc, gs, gtx, gty, [EdgeRef(*r) for r in refs])

    def arrays(self):
        return (self.offsets, self.vx, self.vy, self.edge_chart, self.partner,
                self.gc, self.gs, self.gtx, self.gty)

    _lists = None

    def lists(self):
        if self._lists is None:
            self._lists = tuple(a.tolist() for a in self.arrays())
        return self._lists


def trace_run(tables: KernelTables, chart, x, y, dx, dy, remaining, excl_a, excl_b,
              eps, stall, cap=4096, backend: str | None = None):
    """Run the tracing kernel; returns (status, edges, xs, ys, chart, x, y, dx, dy, remaining, extra)."""
    name = backend or BACKEND
    if name == "cython":
        out_e = np.empty(cap, dtype=np.int_)
        out_x = np.empty(cap)
        out_y = np.empty(cap)
        res = _ckernels.trace_run(*tables.arrays(), chart, x, y, dx, dy, remaining,
                                  excl_a, excl_b, eps, stall, out_e, out_x, out_y)
        n = res[1]
        return (res[0], out_e[:n].tolist(), out_x[:n].tolist(), out_y[:n].tolist()) + tuple(res[2:])
    out_e = [0] * cap
    out_x = [0.0] * cap
    out_y = [0.0] * cap
    res = _pykernels.trace_run(*tables.lists(), chart, x, y, dx, dy, remaining,
                               excl_a, excl_b, eps, stall, out_e, out_x, out_y)
    n = res[1]
    return (res[0], out_e[:n], out_x[:n], out_y[:n]) + tuple(res[2:])


def mark_segment(x0, y0, x1, y1, ox, oy, cw, ch, nx, ny, mask, base, backend: str | None = None):
    BACKENDS[backend or BACKEND].mark_segment(x0, y0, x1, y1, ox, oy, cw, ch, nx, ny, mask, base)
