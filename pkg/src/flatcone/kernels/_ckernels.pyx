# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tracing kernels; same contract as ``_pykernels``."""

from libc.math cimport fabs, floor, hypot, INFINITY

cdef enum:
    LENGTH = 0
    VERTEX = 1
    FULL = 2
    STALL = 3
    NOEXIT = 4


def trace_run(const long[:] offsets, const double[:] vx, const double[:] vy,
              const long[:] edge_chart, const long[:] partner,
              const double[:] gc, const double[:] gs, const double[:] gtx, const double[:] gty,
              long chart, double x, double y, double dx, double dy, double remaining,
              long excl_a, long excl_b, double eps, double stall,
              long[:] out_edge, double[:] out_x, double[:] out_y):
    cdef Py_ssize_t cap = out_edge.shape[0]
    cdef Py_ssize_t n = 0
    cdef long base, m, k, g, g2, best_k
    cdef double best_t, ta, tb, ax, ay, ex, ey, den, wx, wy, t, s, px, py, c, sn, ndx
    while True:
        base = offsets[chart]
        m = offsets[chart + 1] - base
        best_t = INFINITY
        best_k = -1
        for k in range(m):
            g = base + k
            if g == excl_a or g == excl_b:
                continue
            g2 = base + (k + 1) % m
            ax = vx[g]
            ay = vy[g]
            ex = vx[g2] - ax
            ey = vy[g2] - ay
            den = dx * ey - dy * ex
            wx = ax - x
            wy = ay - y
            if fabs(den) <= 1e-12 * (fabs(ex) + fabs(ey)):
                # (nearly) parallel; running along this edge's line: its far vertex is a hit
                if fabs(wx * dy - wy * dx) < eps:
                    ta = wx * dx + wy * dy
                    tb = ta + ex * dx + ey * dy
                    t = min(ta, tb) if min(ta, tb) > eps else max(ta, tb)
                    if t > eps and t < best_t:
                        best_t = t
                        best_k = k
                continue
            t = (wx * ey - wy * ex) / den
            s = (wx * dy - wy * dx) / den
            if t > 0.0 and s >= -1e-12 and s <= 1.0 + 1e-12 and t < best_t:
                best_t = t
                best_k = k
        if best_k < 0:
            return NOEXIT, n, chart, x, y, dx, dy, remaining, -1
        if best_t >= remaining:
            x += dx * remaining
            y += dy * remaining
            return LENGTH, n, chart, x, y, dx, dy, 0.0, -1
        g = base + best_k
        g2 = base + (best_k + 1) % m
        px = x + dx * best_t
        py = y + dy * best_t
        if hypot(px - vx[g], py - vy[g]) < eps:
            return VERTEX, n, chart, px, py, dx, dy, remaining - best_t, g
        if hypot(px - vx[g2], py - vy[g2]) < eps:
            return VERTEX, n, chart, px, py, dx, dy, remaining - best_t, g2
        if best_t < stall:
            return STALL, n, chart, x, y, dx, dy, remaining, g
        out_edge[n] = g
        out_x[n] = px
        out_y[n] = py
        n += 1
        c = gc[g]
        sn = gs[g]
        x = c * px - sn * py + gtx[g]
        y = sn * px + c * py + gty[g]
        ndx = c * dx - sn * dy
        dy = sn * dx + c * dy
        dx = ndx
        remaining -= best_t
        excl_a = partner[g]
        excl_b = -1
        chart = edge_chart[excl_a]
        if n == cap:
            return FULL, n, chart, x, y, dx, dy, remaining, excl_a


def mark_segment(double x0, double y0, double x1, double y1, double ox, double oy,
                 double cw, double ch, long nx, long ny, unsigned char[:] mask, long base):
    cdef double fx0 = (x0 - ox) / cw
    cdef double fy0 = (y0 - oy) / ch
    cdef double fx1 = (x1 - ox) / cw
    cdef double fy1 = (y1 - oy) / ch
    cdef long ix = min(max(<long>floor(fx0), 0), nx - 1)
    cdef long iy = min(max(<long>floor(fy0), 0), ny - 1)
    cdef long jx = min(max(<long>floor(fx1), 0), nx - 1)
    cdef long jy = min(max(<long>floor(fy1), 0), ny - 1)
    cdef double ddx = fx1 - fx0
    cdef double ddy = fy1 - fy0
    cdef long stepx, stepy, guard
    cdef double tmx, tmy, tdx, tdy
    if ddx > 0:
        stepx = 1
        tmx = (ix + 1 - fx0) / ddx
        tdx = 1.0 / ddx
    elif ddx < 0:
        stepx = -1
        tmx = (ix - fx0) / ddx
        tdx = -1.0 / ddx
    else:
        stepx = 0
        tmx = INFINITY
        tdx = INFINITY
    if ddy > 0:
        stepy = 1
        tmy = (iy + 1 - fy0) / ddy
        tdy = 1.0 / ddy
    elif ddy < 0:
        stepy = -1
        tmy = (iy - fy0) / ddy
        tdy = -1.0 / ddy
    else:
        stepy = 0
        tmy = INFINITY
        tdy = INFINITY
    mask[base + iy * nx + ix] = 1
    guard = 4 * (nx + ny) + 4
    while (ix != jx or iy != jy) and guard > 0:
        guard -= 1
        if tmx < tmy:
            ix += stepx
            tmx += tdx
        else:
            iy += stepy
            tmy += tdy
        if ix < 0 or iy < 0 or ix >= nx or iy >= ny:
            break
        mask[base + iy * nx + ix] = 1
