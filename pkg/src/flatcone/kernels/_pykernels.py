"""Pure-Python tracing kernels; same contract as ``_ckernels``."""

import math

LENGTH, VERTEX, FULL, STALL, NOEXIT = 0, 1, 2, 3, 4


def trace_run(offsets, vx, vy, edge_chart, partner, gc, gs, gtx, gty,
              chart, x, y, dx, dy, remaining, excl_a, excl_b, eps, stall,
              out_edge, out_x, out_y):
    """Follow a straight line through charts until something happens.

    Edges and vertices are numbered globally: chart ``c`` owns indices
    ``offsets[c] .. offsets[c+1]-1``, edge ``g`` runs from vertex ``g`` to
    the next vertex of the same chart. Every edge crossing is written to the
    ``out_*`` buffers (edge index and exit point in the chart being left).

    Returns ``(status, n, chart, x, y, dx, dy, remaining, extra)``. For
    VERTEX, ``extra`` is the global vertex hit and (x, y) the arrival point;
    for FULL it is the edge to exclude when resuming.
    """
    cap = len(out_edge)
    n = 0
    while True:
        base = offsets[chart]
        m = offsets[chart + 1] - base
        best_t = math.inf
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
            if abs(den) <= 1e-12 * (abs(ex) + abs(ey)):
                # (nearly) parallel; running along this edge's line: its far vertex is a hit
                if abs(wx * dy - wy * dx) < eps:
                    ta = wx * dx + wy * dy
                    tb = ta + ex * dx + ey * dy
                    t = min(ta, tb) if min(ta, tb) > eps else max(ta, tb)
                    if t > eps and t < best_t:
                        best_t = t
                        best_k = k
                continue
            t = (wx * ey - wy * ex) / den
            s = (wx * dy - wy * dx) / den
            if t > 0.0 and -1e-12 <= s <= 1.0 + 1e-12 and t < best_t:
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
        if math.hypot(px - vx[g], py - vy[g]) < eps:
            return VERTEX, n, chart, px, py, dx, dy, remaining - best_t, g
        if math.hypot(px - vx[g2], py - vy[g2]) < eps:
            return VERTEX, n, chart, px, py, dx, dy, remaining - best_t, g2
        if best_t < stall:
            return STALL, n, chart, x, y, dx, dy, remaining, g
        out_edge[n] = g
        out_x[n] = px
        out_y[n] = py
        n += 1
        c = gc[g]
        s_ = gs[g]
        x = c * px - s_ * py + gtx[g]
        y = s_ * px + c * py + gty[g]
        ndx = c * dx - s_ * dy
        dy = s_ * dx + c * dy
        dx = ndx
        remaining -= best_t
        excl_a = partner[g]
        excl_b = -1
        chart = edge_chart[excl_a]
        if n == cap:
            return FULL, n, chart, x, y, dx, dy, remaining, excl_a


def mark_segment(x0, y0, x1, y1, ox, oy, cw, ch, nx, ny, mask, base):
    """Set ``mask[base + iy*nx + ix]`` for every grid cell the segment enters."""
    fx0 = (x0 - ox) / cw
    fy0 = (y0 - oy) / ch
    fx1 = (x1 - ox) / cw
    fy1 = (y1 - oy) / ch
    ix = min(max(int(math.floor(fx0)), 0), nx - 1)
    iy = min(max(int(math.floor(fy0)), 0), ny - 1)
    jx = min(max(int(math.floor(fx1)), 0), nx - 1)
    jy = min(max(int(math.floor(fy1)), 0), ny - 1)
    ddx = fx1 - fx0
    ddy = fy1 - fy0
    if ddx > 0:
        stepx, tmx, tdx = 1, (ix + 1 - fx0) / ddx, 1.0 / ddx
    elif ddx < 0:
        stepx, tmx, tdx = -1, (ix - fx0) / ddx, -1.0 / ddx
    else:
        stepx, tmx, tdx = 0, math.inf, math.inf
    if ddy > 0:
        stepy, tmy, tdy = 1, (iy + 1 - fy0) / ddy, 1.0 / ddy
    elif ddy < 0:
        stepy, tmy, tdy = -1, (iy - fy0) / ddy, -1.0 / ddy
    else:
        stepy, tmy, tdy = 0, math.inf, math.inf
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
