"""Hot loops of the wide-stencil schemes, jitted with numba.

The per-node work is independent, so the parallel schedule cannot
change results; ties are broken by first occurrence in the neighbor
arrays, which are sorted by global node index.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def scheme_terms(u, interior, nbr_idx, nbr_dist, nbr_count):
    """Per interior node: steepest-ascent / descent neighbor and the
    Oberman Lipschitz-pair term u_i - u*_i.

    Returns (jmax, jmin, f2) where jmax/jmin are column positions of
    the arg-max/arg-min difference quotient (u_i - u_j)/d_j and f2 is
    the un-normalized discrete infinity Laplacian residual.
    """
    mi = interior.shape[0]
    jmax = np.empty(mi, np.int64)
    jmin = np.empty(mi, np.int64)
    f2 = np.empty(mi)
    for t in prange(mi):
        i = interior[t]
        ui = u[i]
        k = nbr_count[t]
        best = -np.inf
        worst = np.inf
        bj = 0
        wj = 0
        for a in range(k):
            q = (ui - u[nbr_idx[t, a]]) / nbr_dist[t, a]
            if q > best:
                best = q
                bj = a
            if q < worst:
                worst = q
                wj = a
        jmax[t] = bj
        jmin[t] = wj

        # Lipschitz pair: unordered (a, b), a < b, lexicographic ties.
        pq = -1.0
        pr = 0
        ps = 1
        for a in range(k - 1):
            ua = u[nbr_idx[t, a]]
            da = nbr_dist[t, a]
            for b in range(a + 1, k):
                q = abs(ua - u[nbr_idx[t, b]]) / (da + nbr_dist[t, b])
                if q > pq:
                    pq = q
                    pr = a
                    ps = b
        dr = nbr_dist[t, pr]
        ds = nbr_dist[t, ps]
        ur = u[nbr_idx[t, pr]]
        us = u[nbr_idx[t, ps]]
        ustar = (ds * ur + dr * us) / (dr + ds)
        f2[t] = ui - ustar
    return jmax, jmin, f2


@njit(cache=True)
def best_pair_radius(d, x, y):
    """Two-ball search: maximize min(d_i, d_j, |x_i-x_j|/2) over pairs.

    Ties resolve to the lexicographically smallest (i, j), i < j, by
    scanning pairs in order and keeping strict improvements only.
    """
    m = d.shape[0]
    best = -1.0
    bi = -1
    bj = -1
    for i in range(m - 1):
        di = d[i]
        if di <= best:
            continue
        xi = x[i]
        yi = y[i]
        row_best = -1.0
        row_j = -1
        for j in range(i + 1, m):
            v = d[j]
            if di < v:
                v = di
            dx = x[j] - xi
            dy = y[j] - yi
            half = 0.5 * np.sqrt(dx * dx + dy * dy)
            if half < v:
                v = half
            if v > row_best:
                row_best = v
                row_j = j
        if row_best > best:
            best = row_best
            bi = i
            bj = row_j
    return best, bi, bj
