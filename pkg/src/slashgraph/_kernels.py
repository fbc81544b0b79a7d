"""Hot loops of the subset scans, in numba and in plain numpy.

Three kernels carry the brute-force work:

``subset_profile``
    Walks every subset of a list of free vertices (the rest fixed) in Gray
    code order and records, for each value of the integer measure
    numerator, the least integer perimeter numerator and the least bitmask
    attaining it.
``subset_inf_scan``
    Same walk, tracking the mass of interior and boundary edges so that the
    infimum over all edge weights of the ratio has a closed form; returns
    the minimum value and the least minimising bitmask.
``minplus_convolve``
    ``c[i + j] = min(a[i] + b[j])`` on integer tables with an argmin.

Set ``SLASHGRAPH_NO_NUMBA=1`` to force the numpy implementations. Both
backends return identical results; ``benchmarks/bench_kernels.py`` times
them against each other.
"""

from __future__ import annotations

import os

import numpy as np

INF = np.iinfo(np.int64).max // 4
_CHUNK = 1 << 16

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_DISABLED = os.environ.get("SLASHGRAPH_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"


def _resolve(backend: str | None) -> str:
    backend = backend or DEFAULT_BACKEND
    if backend not in {"numba", "numpy"}:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        return "numpy"
    return backend


# ------------------------------------------------------------ numpy versions


def _chunk_members(free, base, start, stop):
    """Membership matrix for free-vertex codes ``start..stop-1``."""
    codes = np.arange(start, stop, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(free.size, dtype=np.int64)) & 1).astype(bool)
    members = np.repeat(base[None, :], codes.size, axis=0)
    members[:, free] = bits
    return members


def _mask_of(members):
    weights = np.left_shift(np.int64(1), np.arange(members.shape[1], dtype=np.int64))
    return members.astype(np.int64) @ weights


def _profile_numpy(free, base, src, dst, edge_w, vertex_w, total):
    best_per = np.full(total + 1, INF, dtype=np.int64)
    best_mask = np.full(total + 1, -1, dtype=np.int64)
    n_codes = 1 << free.size
    for start in range(0, n_codes, _CHUNK):
        members = _chunk_members(free, base, start, min(n_codes, start + _CHUNK))
        per = (members[:, src] != members[:, dst]).astype(np.int64) @ edge_w
        mu = members.astype(np.int64) @ vertex_w
        mask = _mask_of(members)
        order = np.lexsort((mask, per, mu))
        mu_s = mu[order]
        first = np.ones(order.size, dtype=bool)
        first[1:] = mu_s[1:] != mu_s[:-1]
        pick = order[first]
        m, p, k = mu[pick], per[pick], mask[pick]
        better = (p < best_per[m]) | ((p == best_per[m]) & (k < best_mask[m]))
        best_per[m[better]] = p[better]
        best_mask[m[better]] = k[better]
    return best_per, best_mask


def _sup_min(lo, hi, total, two_sided):
    """Sup of ``min(x, 1 - x)`` (or of ``x``) over the open interval ``(lo, hi) / total``."""
    lo = lo / total
    hi = hi / total
    if not two_sided:
        return hi
    return np.where(hi <= 0.5, hi, np.where(lo >= 0.5, 1.0 - lo, 0.5))


def _inf_scan_numpy(free, base, src, dst, per_w, nu_w, per_den, total, r, two_sided):
    best_val, best_mask = np.inf, -1
    n_codes = 1 << free.size
    n = base.size
    for start in range(0, n_codes, _CHUNK):
        members = _chunk_members(free, base, start, min(n_codes, start + _CHUNK))
        count = members.sum(axis=1)
        keep = (count > 0) & (count < n)
        if not keep.any():
            continue
        members = members[keep]
        ms, md = members[:, src], members[:, dst]
        per = (ms != md).astype(np.int64) @ per_w
        inner = (ms & md).astype(np.int64) @ nu_w
        bnd = (ms != md).astype(np.int64) @ nu_w
        g = _sup_min(inner.astype(np.float64), (inner + bnd).astype(np.float64), total, two_sided)
        with np.errstate(divide="ignore"):
            val = (per / per_den) / np.power(g, r)
        mask = _mask_of(members)
        i = int(np.lexsort((mask, val))[0])
        if val[i] < best_val or (val[i] == best_val and mask[i] < best_mask):
            best_val, best_mask = float(val[i]), int(mask[i])
    return best_val, best_mask


def _minplus_numpy(a, b):
    out = np.full(a.size + b.size - 1, INF, dtype=np.int64)
    arg = np.full(out.size, -1, dtype=np.int64)
    finite_b = b < INF
    for i in np.flatnonzero(a < INF):
        cand = np.where(finite_b, a[i] + b, INF)
        window = out[i : i + b.size]
        better = cand < window
        window[better] = cand[better]
        arg[i : i + b.size][better] = i
    return out, arg


# ------------------------------------------------------------ numba versions

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _profile_numba(free, base, indptr, nbr, eid, edge_w, vertex_w, total):
        n = base.size
        best_per = np.full(total + 1, INF, dtype=np.int64)
        best_mask = np.full(total + 1, -1, dtype=np.int64)
        inside = base.copy()
        per = 0
        mu = 0
        mask = 0
        for v in range(n):
            if inside[v]:
                mu += vertex_w[v]
                mask |= np.int64(1) << v
                for p in range(indptr[v], indptr[v + 1]):
                    if not inside[nbr[p]]:
                        per += edge_w[eid[p]]
        best_per[mu] = per
        best_mask[mu] = mask
        n_codes = np.int64(1) << free.size
        for code in range(1, n_codes):
            b = 0
            while (code >> b) & 1 == 0:
                b += 1
            v = free[b]
            for p in range(indptr[v], indptr[v + 1]):
                if inside[nbr[p]] == inside[v]:
                    per += edge_w[eid[p]]
                else:
                    per -= edge_w[eid[p]]
            if inside[v]:
                mu -= vertex_w[v]
            else:
                mu += vertex_w[v]
            inside[v] = not inside[v]
            mask ^= np.int64(1) << v
            if per < best_per[mu] or (per == best_per[mu] and mask < best_mask[mu]):
                best_per[mu] = per
                best_mask[mu] = mask
        return best_per, best_mask

    @numba.njit(cache=True)
    def _inf_scan_numba(free, base, indptr, nbr, eid, per_w, nu_w, per_den, total, r, two_sided):
        n = base.size
        inside = base.copy()
        per = 0
        inner = 0
        bnd = 0
        mask = 0
        count = 0
        for v in range(n):
            if inside[v]:
                count += 1
                mask |= np.int64(1) << v
        for v in range(n):
            for p in range(indptr[v], indptr[v + 1]):
                u = nbr[p]
                if u < v:
                    continue
                e = eid[p]
                if inside[u] and inside[v]:
                    inner += nu_w[e]
                elif inside[u] != inside[v]:
                    bnd += nu_w[e]
                    per += per_w[e]
        best_val = np.inf
        best_mask = np.int64(-1)
        n_codes = np.int64(1) << free.size
        for code in range(n_codes):
            if code > 0:
                b = 0
                while (code >> b) & 1 == 0:
                    b += 1
                v = free[b]
                was_in = inside[v]
                for p in range(indptr[v], indptr[v + 1]):
                    w = nu_w[eid[p]]
                    c = per_w[eid[p]]
                    if inside[nbr[p]]:
                        if was_in:
                            inner -= w
                            bnd += w
                            per += c
                        else:
                            inner += w
                            bnd -= w
                            per -= c
                    else:
                        if was_in:
                            bnd -= w
                            per -= c
                        else:
                            bnd += w
                            per += c
                inside[v] = not was_in
                mask ^= np.int64(1) << v
                count += -1 if was_in else 1
            if count == 0 or count == n:
                continue
            lo = inner / total
            hi = (inner + bnd) / total
            if not two_sided:
                g = hi
            elif hi <= 0.5:
                g = hi
            elif lo >= 0.5:
                g = 1.0 - lo
            else:
                g = 0.5
            if g <= 0.0:
                val = np.inf
            else:
                val = (per / per_den) / g**r
            if val < best_val or (val == best_val and mask < best_mask):
                best_val = val
                best_mask = mask
        return best_val, best_mask

    @numba.njit(cache=True)
    def _minplus_numba(a, b):
        out = np.full(a.size + b.size - 1, INF, dtype=np.int64)
        arg = np.full(out.size, -1, dtype=np.int64)
        for i in range(a.size):
            ai = a[i]
            if ai >= INF:
                continue
            for j in range(b.size):
                bj = b[j]
                if bj >= INF:
                    continue
                s = ai + bj
                if s < out[i + j]:
                    out[i + j] = s
                    arg[i + j] = i
        return out, arg


# ------------------------------------------------------------ dispatch


def subset_profile(graph, free, base, edge_w, vertex_w, total, backend=None):
    """Least perimeter numerator and least bitmask per measure numerator.

    ``free`` lists the vertices that vary, ``base`` is the boolean
    membership of all vertices at the start of the walk (free entries are
    ignored and treated as absent). ``edge_w`` and ``vertex_w`` are int64
    numerators; ``total`` is the sum of ``vertex_w``.
    """
    free = np.asarray(free, dtype=np.int64)
    base = np.asarray(base, dtype=bool).copy()
    base[free] = False
    edge_w = np.asarray(edge_w, dtype=np.int64)
    vertex_w = np.asarray(vertex_w, dtype=np.int64)
    if _resolve(backend) == "numba":
        indptr, nbr, eid = graph.csr
        return _profile_numba(free, base, indptr, nbr, eid, edge_w, vertex_w, int(total))
    return _profile_numpy(free, base, graph.src, graph.dst, edge_w, vertex_w, int(total))


def subset_inf_scan(graph, free, base, per_w, nu_w, per_den, total, r, two_sided, backend=None):
    """Minimum over subsets of ``Per / sup_alpha m_alpha(S)**r`` and its bitmask.

    ``m_alpha`` is ``min(mu, 1 - mu)`` when ``two_sided`` and ``mu`` otherwise;
    the empty and full sets are skipped.
    """
    free = np.asarray(free, dtype=np.int64)
    base = np.asarray(base, dtype=bool).copy()
    base[free] = False
    per_w = np.asarray(per_w, dtype=np.int64)
    nu_w = np.asarray(nu_w, dtype=np.int64)
    args = (float(per_den), float(total), float(r), bool(two_sided))
    if _resolve(backend) == "numba":
        indptr, nbr, eid = graph.csr
        val, mask = _inf_scan_numba(free, base, indptr, nbr, eid, per_w, nu_w, *args)
        return float(val), int(mask)
    return _inf_scan_numpy(free, base, graph.src, graph.dst, per_w, nu_w, *args)


def minplus_convolve(a, b, backend=None):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _minplus_numba(a, b)
    return _minplus_numpy(a, b)
