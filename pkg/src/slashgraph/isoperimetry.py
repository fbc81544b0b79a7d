"""Perimeters, isoperimetric ratios and their minimisation over vertex subsets.

Perimeters and measures are exact; a ratio only becomes a float at the
final fractional power ``min(mu(S), mu(S^c)) ** ((delta - 1) / delta)``.
Threshold comparisons use a relative tolerance of 1e-12.

Three search strategies are available for the global minimum:

* ``exhaustive`` - every proper nonempty subset (Gray-code kernel);
* ``connected``  - only connected subsets, which attain the same minimum
  because splitting a set into components never lowers the best ratio;
* ``power``      - an exact recursion for slash powers ``G^n``: a subset of
  ``G (x) G^(n-1)`` is a subset ``T`` of ``V(G)`` together with one subset
  per copy, and perimeter and measure are both sums over copies, so the
  least perimeter for every attainable measure can be assembled from the
  same table one level down by min-plus convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import _kernels
from .config import DEFAULT_CAPS, Caps
from .errors import DomainError, InvalidMeasureError, ResourceCapError
from .exact import common_denominator, rational_exponent
from .functions import VertexFunction, indicator, lp_norm, sobolev_seminorm, vertex_function
from .graph import Graph, Subset, connected_subset_bits, oslash_power, oslash_product, reassociation_map
from .measures import (
    EdgeMeasure,
    GeodesicMetric,
    VertexMeasure,
    check_alpha,
    induced_vertex_measure,
    power_edge_measure,
    power_metric,
)

TOL = 1e-12
_MAX_KERNEL_VERTICES = 62


def as_delta(delta) -> Fraction | float:
    """Keep rational dimensions exact; anything else becomes a float."""
    if isinstance(delta, Fraction):
        out = delta
    elif isinstance(delta, int):
        out = Fraction(delta)
    elif isinstance(delta, str):
        out = Fraction(delta)
    else:
        guess = rational_exponent(float(delta), 16)
        out = guess if guess is not None and float(guess) == float(delta) else float(delta)
    if out < 1:
        raise DomainError("delta must be at least 1")
    return out


def _exponent(delta) -> float:
    delta = as_delta(delta)
    return float((delta - 1) / delta) if isinstance(delta, Fraction) else (delta - 1) / delta


# ------------------------------------------------------------ single subsets


def perimeter(s: Subset, nu: EdgeMeasure, d: GeodesicMetric) -> Fraction:
    """Sum of ``nu(e) / d(e)`` over edges with exactly one endpoint in ``s``."""
    return sum((nu.mass[e] / d.lengths[e] for e in s.boundary), Fraction(0))


def _proper(s: Subset) -> None:
    if len(s) == 0 or len(s) == s.graph.n_vertices:
        raise DomainError("ratio needs a proper nonempty subset")


def _ratio(per: Fraction, mass: Fraction, r: float) -> float:
    if mass <= 0:
        return math.inf
    return float(per) / float(mass) ** r


def iso_ratio(s: Subset, delta, nu: EdgeMeasure, d: GeodesicMetric, alpha=None) -> float:
    """``Per(S) / min(mu(S), mu(S^c)) ** ((delta - 1) / delta)``."""
    _proper(s)
    mu = induced_vertex_measure(nu, alpha)
    return _ratio(perimeter(s, nu, d), min(mu.of(s), mu.of(s.complement())), _exponent(delta))


def tilde_iso_ratio(s: Subset, delta, nu: EdgeMeasure, d: GeodesicMetric, alpha=None) -> float:
    """One-sided ratio ``Per(S) / mu(S) ** ((delta - 1) / delta)``."""
    _proper(s)
    mu = induced_vertex_measure(nu, alpha)
    return _ratio(perimeter(s, nu, d), mu.of(s), _exponent(delta))


def alpha_range(s: Subset, nu: EdgeMeasure) -> tuple[Fraction, Fraction]:
    """Open interval swept by ``mu_alpha(S)`` as ``alpha`` ranges over ``(0,1)^E``.

    Interior edges always contribute their full mass; a boundary edge
    contributes any amount strictly between 0 and its mass.
    """
    lo = sum((nu.mass[e] for e in s.interior_edges), Fraction(0))
    return lo, lo + sum((nu.mass[e] for e in s.boundary), Fraction(0))


def inf_alpha_ratio(
    s: Subset, delta, nu: EdgeMeasure, d: GeodesicMetric, two_sided: bool = True
) -> float:
    """Infimum over all edge weights of ``q`` (or ``q~`` when not ``two_sided``).

    Follows from :func:`alpha_range`: the infimum divides by the supremum of
    ``min(x, total - x)`` (or of ``x``) over that interval. It is approached
    but not attained.
    """
    _proper(s)
    lo, hi = alpha_range(s, nu)
    total = nu.total
    if not two_sided or 2 * hi <= total:
        best = hi
    elif 2 * lo >= total:
        best = total - lo
    else:
        best = total / 2
    return _ratio(perimeter(s, nu, d), best / total, _exponent(delta))


def iso_dimension(nu: EdgeMeasure, d: GeodesicMetric) -> Fraction | float:
    """``max_e log nu(e) / log d(e)``, exact when the maximum is rational."""
    best, best_pair = -math.inf, None
    for m, x in zip(nu.mass, d.lengths):
        if not (0 < m < 1) or not (0 < x < 1):
            raise DomainError("iso_dimension needs every mass and length in (0, 1)")
        val = math.log(m) / math.log(x)
        if val > best:
            best, best_pair = val, (m, x)
    guess = rational_exponent(best, 64)
    if guess is not None:
        m, x = best_pair
        p, q = guess.numerator, guess.denominator
        if m**q == x**p:
            return guess
    return best


# ------------------------------------------------------------ scan plumbing


@dataclass(frozen=True)
class _Weights:
    per_w: np.ndarray
    per_den: int
    vertex_w: np.ndarray
    mu_den: int
    total: int


def _scan_weights(nu: EdgeMeasure, d: GeodesicMetric, alpha=None) -> _Weights:
    c = [m / x for m, x in zip(nu.mass, d.lengths)]
    per_den = common_denominator(c)
    mu = induced_vertex_measure(nu, alpha).mass
    mu_den = common_denominator(mu)
    per_w = [int(x * per_den) for x in c]
    vertex_w = [int(x * mu_den) for x in mu]
    total = sum(vertex_w)
    if total >= 2**62 or sum(per_w) >= 2**62:
        raise ResourceCapError("weights too fine for the int64 subset scan")
    return _Weights(
        np.asarray(per_w, dtype=np.int64),
        per_den,
        np.asarray(vertex_w, dtype=np.int64),
        mu_den,
        total,
    )


def _check_scan(g: Graph, n_free: int, caps: Caps, width: int) -> None:
    if n_free > caps.exhaustive_vertices:
        raise ResourceCapError(
            f"{n_free} free vertices exceeds the exhaustive cap {caps.exhaustive_vertices}"
        )
    if g.n_vertices > _MAX_KERNEL_VERTICES:
        raise ResourceCapError("subset scans are limited to 62 vertices")
    if width > caps.frontier_width:
        raise ResourceCapError(f"measure table of width {width} exceeds the cap")


def _profile_from_masks(g: Graph, masks: list[int], w: _Weights):
    """Numpy profile (least perimeter per measure) over explicit bitmasks."""
    best_per = np.full(w.total + 1, _kernels.INF, dtype=np.int64)
    best_mask = np.full(w.total + 1, -1, dtype=np.int64)
    shifts = np.arange(g.n_vertices, dtype=np.int64)
    for start in range(0, len(masks), 1 << 15):
        arr = np.asarray(masks[start : start + (1 << 15)], dtype=np.int64)
        members = ((arr[:, None] >> shifts) & 1).astype(bool)
        per = (members[:, g.src] != members[:, g.dst]).astype(np.int64) @ w.per_w
        mu = members.astype(np.int64) @ w.vertex_w
        order = np.lexsort((arr, per, mu))
        mu_s = mu[order]
        first = np.ones(order.size, dtype=bool)
        first[1:] = mu_s[1:] != mu_s[:-1]
        pick = order[first]
        m, p, k = mu[pick], per[pick], arr[pick]
        better = (p < best_per[m]) | ((p == best_per[m]) & (k < best_mask[m]))
        best_per[m[better]] = p[better]
        best_mask[m[better]] = k[better]
    return best_per, best_mask


def _best_bucket(best_per, best_mask, total: int, r: float, w_per_den: int, mu_den: int):
    """Pick the bucket minimising the two-sided ratio; ties go to the least mask."""
    best = (math.inf, -1, -1)
    for m in range(1, total):
        p = int(best_per[m])
        if p >= _kernels.INF:
            continue
        side = min(m, total - m)
        val = (p / w_per_den) / (side / mu_den) ** r
        key = (val, int(best_mask[m]))
        if key < best[:2]:
            best = (val, int(best_mask[m]), m)
    return best


# ------------------------------------------------------------ reports


@dataclass(frozen=True)
class IsoReport:
    """Minimum of the isoperimetric ratio over proper nonempty subsets.

    ``constant`` is ``1 / min_ratio``, the best constant ``C`` in
    ``min(mu(S), mu(S^c)) ** ((delta-1)/delta) <= C Per(S)``.
    """

    delta: Fraction | float
    min_ratio: float
    witness: Subset
    witness_perimeter: Fraction
    witness_measure: Fraction
    witness_comeasure: Fraction
    mode: str
    alpha: str
    profile: dict[Fraction, Fraction] = field(repr=False, default_factory=dict)
    conditions: PowerConditions | None = None
    certified: bool | None = None

    @property
    def rho(self) -> float | None:
        return None if self.conditions is None else self.conditions.rho

    @property
    def p(self) -> Fraction | None:
        return None if self.conditions is None else self.conditions.p

    @property
    def c(self) -> Fraction | None:
        return None if self.conditions is None else self.conditions.c

    @property
    def constant(self) -> float:
        return 1.0 / self.min_ratio if self.min_ratio > 0 else math.inf


def _alpha_label(alpha) -> str:
    if alpha is None:
        return "1/2"
    if isinstance(alpha, (list, tuple, np.ndarray)):
        return "[" + ",".join(str(Fraction(a)) for a in alpha) + "]"
    return str(Fraction(alpha))


def _report_from_profile(
    g: Graph, delta, nu, d, alpha, best_per, best_mask, w: _Weights, mode: str
) -> IsoReport:
    r = _exponent(delta)
    val, mask, _ = _best_bucket(best_per, best_mask, w.total, r, w.per_den, w.mu_den)
    if mask < 0:
        raise DomainError("no proper subset with positive measure on both sides")
    witness = Subset.from_bits(g, mask)
    mu = induced_vertex_measure(nu, alpha)
    per = perimeter(witness, nu, d)
    profile = {
        Fraction(m, w.mu_den): Fraction(int(best_per[m]), w.per_den)
        for m in range(w.total + 1)
        if best_per[m] < _kernels.INF
    }
    return IsoReport(
        delta=as_delta(delta),
        min_ratio=_ratio(per, min(mu.of(witness), mu.of(witness.complement())), r),
        witness=witness,
        witness_perimeter=per,
        witness_measure=mu.of(witness),
        witness_comeasure=mu.of(witness.complement()),
        mode=mode,
        alpha=_alpha_label(alpha),
        profile=profile,
    )


def min_iso_ratio(
    g: Graph,
    delta,
    nu: EdgeMeasure,
    d: GeodesicMetric,
    alpha=None,
    mode: str = "exhaustive",
    caps: Caps = DEFAULT_CAPS,
    backend: str | None = None,
) -> IsoReport:
    """Global minimum of :func:`iso_ratio` with a canonical witness.

    Among minimisers the witness is the one with the least bitmask
    (vertex ``v`` is bit ``v``). ``mode="power"`` is handled by
    :func:`min_iso_ratio_power`, which needs the base graph.
    """
    w = _scan_weights(nu, d, alpha)
    if mode == "exhaustive":
        _check_scan(g, g.n_vertices, caps, w.total + 1)
        best_per, best_mask = _kernels.subset_profile(
            g, np.arange(g.n_vertices), np.zeros(g.n_vertices, bool), w.per_w, w.vertex_w, w.total, backend
        )
    elif mode == "connected":
        if g.n_vertices > _MAX_KERNEL_VERTICES:
            raise ResourceCapError("connected scans are limited to 62 vertices")
        masks = list(connected_subset_bits(g, caps))
        best_per, best_mask = _profile_from_masks(g, masks, w)
    else:
        raise ValueError(f"unknown mode {mode!r}; use min_iso_ratio_power for powers")
    return _report_from_profile(g, delta, nu, d, alpha, best_per, best_mask, w, mode)


def exact_profile(
    g: Graph, nu: EdgeMeasure, d: GeodesicMetric, alpha=None, caps: Caps = DEFAULT_CAPS
) -> dict[Fraction, Fraction]:
    """Least perimeter for every measure value attained by some subset."""
    w = _scan_weights(nu, d, alpha)
    _check_scan(g, g.n_vertices, caps, w.total + 1)
    best_per, _ = _kernels.subset_profile(
        g, np.arange(g.n_vertices), np.zeros(g.n_vertices, bool), w.per_w, w.vertex_w, w.total
    )
    return {
        Fraction(m, w.mu_den): Fraction(int(best_per[m]), w.per_den)
        for m in range(w.total + 1)
        if best_per[m] < _kernels.INF
    }


def min_inf_alpha_ratio(
    g: Graph,
    delta,
    nu: EdgeMeasure,
    d: GeodesicMetric,
    two_sided: bool = True,
    avoid_endpoints: bool = False,
    caps: Caps = DEFAULT_CAPS,
    backend: str | None = None,
) -> tuple[float, Subset]:
    """Minimum over subsets of :func:`inf_alpha_ratio`, with a witness.

    ``avoid_endpoints`` restricts to nonempty subsets missing the source
    and sink, as in the one-sided quantity taken over interior sets.
    """
    c = [m / x for m, x in zip(nu.mass, d.lengths)]
    per_den = common_denominator(c)
    nu_den = common_denominator(nu.mass)
    per_w = [int(x * per_den) for x in c]
    nu_w = [int(x * nu_den) for x in nu.mass]
    free = [v for v in g.vertices if not (avoid_endpoints and v in (g.source, g.sink))]
    _check_scan(g, len(free), caps, 0)
    val, mask = _kernels.subset_inf_scan(
        g, free, np.zeros(g.n_vertices, bool), per_w, nu_w, per_den, sum(nu_w),
        _exponent(delta), two_sided, backend,
    )
    witness = Subset.from_bits(g, mask)
    return inf_alpha_ratio(witness, delta, nu, d, two_sided), witness


# ------------------------------------------------------------ power conditions


@dataclass(frozen=True)
class PowerConditions:
    """The two numbers that decide uniform isoperimetry of all slash powers.

    ``rho`` is ``min_e nu(e)**(1/delta) / d(e)`` and ``p`` the least
    perimeter of a set separating source from sink; ``c`` is the least
    perimeter of any proper nonempty set.
    """

    delta: Fraction | float
    rho: float
    rho_edge: int
    rho_at_least_one: bool
    p: Fraction
    p_witness: Subset
    c: Fraction
    c_witness: Subset

    @property
    def holds(self) -> bool:
        return self.rho_at_least_one and self.p >= 1


def _pattern_profiles(g: Graph, w: _Weights, backend=None):
    """Kernel profiles for each choice of (source in S, sink in S)."""
    interior = [v for v in g.vertices if v not in (g.source, g.sink)]
    out = {}
    for a in (0, 1):
        for b in (0, 1):
            base = np.zeros(g.n_vertices, bool)
            base[g.source], base[g.sink] = bool(a), bool(b)
            out[a, b] = _kernels.subset_profile(
                g, interior, base, w.per_w, w.vertex_w, w.total, backend
            )
    return out


def power_conditions(
    g: Graph, delta, nu: EdgeMeasure, d: GeodesicMetric, caps: Caps = DEFAULT_CAPS
) -> PowerConditions:
    if not g.is_st:
        raise DomainError("power conditions need an s-t graph")
    if not nu.is_probability or not nu.fully_supported:
        raise InvalidMeasureError("power conditions need a fully supported probability")
    if not d.is_normalized:
        raise InvalidMeasureError("power conditions need source-sink distance 1")
    delta = as_delta(delta)
    vals = [float(m) ** (1.0 / float(delta)) / float(x) for m, x in zip(nu.mass, d.lengths)]
    rho_edge = int(np.argmin(vals))
    if isinstance(delta, Fraction):
        # nu(e) ** (1/delta) >= d(e)  <=>  nu(e) ** q >= d(e) ** p for delta = p/q.
        ok = all(m**delta.denominator >= x**delta.numerator for m, x in zip(nu.mass, d.lengths))
    else:
        ok = min(vals) >= 1 - TOL
    w = _scan_weights(nu, d)
    _check_scan(g, g.n_vertices - 2, caps, w.total + 1)
    profiles = _pattern_profiles(g, w)
    full = (1 << g.n_vertices) - 1

    def least(patterns, exclude=()):
        best = (math.inf, -1)
        for pat in patterns:
            per, mask = profiles[pat]
            for m in range(w.total + 1):
                if per[m] >= _kernels.INF or int(mask[m]) in exclude:
                    continue
                best = min(best, (int(per[m]), int(mask[m])))
        return best

    p_num, p_mask = least([(1, 0), (0, 1)])
    c_num, c_mask = least([(0, 0), (1, 0), (0, 1), (1, 1)], exclude=(0, full))
    return PowerConditions(
        delta=delta,
        rho=vals[rho_edge],
        rho_edge=rho_edge,
        rho_at_least_one=ok,
        p=Fraction(p_num, w.per_den),
        p_witness=Subset.from_bits(g, p_mask),
        c=Fraction(c_num, w.per_den),
        c_witness=Subset.from_bits(g, c_mask),
    )


# ------------------------------------------------------------ power recursion


class _PowerTables:
    """Least-perimeter tables for slash powers, indexed by measure numerator.

    ``table(n, a, b)`` holds, for subsets of ``V(G^n)`` containing the
    source iff ``a`` and the sink iff ``b``, the least perimeter numerator
    (over ``per_den**n``) for each measure numerator (over
    ``mu_den * nu_den**(n-1)``).
    """

    def __init__(self, g: Graph, nu: EdgeMeasure, d: GeodesicMetric, alpha, caps: Caps, backend):
        self.g, self.caps, self.backend = g, caps, backend
        self.w = _scan_weights(nu, d, alpha)
        if self.w.total != self.w.mu_den:
            raise InvalidMeasureError("power recursion needs a probability measure")
        _check_scan(g, g.n_vertices - 2, caps, self.w.total + 1)
        self.nu_den = common_denominator(nu.mass)
        self.nu_num = [int(m * self.nu_den) for m in nu.mass]
        self.base = _pattern_profiles(g, self.w, backend)
        self.interior = [v for v in g.vertices if v not in (g.source, g.sink)]
        self.edges = g.edges
        self._tables = {1: {k: v[0] for k, v in self.base.items()}}

    def width(self, n: int) -> int:
        return self.w.total * self.nu_den ** (n - 1) + 1

    def _assignments(self, a: int, b: int):
        g = self.g
        k = len(self.interior)
        for code in range(1 << k):
            inside = {g.source: a, g.sink: b}
            for i, v in enumerate(self.interior):
                inside[v] = (code >> i) & 1
            yield code, inside

    def _scaled(self, n: int, e: int, pat):
        """Level ``n-1`` table of pattern ``pat`` placed in copy ``e`` of level ``n``."""
        src = self.table(n - 1, *pat)
        a_e, p_e = self.nu_num[e], int(self.w.per_w[e])
        out = np.full(a_e * (src.size - 1) + 1, _kernels.INF, dtype=np.int64)
        finite = src < _kernels.INF
        if finite.any() and int(src[finite].max()) * p_e * len(self.edges) >= _kernels.INF:
            raise ResourceCapError("perimeter numerators overflow int64")
        out[np.flatnonzero(finite) * a_e] = src[finite] * p_e
        return out

    def _chain(self, n: int, inside):
        acc = np.zeros(1, dtype=np.int64)
        args = []
        for e, (u, v) in enumerate(self.edges):
            acc, arg = _kernels.minplus_convolve(acc, self._scaled(n, e, (inside[u], inside[v])), self.backend)
            args.append(arg)
        return acc, args

    def table(self, n: int, a: int, b: int) -> np.ndarray:
        level = self._tables.setdefault(n, {})
        if (a, b) not in level:
            if self.width(n) > self.caps.frontier_width:
                raise ResourceCapError(f"measure table of width {self.width(n)} exceeds the cap")
            best = np.full(self.width(n), _kernels.INF, dtype=np.int64)
            for _, inside in self._assignments(a, b):
                acc, _ = self._chain(n, inside)
                np.minimum(best, acc, out=best)
            level[a, b] = best
        return level[a, b]

    def reconstruct(self, n: int, a: int, b: int, m: int, graphs: list[Graph]) -> set[int]:
        """Vertices of the right-nested power ``graphs[n-1]`` realising ``table(n,a,b)[m]``."""
        target = int(self.table(n, a, b)[m])
        if n == 1:
            mask = int(self.base[a, b][1][m])
            return {v for v in self.g.vertices if mask >> v & 1}
        for _, inside in self._assignments(a, b):
            acc, args = self._chain(n, inside)
            if int(acc[m]) != target:
                continue
            # Walk the convolution chain backwards to split m among copies.
            parts = []
            rest = m
            for e in reversed(range(len(self.edges))):
                i = int(args[e][rest])
                parts.append((e, (rest - i) // self.nu_num[e]))
                rest = i
            graph, inner = graphs[n - 1], graphs[n - 2]
            members = {v for v, flag in inside.items() if flag}
            members = {int(graph.outer_vertex_map[v]) for v in members}
            for e, sub_m in parts:
                u, v = self.edges[e]
                sub = self.reconstruct(n - 1, inside[u], inside[v], sub_m, graphs)
                members |= {int(graph.embedding[e, x]) for x in sub}
            return members
        raise AssertionError("table entry has no realising assignment")


def min_iso_ratio_power(
    g: Graph,
    n: int,
    delta,
    nu: EdgeMeasure,
    d: GeodesicMetric,
    alpha=None,
    caps: Caps = DEFAULT_CAPS,
    backend: str | None = None,
    power: Graph | None = None,
) -> IsoReport:
    """Exact minimum of the ratio on the left-nested power ``G^n``.

    ``alpha`` must be constant. The witness is reported on ``power`` (built
    with :func:`oslash_power` when not given) with measure and metric the
    word-wise products of ``nu`` and ``d``.
    """
    if alpha is not None and isinstance(alpha, (list, tuple, np.ndarray)):
        raise DomainError("the power recursion supports a constant alpha only")
    tables = _PowerTables(g, nu, d, alpha, caps, backend)
    width = tables.width(n)
    mu_den = tables.w.total * tables.nu_den ** (n - 1)
    per_den = tables.w.per_den**n
    r = _exponent(delta)
    best = (math.inf, None)
    combined = np.full(width, _kernels.INF, dtype=np.int64)
    for a in (0, 1):
        for b in (0, 1):
            tab = tables.table(n, a, b)
            np.minimum(combined, tab, out=combined)
            for m in range(1, width - 1):
                p = int(tab[m])
                if p >= _kernels.INF:
                    continue
                val = (p / per_den) / (min(m, mu_den - m) / mu_den) ** r
                if val < best[0]:
                    best = (val, (a, b, m))
    if best[1] is None:
        raise DomainError("no proper subset with positive measure on both sides")
    a, b, m = best[1]
    right = [g]
    for _ in range(n - 1):
        right.append(oslash_product(g, right[-1], caps))
    members = tables.reconstruct(n, a, b, m, right)
    left = power if power is not None else oslash_power(g, n, caps)
    vmap = reassociation_map(right[-1], left)
    witness = Subset.of(left, sorted(int(vmap[v]) for v in members))
    nu_n = power_edge_measure(nu, left)
    d_n = power_metric(d, left)
    mu_n = induced_vertex_measure(nu_n, alpha)
    per = perimeter(witness, nu_n, d_n)
    profile = {Fraction(i, mu_den): Fraction(int(p), per_den) for i, p in enumerate(combined) if p < _kernels.INF}
    return IsoReport(
        delta=as_delta(delta),
        min_ratio=_ratio(per, min(mu_n.of(witness), mu_n.of(witness.complement())), r),
        witness=witness,
        witness_perimeter=per,
        witness_measure=mu_n.of(witness),
        witness_comeasure=mu_n.of(witness.complement()),
        mode="power",
        alpha=_alpha_label(alpha),
        profile=profile,
    )


# ------------------------------------------------------------ certification


@dataclass(frozen=True)
class Certification:
    """Outcome of checking uniform isoperimetry for every slash power.

    ``certified`` requires the power conditions and, at each requested
    level, a minimum ratio of at least ``c`` (up to 1e-12 relative).
    ``witness`` is the failing set when certification fails and the last
    level's minimiser otherwise.
    """

    conditions: PowerConditions
    dimension: Fraction | float
    reports: dict[int, IsoReport]
    certified: bool
    reason: str
    witness: Subset

    @property
    def constant(self) -> Fraction:
        return 1 / self.conditions.c


def certify_power(
    g: Graph,
    delta,
    nu: EdgeMeasure,
    d: GeodesicMetric,
    levels=(1,),
    caps: Caps = DEFAULT_CAPS,
    backend: str | None = None,
    mode: str = "auto",
    alpha=None,
) -> Certification:
    """Power conditions plus the exact minimum ratio at each level.

    ``mode="auto"`` scans every subset when ``G^n`` has at most
    ``caps.exhaustive_vertices`` vertices and runs the power recursion
    otherwise; ``"exhaustive"``, ``"connected"`` and ``"power"`` force one.
    """
    if mode not in ("auto", "exhaustive", "connected", "power"):
        raise ValueError(f"unknown mode {mode!r}")
    conditions = power_conditions(g, delta, nu, d, caps)
    reports = {}
    for n in levels:
        power = g if n == 1 else oslash_power(g, n, caps)
        how = mode
        if how == "auto":
            how = "exhaustive" if power.n_vertices <= caps.exhaustive_vertices else "power"
        if how == "power":
            reports[n] = min_iso_ratio_power(g, n, delta, nu, d, alpha, caps=caps, backend=backend, power=power)
        else:
            pnu = nu if n == 1 else power_edge_measure(nu, power)
            pd = d if n == 1 else power_metric(d, power)
            reports[n] = min_iso_ratio(power, delta, pnu, pd, alpha, mode=how, caps=caps, backend=backend)
    floor = float(conditions.c)
    low = [n for n, rep in reports.items() if rep.min_ratio < floor * (1 - TOL)]
    if not conditions.rho_at_least_one:
        e = conditions.rho_edge
        reason = f"rho < 1 at edge {g.edge_labels[e]}"
        witness = Subset.of(g, [x for x in g.vertices if x not in (g.source, g.sink)])
        ok = False
    elif conditions.p < 1:
        reason = f"p = {conditions.p} < 1"
        witness = conditions.p_witness
        ok = False
    elif low:
        reason = f"min ratio below c at level {low[0]}"
        witness = reports[low[0]].witness
        ok = False
    else:
        reason = "conditions hold"
        witness = reports[max(reports)].witness if reports else conditions.c_witness
        ok = True
    reports = {n: replace(rep, conditions=conditions, certified=ok) for n, rep in reports.items()}
    return Certification(conditions, iso_dimension(nu, d), reports, ok, reason, witness)


# ------------------------------------------------------------ witness families


@dataclass(frozen=True)
class WitnessStep:
    n: int
    subset: Subset
    perimeter: Fraction
    predicted_perimeter: Fraction
    measure: Fraction
    comeasure: Fraction
    ratio: float


@dataclass(frozen=True)
class WitnessFamily:
    """Sets on ``G^n`` whose ratio tends to 0 when a power condition fails.

    ``case`` is ``"rho"`` (a light edge), ``"singleton"`` (the separating
    minimiser is a single endpoint) or ``"split"`` (both sides of the
    separating minimiser have at least two vertices).
    """

    case: str
    seed: Subset
    factor: Fraction | float
    steps: list[WitnessStep]


def _step(n, subset, power, nu, d, alpha, delta, predicted) -> WitnessStep:
    nu_n = power_edge_measure(nu, power)
    d_n = power_metric(d, power)
    mu = induced_vertex_measure(nu_n, alpha)
    m, mc = mu.of(subset), mu.of(subset.complement())
    per = perimeter(subset, nu_n, d_n)
    return WitnessStep(n, subset, per, predicted, m, mc, _ratio(per, min(m, mc), _exponent(delta)))


def witness_family(
    g: Graph,
    delta,
    nu: EdgeMeasure,
    d: GeodesicMetric,
    levels=(1, 2, 3),
    caps: Caps = DEFAULT_CAPS,
) -> WitnessFamily | None:
    """Explicit sets driving the ratio to zero, or None when both conditions hold."""
    cond = power_conditions(g, delta, nu, d, caps)
    c = [m / x for m, x in zip(nu.mass, d.lengths)]
    powers: dict[int, Graph] = {}

    def power(n):
        if n not in powers:
            powers[n] = oslash_power(g, n, caps)
        return powers[n]

    steps = []
    if not cond.rho_at_least_one:
        e = cond.rho_edge
        interior = [v for v in g.vertices if v not in (g.source, g.sink)]
        seed = Subset.of(g, interior)
        for n in levels:
            # e^(n-1) (x) interior, inside G^(n-1) (x) G.
            if n == 1:
                subset = seed
            else:
                outer = power(n - 1).word_index[(e,) * (n - 1)]
                subset = Subset.of(power(n), [int(power(n).embedding[outer, u]) for u in interior])
            predicted = c[e] ** (n - 1) * perimeter(seed, nu, d)
            steps.append(_step(n, subset, power(n), nu, d, None, delta, predicted))
        factor = cond.rho
        return WitnessFamily("rho", seed, factor, steps)
    if cond.p >= 1:
        return None
    seed = cond.p_witness
    if g.source not in seed:
        seed = seed.complement()
    if len(seed) == 1 or len(seed.complement()) == 1:
        at_source = len(seed) == 1
        endpoint = g.source if at_source else g.sink
        if at_source:
            candidates = [e for e in g.out_edges[endpoint] if g.out_edges[int(g.dst[e])]]
        else:
            candidates = [e for e in g.in_edges[endpoint] if g.in_edges[int(g.src[e])]]
        e0 = candidates[0]
        if at_source:
            first = sum((c[e] for e in g.out_edges[endpoint] if e != e0), Fraction(0))
            first += sum((c[e] for e in g.out_edges[int(g.dst[e0])]), Fraction(0))
        else:
            first = sum((c[e] for e in g.in_edges[endpoint] if e != e0), Fraction(0))
            first += sum((c[e] for e in g.in_edges[int(g.src[e0])]), Fraction(0))
        base_per = cond.p
        for n in levels:
            pw = power(n)
            verts = set()
            for i, word in enumerate(pw.edge_words):
                if word[0] == e0:
                    verts.update((int(pw.src[i]), int(pw.dst[i])))
            subset = Subset.of(pw, sorted(verts))
            steps.append(_step(n, subset, pw, nu, d, None, delta, first * base_per ** (n - 1)))
        return WitnessFamily("singleton", seed, base_per, steps)
    # Both sides have two or more vertices: recurse copy by copy.
    right = {1: g}
    sets = {1: set(seed.members)}
    top = max(levels)
    for n in range(2, top + 1):
        right[n] = oslash_product(g, right[n - 1], caps)
        prev = sets[n - 1]
        prev_c = set(right[n - 1].vertices) - prev
        members = set()
        for e, (u, v) in enumerate(g.edges):
            if u in seed and v in seed:
                part = set(right[n - 1].vertices)
            elif u in seed:
                part = prev
            elif v in seed:
                part = prev_c
            else:
                part = set()
            members |= {int(right[n].embedding[e, x]) for x in part}
        sets[n] = members
    for n in levels:
        pw = power(n)
        vmap = reassociation_map(right[n], pw) if n > 1 else np.arange(g.n_vertices)
        subset = Subset.of(pw, sorted(int(vmap[x]) for x in sets[n]))
        steps.append(_step(n, subset, pw, nu, d, None, delta, cond.p**n))
    return WitnessFamily("split", seed, cond.p, steps)


# ------------------------------------------------------------ identities


def _levels(f: VertexFunction) -> list[Fraction]:
    return sorted(set(f.values) | {Fraction(0)})


def superlevel(f: VertexFunction, t) -> Subset:
    return Subset.of(f.graph, [v for v in f.graph.vertices if f.values[v] > t])


def coarea_sides(f: VertexFunction, nu: EdgeMeasure, d: GeodesicMetric) -> tuple[Fraction, Fraction]:
    """``(||f||_{W11}, integral of Per({f > t}) dt)`` for ``f >= 0``."""
    if any(x < 0 for x in f.values):
        raise DomainError("coarea needs a nonnegative function")
    lhs = sobolev_seminorm(f, 1, nu, d)
    ts = _levels(f)
    rhs = Fraction(0)
    for lo, hi in zip(ts, ts[1:]):
        rhs += (hi - lo) * perimeter(superlevel(f, lo), nu, d)
    return lhs, rhs


def coarea_check(f: VertexFunction, nu: EdgeMeasure, d: GeodesicMetric) -> bool:
    lhs, rhs = coarea_sides(f, nu, d)
    return lhs == rhs


def layer_cake(f: VertexFunction) -> VertexFunction:
    """Rebuild ``f >= 0`` as a sum of indicator functions of its superlevel sets."""
    if any(x < 0 for x in f.values):
        raise DomainError("layer cake needs a nonnegative function")
    ts = _levels(f)
    total = [Fraction(0)] * f.graph.n_vertices
    for lo, hi in zip(ts, ts[1:]):
        ind = indicator(f.graph, superlevel(f, lo))
        total = [a + (hi - lo) * b for a, b in zip(total, ind.values)]
    return vertex_function(f.graph, total)


def layer_cake_check(f: VertexFunction) -> bool:
    return layer_cake(f) == f


def positive_part(f: VertexFunction) -> VertexFunction:
    return vertex_function(f.graph, [max(x, 0) for x in f.values])


def negative_part(f: VertexFunction) -> VertexFunction:
    return vertex_function(f.graph, [max(-x, 0) for x in f.values])


def expectation(f: VertexFunction, mu: VertexMeasure) -> Fraction:
    return sum(f.values * mu.mass, Fraction(0)) / mu.total


def sobolev_sides(
    f: VertexFunction, delta, c, nu: EdgeMeasure, d: GeodesicMetric, mu: VertexMeasure
) -> tuple[float, float]:
    """``(||f - E f||_{L_delta'(mu)}, 2 C ||f||_{W11})`` with ``delta' = delta/(delta-1)``."""
    delta = as_delta(delta)
    mean = expectation(f, mu)
    centered = vertex_function(f.graph, [x - mean for x in f.values])
    p = math.inf if delta == 1 else float(delta) / (float(delta) - 1)
    lhs = float(lp_norm(centered, mu, p))
    rhs = 2 * float(c) * float(sobolev_seminorm(f, 1, nu, d))
    return lhs, rhs


def sobolev_check(f, delta, c, nu, d, mu, slack: float = 1e-9) -> bool:
    lhs, rhs = sobolev_sides(f, delta, c, nu, d, mu)
    return lhs <= rhs + slack


def median(f: VertexFunction, mu: VertexMeasure) -> Fraction:
    """Least value ``m`` of ``f`` with both ``mu(f > m)`` and ``mu(f < m)`` at most 1/2."""
    if not mu.is_probability:
        raise InvalidMeasureError("median needs a probability measure")
    half = Fraction(1, 2)
    for m in sorted(set(f.values)):
        above = sum((w for x, w in zip(f.values, mu.mass) if x > m), Fraction(0))
        below = sum((w for x, w in zip(f.values, mu.mass) if x < m), Fraction(0))
        if above <= half and below <= half:
            return m
    raise AssertionError("a weighted median always exists in the range")
