"""Exact 1-Wasserstein distances on finite spaces.

Three formulations, all exact rationals:

- ``w1_coupling``: transportation problem between the supports of the
  two measures, costs from a distance matrix;
- ``w1_beckmann``: cheapest flow along graph edges whose divergence is
  ``mu - nu``;
- ``w1_tree``: closed form on trees, summing edge length times the mass
  imbalance of the subtree below the edge.

Both flow problems are solved by successive shortest paths on integers
(masses and costs scaled by their common denominators).
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidGraphError, InvalidMeasureError
from .exact import as_fraction, common_denominator
from .graph import Graph
from .measures import GeodesicMetric, VertexMeasure


class NonMetricWarning(UserWarning):
    pass


# ------------------------------------------------------------ min-cost flow


def min_cost_flow(
    n: int, arcs: Sequence[tuple[int, int, int]], supply: Sequence[int]
) -> tuple[int, list[int]]:
    """Cheapest uncapacitated flow with ``out - in = supply`` at every node.

    ``arcs`` holds ``(tail, head, cost)`` with integer ``cost >= 0``;
    supplies are integers summing to zero. Returns the total cost and the
    flow on each arc. Every augmentation empties a source or fills a sink,
    so there are at most ``n`` Dijkstra rounds.
    """
    if sum(supply) != 0:
        raise InvalidMeasureError("supplies do not balance")
    if any(c < 0 for _, _, c in arcs):
        raise DomainError("arc costs must be nonnegative")
    big = sum(x for x in supply if x > 0)
    src, snk = n, n + 1
    # Residual arcs as parallel lists; arc i and i ^ 1 are partners.
    head: list[int] = []
    cap: list[int] = []
    cost: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n + 2)]

    def add(u, v, c, w):
        adj[u].append(len(head))
        head.append(v)
        cap.append(c)
        cost.append(w)
        adj[v].append(len(head))
        head.append(u)
        cap.append(0)
        cost.append(-w)

    for u, v, w in arcs:
        add(u, v, big, w)
    for i, s in enumerate(supply):
        if s > 0:
            add(src, i, s, 0)
        elif s < 0:
            add(i, snk, -s, 0)
    pot = [0] * (n + 2)
    remaining = big
    total = 0
    while remaining:
        dist = [None] * (n + 2)
        prev = [-1] * (n + 2)
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            du, u = heapq.heappop(heap)
            if du != dist[u]:
                continue
            for a in adj[u]:
                if cap[a] <= 0:
                    continue
                v = head[a]
                nd = du + cost[a] + pot[u] - pot[v]
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    prev[v] = a
                    heapq.heappush(heap, (nd, v))
        if dist[snk] is None:
            raise InvalidMeasureError("demand cannot be reached from the supply")
        for v in range(n + 2):
            if dist[v] is not None:
                pot[v] += dist[v]
        push = remaining
        v = snk
        while v != src:
            a = prev[v]
            push = min(push, cap[a])
            v = head[a ^ 1]
        v = snk
        while v != src:
            a = prev[v]
            cap[a] -= push
            cap[a ^ 1] += push
            total += push * cost[a]
            v = head[a ^ 1]
        remaining -= push
    flows = [cap[2 * i + 1] for i in range(len(arcs))]
    return total, flows


# ------------------------------------------------------------ instances


@dataclass(frozen=True)
class TransportInstance:
    """Two probability vectors on points ``0..n-1`` and a distance matrix."""

    dist: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    graph: Graph | None = None
    lengths: np.ndarray | None = None

    @property
    def n_points(self) -> int:
        return len(self.mu)


def _probabilities(values, n: int, what: str) -> np.ndarray:
    arr = np.empty(n, dtype=object)
    items = [as_fraction(x) for x in values]
    if len(items) != n:
        raise InvalidMeasureError(f"{what} needs {n} masses")
    if any(x < 0 for x in items):
        raise InvalidMeasureError(f"{what} has a negative mass")
    if sum(items) != 1:
        raise InvalidMeasureError(f"{what} has total mass {sum(items)}, expected 1")
    arr[:] = items
    return arr


def metric_problems(dist: np.ndarray) -> list[str]:
    """Violations of the metric axioms, empty for a metric."""
    n = dist.shape[0]
    out = []
    for i in range(n):
        if dist[i, i] != 0:
            out.append(f"d({i},{i}) != 0")
        for j in range(n):
            if dist[i, j] != dist[j, i]:
                out.append(f"d({i},{j}) != d({j},{i})")
            if i != j and dist[i, j] <= 0:
                out.append(f"d({i},{j}) <= 0")
    num = np.array([[float(x) for x in row] for row in dist])
    viol = num[:, :, None] > num[:, None, :] + num.T[None, :, :] + 1e-12
    for i, j, k in zip(*np.nonzero(viol)):
        if dist[i, j] > dist[i, k] + dist[k, j]:
            out.append(f"d({i},{j}) > d({i},{k}) + d({k},{j})")
            break
    return out


def make_instance(dist, mu, nu) -> TransportInstance:
    if isinstance(dist, GeodesicMetric):
        graph, lengths, dist = dist.graph, dist.lengths, dist.matrix
    else:
        graph = lengths = None
        dist = np.array([[as_fraction(x) for x in row] for row in dist], dtype=object)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise DomainError("distance matrix must be square")
    if isinstance(mu, VertexMeasure):
        mu = mu.mass
    if isinstance(nu, VertexMeasure):
        nu = nu.mass
    n = dist.shape[0]
    return TransportInstance(dist, _probabilities(mu, n, "mu"), _probabilities(nu, n, "nu"), graph, lengths)


# ------------------------------------------------------------ formulations


@dataclass(frozen=True)
class W1Result:
    value: Fraction
    plan: dict[tuple[int, int], Fraction]


def w1_coupling(instance: TransportInstance) -> W1Result:
    """Optimal coupling between the supports; ``plan`` maps ``(x, y)`` to mass."""
    problems = metric_problems(instance.dist)
    if problems:
        warnings.warn("distance is not a metric: " + problems[0], NonMetricWarning, stacklevel=2)
    mu, nu = instance.mu, instance.nu
    left = [i for i in range(instance.n_points) if mu[i] > 0]
    right = [j for j in range(instance.n_points) if nu[j] > 0]
    mass_den = common_denominator(list(mu) + list(nu))
    dist_den = common_denominator(instance.dist[i, j] for i in left for j in right)
    supply = [int(mu[i] * mass_den) for i in left] + [-int(nu[j] * mass_den) for j in right]
    arcs = [
        (a, len(left) + b, int(instance.dist[i, j] * dist_den))
        for a, i in enumerate(left)
        for b, j in enumerate(right)
    ]
    total, flows = min_cost_flow(len(supply), arcs, supply)
    plan = {}
    for (a, b, _), f in zip(arcs, flows):
        if f:
            plan[left[a], right[b - len(left)]] = Fraction(f, mass_den)
    return W1Result(Fraction(total, mass_den * dist_den), plan)


def w1_beckmann(g: Graph, lengths, mu, nu) -> W1Result:
    """Cheapest edge flow with divergence ``mu - nu``; ``plan`` maps ``(u, v)`` to flow.

    Equals the transport cost for the geodesic metric of ``lengths``.
    """
    lengths = [as_fraction(x) for x in lengths]
    if len(lengths) != g.n_edges or any(x <= 0 for x in lengths):
        raise DomainError("need one positive length per edge")
    mu = _probabilities(mu.mass if isinstance(mu, VertexMeasure) else mu, g.n_vertices, "mu")
    nu = _probabilities(nu.mass if isinstance(nu, VertexMeasure) else nu, g.n_vertices, "nu")
    mass_den = common_denominator(list(mu) + list(nu))
    len_den = common_denominator(lengths)
    supply = [int((a - b) * mass_den) for a, b in zip(mu, nu)]
    arcs = []
    for (u, v), x in zip(g.edges, lengths):
        w = int(x * len_den)
        arcs += [(u, v, w), (v, u, w)]
    total, flows = min_cost_flow(g.n_vertices, arcs, supply)
    plan = {}
    for (u, v, _), f in zip(arcs, flows):
        if f:
            plan[u, v] = Fraction(f, mass_den)
    return W1Result(Fraction(total, mass_den * len_den), plan)


def w1_tree(g: Graph, lengths, mu, nu) -> Fraction:
    """Sum over edges of ``length * |mu(below) - nu(below)|`` on a tree."""
    if g.n_edges != g.n_vertices - 1:
        raise InvalidGraphError("w1_tree needs an acyclic graph")
    lengths = [as_fraction(x) for x in lengths]
    if len(lengths) != g.n_edges:
        raise DomainError("need one length per edge")
    mu = _probabilities(mu.mass if isinstance(mu, VertexMeasure) else mu, g.n_vertices, "mu")
    nu = _probabilities(nu.mass if isinstance(nu, VertexMeasure) else nu, g.n_vertices, "nu")
    indptr, nbr, eid = g.csr
    parent_edge = [-1] * g.n_vertices
    order = [0]
    seen = [False] * g.n_vertices
    seen[0] = True
    for u in order:
        for p in range(indptr[u], indptr[u + 1]):
            v = int(nbr[p])
            if not seen[v]:
                seen[v] = True
                parent_edge[v] = int(eid[p])
                order.append(v)
    excess = [a - b for a, b in zip(mu, nu)]
    total = Fraction(0)
    for v in reversed(order[1:]):
        e = parent_edge[v]
        total += lengths[e] * abs(excess[v])
        u = g.src[e] if g.dst[e] == v else g.dst[e]
        excess[int(u)] += excess[v]
    return total
