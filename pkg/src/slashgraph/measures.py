"""Edge and vertex measures, edge weights in (0, 1), and geodesic metrics.

All masses and lengths are exact ``Fraction`` objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import InvalidGraphError, InvalidMeasureError, NonGeodesicError
from .exact import as_fraction, common_denominator, fraction_array
from .graph import Graph, Morphism, vertex_levels

HALF = Fraction(1, 2)


@dataclass(frozen=True, eq=False)
class EdgeMeasure:
    graph: Graph
    mass: np.ndarray

    @property
    def total(self) -> Fraction:
        return sum(self.mass, Fraction(0))

    @property
    def is_probability(self) -> bool:
        return self.total == 1

    @property
    def fully_supported(self) -> bool:
        return all(m > 0 for m in self.mass)

    def __getitem__(self, e: int) -> Fraction:
        return self.mass[e]


@dataclass(frozen=True, eq=False)
class VertexMeasure:
    graph: Graph
    mass: np.ndarray

    @property
    def total(self) -> Fraction:
        return sum(self.mass, Fraction(0))

    @property
    def is_probability(self) -> bool:
        return self.total == 1

    @property
    def fully_supported(self) -> bool:
        return all(m > 0 for m in self.mass)

    def __getitem__(self, v: int) -> Fraction:
        return self.mass[v]

    def of(self, subset) -> Fraction:
        return sum(self.mass[list(subset.members)], Fraction(0))


def _masses(values: Sequence, size: int, what: str) -> np.ndarray:
    arr = fraction_array(values)
    if arr.shape != (size,):
        raise InvalidMeasureError(f"{what} needs {size} masses, got {arr.shape[0]}")
    if any(m < 0 for m in arr):
        raise InvalidMeasureError(f"{what} has a negative mass")
    arr.setflags(write=False)
    return arr


def edge_measure(g: Graph, masses: Sequence) -> EdgeMeasure:
    return EdgeMeasure(g, _masses(masses, g.n_edges, "edge measure"))


def vertex_measure(g: Graph, masses: Sequence) -> VertexMeasure:
    return VertexMeasure(g, _masses(masses, g.n_vertices, "vertex measure"))


def uniform_edge_measure(g: Graph) -> EdgeMeasure:
    return edge_measure(g, [Fraction(1, g.n_edges)] * g.n_edges)


def laakso_weighted_measure(g: Graph) -> EdgeMeasure:
    """Mass 1/4 on the two outer edges and 1/8 on the four middle ones."""
    if g.n_edges != 6:
        raise InvalidMeasureError("expects the six-edge Laakso graph")
    q, e = Fraction(1, 4), Fraction(1, 8)
    return edge_measure(g, [q, e, e, e, e, q])


def check_alpha(g: Graph, alpha) -> np.ndarray:
    """Normalise an edge weight into an array of Fractions strictly in (0, 1).

    ``None`` means the constant 1/2, a scalar means that constant.
    """
    if alpha is None:
        alpha = HALF
    if not isinstance(alpha, (list, tuple, np.ndarray)):
        alpha = [alpha] * g.n_edges
    arr = fraction_array(alpha)
    if arr.shape != (g.n_edges,):
        raise InvalidMeasureError("alpha needs one value per edge")
    if any(not (0 < a < 1) for a in arr):
        raise InvalidMeasureError("alpha values must lie strictly between 0 and 1")
    return arr


def induced_vertex_measure(nu: EdgeMeasure, alpha=None) -> VertexMeasure:
    """Split each edge mass between head (``alpha``) and tail (``1 - alpha``).

    With ``alpha = 1/2`` and a uniform edge measure this is the degree
    measure ``deg(x) / (2|E|)``.
    """
    g = nu.graph
    a = check_alpha(g, alpha)
    mass = [Fraction(0)] * g.n_vertices
    for e, (u, v) in enumerate(g.edges):
        mass[v] += nu.mass[e] * a[e]
        mass[u] += nu.mass[e] * (1 - a[e])
    return vertex_measure(g, mass)


def oslash_edge_measure(nu_h: EdgeMeasure, nu_g: EdgeMeasure, product: Graph) -> EdgeMeasure:
    """Product mass ``nu_h(e) nu_g(f)`` on edge ``e (x) f``."""
    if product.n_edges != nu_h.graph.n_edges * nu_g.graph.n_edges:
        raise InvalidMeasureError("product graph does not match the factor measures")
    mass = np.outer(nu_h.mass, nu_g.mass).ravel()
    return edge_measure(product, mass)


def oslash_vertex_measure(nu_h: EdgeMeasure, mu_g: VertexMeasure, product: Graph) -> VertexMeasure:
    """Each copy ``e (x) G`` receives ``nu_h(e) mu_g``; glued vertices add up."""
    emb = product.embedding
    if emb is None or emb.shape != (nu_h.graph.n_edges, mu_g.graph.n_vertices):
        raise InvalidMeasureError("product graph does not match the factor measures")
    mass = [Fraction(0)] * product.n_vertices
    for e in range(emb.shape[0]):
        for u in range(emb.shape[1]):
            mass[emb[e, u]] += nu_h.mass[e] * mu_g.mass[u]
    return vertex_measure(product, mass)


def power_edge_measure(nu: EdgeMeasure, power: Graph) -> EdgeMeasure:
    """Mass of each power edge as the product of base masses along its word."""
    base = nu.mass
    mass = []
    for word in power.edge_words:
        m = Fraction(1)
        for i in word:
            m *= base[i]
        mass.append(m)
    return edge_measure(power, mass)


def pushforward_measure(theta: Morphism, nu: EdgeMeasure) -> EdgeMeasure:
    if (theta.edge_map < 0).any():
        raise InvalidMeasureError("pushforward needs a morphism")
    mass = [Fraction(0)] * theta.codomain.n_edges
    for e, f in enumerate(theta.edge_map.tolist()):
        mass[f] += nu.mass[e]
    return edge_measure(theta.codomain, mass)


def path_edge_order(g: Graph) -> list[int]:
    """Edges of a directed path listed from source to sink."""
    level = vertex_levels(g)
    if level is None or int(level[g.sink]) != g.n_edges or g.n_vertices != g.n_edges + 1:
        raise InvalidGraphError("graph is not a directed path")
    return sorted(range(g.n_edges), key=lambda e: int(level[g.src[e]]))


def is_reflection_invariant(nu: EdgeMeasure) -> bool:
    """True when the masses along a path read the same from both ends."""
    order = path_edge_order(nu.graph)
    seq = [nu.mass[e] for e in order]
    return seq == seq[::-1]


# ------------------------------------------------------------------ metrics


@dataclass(frozen=True, eq=False)
class GeodesicMetric:
    """Shortest-path metric of the undirected graph with given edge lengths.

    Distances are stored as integers over the common denominator ``scale``
    of the lengths, so every value is exact.
    """

    graph: Graph
    lengths: np.ndarray
    scale: int
    dist_num: np.ndarray

    def dist(self, u: int, v: int) -> Fraction:
        return Fraction(int(self.dist_num[u, v]), self.scale)

    def __getitem__(self, e: int) -> Fraction:
        return self.lengths[e]

    @cached_property
    def matrix(self) -> np.ndarray:
        out = np.empty(self.dist_num.shape, dtype=object)
        for idx, val in np.ndenumerate(self.dist_num):
            out[idx] = Fraction(int(val), self.scale)
        return out

    @property
    def is_normalized(self) -> bool:
        g = self.graph
        return g.is_st and self.dist(g.source, g.sink) == 1


def geodesic_metric(g: Graph, lengths: Sequence) -> GeodesicMetric:
    """All-pairs shortest paths, rejecting lengths that are not geodesic.

    Lengths are scaled to integers, so the floating point shortest-path
    routine is exact as long as every distance stays below 2**53.
    """
    arr = fraction_array(lengths)
    if arr.shape != (g.n_edges,):
        raise InvalidMeasureError(f"need {g.n_edges} edge lengths")
    if any(x <= 0 for x in arr):
        raise InvalidMeasureError("edge lengths must be positive")
    arr.setflags(write=False)
    scale = common_denominator(arr)
    w = np.asarray([int(x * scale) for x in arr], dtype=np.int64)
    if int(w.sum()) >= 2**53:
        raise InvalidMeasureError("edge lengths too fine for exact distances")
    n = g.n_vertices
    adj = coo_matrix((w.astype(np.float64), (g.src, g.dst)), shape=(n, n)).tocsr()
    dist = shortest_path(adj, method="D", directed=False)
    dist_num = np.rint(dist).astype(np.int64)
    bad = np.flatnonzero(dist_num[g.src, g.dst] != w)
    if bad.size:
        e = int(bad[0])
        raise NonGeodesicError(
            f"edge {e} has length {arr[e]} but its endpoints are "
            f"{Fraction(int(dist_num[g.src[e], g.dst[e]]), scale)} apart",
            e,
        )
    dist_num.setflags(write=False)
    return GeodesicMetric(g, arr, scale, dist_num)


def standard_lengths(g: Graph) -> list[Fraction]:
    """Equal lengths ``1/L`` where ``L`` is the source-sink level count.

    Requires a graded s-t graph; then every edge has length ``1/L`` and the
    source and sink are at distance 1.
    """
    level = vertex_levels(g)
    if level is None:
        raise InvalidGraphError("standard lengths need a graded s-t graph")
    return [Fraction(1, int(level[g.sink]))] * g.n_edges


def standard_metric(g: Graph) -> GeodesicMetric:
    return geodesic_metric(g, standard_lengths(g))


def oslash_metric(d_h: GeodesicMetric, d_g: GeodesicMetric, product: Graph) -> GeodesicMetric:
    """Geodesic metric with lengths ``d_h(e) d_g(f)``; ``d_g`` must be normalised."""
    if not d_g.is_normalized:
        raise InvalidMeasureError("right factor metric must have source-sink distance 1")
    if product.n_edges != d_h.graph.n_edges * d_g.graph.n_edges:
        raise InvalidMeasureError("product graph does not match the factor metrics")
    return geodesic_metric(product, np.outer(d_h.lengths, d_g.lengths).ravel())


def power_metric(d: GeodesicMetric, power: Graph) -> GeodesicMetric:
    """Geodesic metric on a slash power with length the product along each word."""
    if not d.is_normalized:
        raise InvalidMeasureError("base metric must have source-sink distance 1")
    lengths = []
    for word in power.edge_words:
        x = Fraction(1)
        for i in word:
            x *= d.lengths[i]
        lengths.append(x)
    return geodesic_metric(power, lengths)


def ensure_probability(nu: EdgeMeasure) -> None:
    if not nu.is_probability:
        raise InvalidMeasureError(f"edge measure has total mass {nu.total}, expected 1")


def as_masses(values) -> list[Fraction]:
    return [as_fraction(v) for v in values]
