"""Rational-valued functions on vertices and edges, gradients and norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidMeasureError
from .exact import as_fraction, fraction_array
from .graph import Graph
from .measures import EdgeMeasure, GeodesicMetric, VertexMeasure


class _Function:
    graph: Graph
    values: np.ndarray

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        return (
            type(other) is type(self)
            and other.graph.same_as(self.graph)
            and all(a == b for a, b in zip(self.values, other.values))
        )

    def __hash__(self):
        return hash((type(self), id(self.graph), tuple(self.values)))

    def _new(self, values):
        return type(self)(self.graph, _frozen(values))

    def __add__(self, other):
        return self._new(self.values + other.values)

    def __sub__(self, other):
        return self._new(self.values - other.values)

    def __neg__(self):
        return self._new(-self.values)

    def __mul__(self, c):
        if isinstance(c, _Function):
            return self._new(self.values * c.values)
        return self._new(self.values * as_fraction(c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._new(self.values / as_fraction(c))

    @property
    def sup_norm(self) -> Fraction:
        return max((abs(x) for x in self.values), default=Fraction(0))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.values)


def _frozen(values) -> np.ndarray:
    arr = fraction_array(values)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class VertexFunction(_Function):
    graph: Graph
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class EdgeFunction(_Function):
    graph: Graph
    values: np.ndarray


def vertex_function(g: Graph, values: Sequence) -> VertexFunction:
    arr = _frozen(values)
    if arr.shape != (g.n_vertices,):
        raise ValueError(f"need {g.n_vertices} vertex values")
    return VertexFunction(g, arr)


def edge_function(g: Graph, values: Sequence) -> EdgeFunction:
    arr = _frozen(values)
    if arr.shape != (g.n_edges,):
        raise ValueError(f"need {g.n_edges} edge values")
    return EdgeFunction(g, arr)


def indicator(g: Graph, subset) -> VertexFunction:
    return vertex_function(g, [1 if v in subset else 0 for v in g.vertices])


def gradient(f: VertexFunction, d: GeodesicMetric) -> EdgeFunction:
    g = f.graph
    vals = (f.values[g.dst] - f.values[g.src]) / d.lengths
    return edge_function(g, vals)


def lipschitz_constant(f: VertexFunction, d: GeodesicMetric) -> Fraction:
    """Largest ``|f(e+) - f(e-)| / d(e)`` over edges.

    For a geodesic metric this equals the Lipschitz constant over all pairs.
    """
    return gradient(f, d).sup_norm


def integral(f: _Function, measure) -> Fraction:
    _check_pair(f, measure)
    return sum(f.values * measure.mass, Fraction(0))


def lp_norm(f: _Function, measure, p) -> Fraction | float:
    """``L_p`` norm; exact for ``p`` in {1, inf} and for ``p = 2`` squared values.

    ``p = inf`` is the maximum of ``|f|`` over the support of the measure.
    """
    _check_pair(f, measure)
    if p == math.inf:
        return max(
            (abs(x) for x, m in zip(f.values, measure.mass) if m > 0), default=Fraction(0)
        )
    if p == 1:
        return sum((abs(x) * m for x, m in zip(f.values, measure.mass)), Fraction(0))
    p = float(p)
    if p < 1:
        raise InvalidMeasureError("p must be at least 1")
    total = sum(float(abs(x)) ** p * float(m) for x, m in zip(f.values, measure.mass))
    return total ** (1.0 / p)


def sobolev_seminorm(f: VertexFunction, p, nu: EdgeMeasure, d: GeodesicMetric):
    """``||grad f||`` in ``L_p(nu)``: the W^{1,p} seminorm."""
    return lp_norm(gradient(f, d), nu, p)


def inner(f: _Function, g: _Function, measure) -> Fraction:
    _check_pair(f, measure)
    return sum(f.values * g.values * measure.mass, Fraction(0))


def minus_part(f: VertexFunction) -> EdgeFunction:
    """Edge function ``e -> f(e-)``."""
    return edge_function(f.graph, f.values[f.graph.src])


def plus_part(f: VertexFunction) -> EdgeFunction:
    """Edge function ``e -> f(e+)``."""
    return edge_function(f.graph, f.values[f.graph.dst])


def _check_pair(f: _Function, measure) -> None:
    if not measure.graph.same_as(f.graph):
        raise InvalidMeasureError("function and measure live on different graphs")
    expected = VertexMeasure if isinstance(f, VertexFunction) else EdgeMeasure
    if not isinstance(measure, expected):
        raise InvalidMeasureError(
            f"{type(f).__name__} must be paired with a {expected.__name__}"
        )
