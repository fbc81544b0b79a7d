import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from helpers import rationals, vertex_functions
from slashgraph.errors import InvalidMeasureError
from slashgraph.functions import (
    edge_function,
    gradient,
    indicator,
    inner,
    lipschitz_constant,
    lp_norm,
    sobolev_seminorm,
    vertex_function,
)
from slashgraph.graph import diamond_graph, oslash_power, path_graph
from slashgraph.measures import edge_measure, induced_vertex_measure, power_edge_measure, power_metric, standard_metric, uniform_edge_measure

F = Fraction
P2 = path_graph(2)
D22 = diamond_graph(2, 2)
D22_2 = oslash_power(D22, 2)


def test_gradient_constant_is_zero():
    f = vertex_function(D22, [3] * 4)
    assert gradient(f, standard_metric(D22)).is_zero


def test_gradient_indicator_of_sink():
    f = indicator(P2, [P2.sink])
    assert list(gradient(f, standard_metric(P2)).values) == [0, 2]


@given(vertex_functions(D22_2), vertex_functions(D22_2), rationals, rationals)
def test_gradient_linear(f, g, a, b):
    d = power_metric(standard_metric(D22), D22_2)
    assert gradient(f * a + g * b, d) == gradient(f, d) * a + gradient(g, d) * b


def test_seminorm_examples():
    f = indicator(P2, [P2.sink])
    nu, d = uniform_edge_measure(P2), standard_metric(P2)
    assert sobolev_seminorm(f, 1, nu, d) == 1
    assert sobolev_seminorm(f, math.inf, nu, d) == 2 == lipschitz_constant(f, d)
    assert sobolev_seminorm(f, 2, nu, d) == pytest.approx(math.sqrt(2))


def test_seminorm_rejects_small_p():
    f = indicator(P2, [P2.sink])
    with pytest.raises(InvalidMeasureError):
        sobolev_seminorm(f, F(1, 2), uniform_edge_measure(P2), standard_metric(P2))


@given(vertex_functions(D22_2))
def test_sup_seminorm_is_lipschitz_when_fully_supported(f):
    nu = power_edge_measure(uniform_edge_measure(D22), D22_2)
    d = power_metric(standard_metric(D22), D22_2)
    assert sobolev_seminorm(f, math.inf, nu, d) == lipschitz_constant(f, d)


def test_sup_seminorm_ignores_null_edges():
    nu = edge_measure(P2, [1, 0])
    f = indicator(P2, [P2.sink])
    d = standard_metric(P2)
    assert sobolev_seminorm(f, math.inf, nu, d) == 0 < lipschitz_constant(f, d)


@given(vertex_functions(D22), vertex_functions(D22))
def test_inner_symmetric_and_exact(f, g):
    mu = induced_vertex_measure(uniform_edge_measure(D22))
    assert inner(f, g, mu) == inner(g, f, mu)
    assert inner(f, f, mu) == lp_norm(f * f, mu, 1)


def test_function_type_must_match_measure():
    f = edge_function(D22, [1, 2, 3, 4])
    with pytest.raises(InvalidMeasureError):
        lp_norm(f, induced_vertex_measure(uniform_edge_measure(D22)), 1)


@pytest.mark.parametrize("p", [1, 2, 3, math.inf])
def test_lp_norm_of_constant(p):
    mu = induced_vertex_measure(uniform_edge_measure(D22))
    assert float(lp_norm(vertex_function(D22, [F(-3, 2)] * 4), mu, p)) == pytest.approx(1.5)
