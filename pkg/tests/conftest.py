import os

import pytest
from hypothesis import HealthCheck, settings

from slashgraph.graph import diamond_graph, laakso_graph, path_graph
from slashgraph.measures import standard_metric, uniform_edge_measure

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def d22():
    g = diamond_graph(2, 2)
    return g, uniform_edge_measure(g), standard_metric(g)


@pytest.fixture
def laakso():
    g = laakso_graph()
    return g, uniform_edge_measure(g), standard_metric(g)


@pytest.fixture
def p2():
    g = path_graph(2)
    return g, uniform_edge_measure(g), standard_metric(g)
