import random
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from helpers import probabilities
from slashgraph.errors import DomainError, InvalidGraphError, InvalidMeasureError
from slashgraph.graph import diamond_graph, laakso_graph, make_graph, oslash_power, path_graph
from slashgraph.measures import geodesic_metric, power_metric, standard_metric
from slashgraph.transport import (
    NonMetricWarning,
    make_instance,
    metric_problems,
    min_cost_flow,
    w1_beckmann,
    w1_coupling,
    w1_tree,
)

F = Fraction
D22 = diamond_graph(2, 2)


def lp_w1(dist, mu, nu):
    """Coupling LP solved in floating point by scipy."""
    n = len(mu)
    c = np.array([[float(x) for x in row] for row in dist]).ravel()
    a_eq = np.zeros((2 * n, n * n))
    for i in range(n):
        a_eq[i, i * n : (i + 1) * n] = 1
        a_eq[n + i, i::n] = 1
    b_eq = [float(x) for x in mu] + [float(x) for x in nu]
    res = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def random_probability(rng, n, support=None):
    idx = rng.sample(range(n), support or rng.randint(1, n))
    w = [0] * n
    for i in idx:
        w[i] = rng.randint(1, 9)
    return [F(x, sum(w)) for x in w]


def metric_for(name):
    if name == "P3":
        return standard_metric(path_graph(3))
    if name == "D22":
        return standard_metric(D22)
    if name == "D22^2":
        return power_metric(standard_metric(D22), oslash_power(D22, 2))
    return standard_metric(laakso_graph())


# ------------------------------------------------------------ examples


def test_p2_dirac_to_uniform():
    d = standard_metric(path_graph(2))
    mu = [F(1), F(0), F(0)]
    nu = [F(1, 3)] * 3
    inst = make_instance(d, mu, nu)
    assert w1_coupling(inst).value == F(1, 2)
    assert w1_beckmann(d.graph, d.lengths, mu, nu).value == F(1, 2)
    assert w1_tree(d.graph, d.lengths, mu, nu) == F(1, 2)


def test_p2_spread_example():
    d = standard_metric(path_graph(2))
    mu, nu = [F(1), 0, 0], [0, F(1, 2), F(1, 2)]
    inst = make_instance(d, mu, nu)
    assert w1_coupling(inst).value == F(3, 4)
    assert w1_beckmann(d.graph, d.lengths, mu, nu).value == F(3, 4)
    assert w1_tree(d.graph, d.lengths, mu, nu) == F(3, 4)


def test_diamond_source_to_sink():
    d = standard_metric(D22)
    mu = [1, 0, 0, 0]
    nu = [0, 0, 0, 1]
    res = w1_coupling(make_instance(d, mu, nu))
    assert res.value == 1
    assert res.plan == {(0, 3): 1}
    flow = w1_beckmann(D22, d.lengths, mu, nu)
    assert flow.value == 1
    assert sum(flow.plan.values()) == 2  # one unit along two edges


def test_identical_measures_cost_nothing():
    d = standard_metric(D22)
    mu = [F(1, 4)] * 4
    assert w1_coupling(make_instance(d, mu, mu)).value == 0
    assert w1_beckmann(D22, d.lengths, mu, mu).value == 0


@pytest.mark.parametrize("name", ["P3", "D22", "La"])
def test_dirac_masses_give_distance(name):
    d = metric_for(name)
    n = d.graph.n_vertices
    for x in range(n):
        for y in range(n):
            mu = [F(int(i == x)) for i in range(n)]
            nu = [F(int(i == y)) for i in range(n)]
            assert w1_coupling(make_instance(d, mu, nu)).value == d.matrix[x, y]
            assert w1_beckmann(d.graph, d.lengths, mu, nu).value == d.matrix[x, y]


# ------------------------------------------------------------ agreement


@pytest.mark.parametrize("name", ["P3", "D22", "D22^2", "La"])
def test_coupling_equals_flow(name):
    d = metric_for(name)
    n = d.graph.n_vertices
    rng = random.Random(name)
    for _ in range(100):
        mu, nu = random_probability(rng, n), random_probability(rng, n)
        coupling = w1_coupling(make_instance(d, mu, nu))
        flow = w1_beckmann(d.graph, d.lengths, mu, nu)
        assert coupling.value == flow.value
        # The plan is a coupling with the stated cost.
        rows = [sum((m for (i, _), m in coupling.plan.items() if i == x), F(0)) for x in range(n)]
        assert rows == mu
        assert sum(m * d.matrix[i, j] for (i, j), m in coupling.plan.items()) == coupling.value


@pytest.mark.parametrize("name", ["P3", "D22", "La"])
def test_coupling_matches_scipy_lp(name):
    d = metric_for(name)
    n = d.graph.n_vertices
    rng = random.Random(f"lp-{name}")
    for _ in range(30):
        mu, nu = random_probability(rng, n), random_probability(rng, n)
        exact = w1_coupling(make_instance(d, mu, nu)).value
        assert float(exact) == pytest.approx(lp_w1(d.matrix, mu, nu), abs=1e-9)


def random_tree(rng, n):
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    g = make_graph(n, edges, st_check="off")
    lengths = [F(rng.randint(1, 6), rng.randint(1, 3)) for _ in edges]
    return geodesic_metric(g, lengths)


def test_tree_formula_on_random_trees():
    rng = random.Random(11)
    for _ in range(100):
        d = random_tree(rng, rng.randint(2, 12))
        n = d.graph.n_vertices
        mu, nu = random_probability(rng, n), random_probability(rng, n)
        tree = w1_tree(d.graph, d.lengths, mu, nu)
        assert tree == w1_coupling(make_instance(d, mu, nu)).value
        assert tree == w1_beckmann(d.graph, d.lengths, mu, nu).value


def test_tree_rejects_cycles():
    d = standard_metric(D22)
    with pytest.raises(InvalidGraphError):
        w1_tree(D22, d.lengths, [1, 0, 0, 0], [0, 0, 0, 1])


# ------------------------------------------------------------ metric properties


@given(probabilities(4), probabilities(4), probabilities(4))
def test_w1_is_a_metric_on_measures(a, b, c):
    d = standard_metric(D22)

    def w(x, y):
        return w1_coupling(make_instance(d, x, y)).value

    assert w(a, b) == w(b, a)
    assert w(a, c) <= w(a, b) + w(b, c)
    assert (w(a, b) == 0) == (a == b)


@given(probabilities(3), probabilities(3), st.fractions(min_value=0, max_value=1))
def test_w1_is_convex_in_first_argument(a, b, t):
    d = standard_metric(path_graph(2))
    target = [F(1), 0, 0]
    mix = [t * x + (1 - t) * y for x, y in zip(a, b)]

    def w(x):
        return w1_coupling(make_instance(d, x, target)).value

    assert w(mix) <= t * w(a) + (1 - t) * w(b)


# ------------------------------------------------------------ validation


def test_mass_mismatch_rejected():
    d = standard_metric(D22)
    with pytest.raises(InvalidMeasureError, match="total mass"):
        make_instance(d, [F(1, 2), 0, 0, 0], [0, 0, 0, 1])
    with pytest.raises(InvalidMeasureError, match="negative"):
        make_instance(d, [F(3, 2), F(-1, 2), 0, 0], [0, 0, 0, 1])
    with pytest.raises(InvalidMeasureError, match="needs 4"):
        make_instance(d, [1, 0, 0], [0, 0, 0, 1])


def test_non_metric_warning():
    dist = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    assert any("d(0,2) >" in p for p in metric_problems(np.array(dist, dtype=object)))
    inst = make_instance(dist, [1, 0, 0], [0, 0, 1])
    with pytest.warns(NonMetricWarning):
        assert w1_coupling(inst).value == 5


def test_metric_input_raises_no_warning():
    inst = make_instance([[0, 1], [1, 0]], [1, 0], [0, 1])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert w1_coupling(inst).value == 1


def test_non_square_distance():
    with pytest.raises(DomainError):
        make_instance([[0, 1]], [1], [1])


def test_beckmann_needs_positive_lengths():
    with pytest.raises(DomainError):
        w1_beckmann(D22, [1, 1, 0, 1], [1, 0, 0, 0], [0, 0, 0, 1])


def test_min_cost_flow_small():
    cost, flows = min_cost_flow(3, [(0, 1, 2), (1, 2, 3), (0, 2, 7)], [4, 0, -4])
    assert cost == 20 and flows == [4, 4, 0]
    with pytest.raises(InvalidMeasureError):
        min_cost_flow(2, [(0, 1, 1)], [1, 0])
    with pytest.raises(InvalidMeasureError, match="cannot be reached"):
        min_cost_flow(2, [(1, 0, 1)], [1, -1])
    with pytest.raises(DomainError):
        min_cost_flow(2, [(0, 1, -1)], [1, -1])
