import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import alphas, probabilities, vertex_functions
from slashgraph.config import Caps
from slashgraph.errors import DomainError, ResourceCapError
from slashgraph.functions import indicator, sobolev_seminorm, vertex_function
from slashgraph.graph import (
    Subset,
    connected_components,
    diamond_graph,
    enumerate_subsets,
    laakso_graph,
    make_graph,
    oslash_power,
    oslash_product,
    path_graph,
)
from slashgraph.isoperimetry import (
    certify_power,
    coarea_check,
    coarea_sides,
    inf_alpha_ratio,
    iso_dimension,
    iso_ratio,
    layer_cake_check,
    median,
    min_inf_alpha_ratio,
    min_iso_ratio,
    min_iso_ratio_power,
    negative_part,
    perimeter,
    positive_part,
    power_conditions,
    sobolev_check,
    sobolev_sides,
    tilde_iso_ratio,
    witness_family,
)
from slashgraph.measures import (
    edge_measure,
    geodesic_metric,
    induced_vertex_measure,
    laakso_weighted_measure,
    oslash_edge_measure,
    oslash_metric,
    power_edge_measure,
    power_metric,
    standard_metric,
    uniform_edge_measure,
    vertex_measure,
)

F = Fraction
D22 = diamond_graph(2, 2)
LA = laakso_graph()


def setup(g, weighted=False):
    nu = laakso_weighted_measure(g) if weighted else uniform_edge_measure(g)
    return nu, standard_metric(g)


def power_setup(g, n, nu=None):
    nu = uniform_edge_measure(g) if nu is None else nu
    pw = oslash_power(g, n)
    return pw, power_edge_measure(nu, pw), power_metric(standard_metric(g), pw)


def middles(g):
    return [v for v in g.vertices if v not in (g.source, g.sink)]


def brute_force_min(g, delta, nu, d, alpha=None):
    mu = induced_vertex_measure(nu, alpha)
    r = 1 - 1 / F(delta) if isinstance(delta, (int, F)) else 1 - 1 / delta
    best = math.inf
    for s in enumerate_subsets(g):
        m = mu.of(s)
        best = min(best, float(perimeter(s, nu, d)) / float(min(m, 1 - m)) ** float(r))
    return best


# ------------------------------------------------------------ single sets


def test_perimeter_examples():
    nu, d = setup(D22)
    assert perimeter(Subset.of(D22, [D22.source]), nu, d) == 1
    s = Subset.of(LA, [LA.source])
    assert perimeter(s, *setup(LA)) == F(2, 3)
    assert perimeter(s, *setup(LA, weighted=True)) == 1


def test_ratio_examples():
    nu, d = setup(D22)
    assert iso_ratio(Subset.of(D22, [D22.source]), 2, nu, d) == pytest.approx(2)
    assert iso_ratio(Subset.of(D22, [D22.source, middles(D22)[0]]), 2, nu, d) == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("bits", range(1, 15))
def test_delta_one_ratio_is_perimeter(bits):
    nu, d = setup(D22)
    s = Subset.from_bits(D22, bits)
    assert iso_ratio(s, 1, nu, d) == float(perimeter(s, nu, d))


@pytest.mark.parametrize("bits", [0, 15])
def test_ratio_rejects_improper(bits):
    nu, d = setup(D22)
    with pytest.raises(DomainError):
        iso_ratio(Subset.from_bits(D22, bits), 2, nu, d)


@given(st.integers(1, 2**12 - 2), st.sampled_from([F(3, 2), 2, F(5, 2), 3]), alphas)
def test_ratio_is_max_of_one_sided(bits, delta, alpha):
    g, nu, d = power_setup(D22, 2)
    s = Subset.from_bits(g, bits)
    q = iso_ratio(s, delta, nu, d, alpha)
    assert q == max(tilde_iso_ratio(s, delta, nu, d, alpha), tilde_iso_ratio(s.complement(), delta, nu, d, alpha))


@given(
    st.lists(st.tuples(st.floats(0, 10), st.floats(0.01, 10)), min_size=1, max_size=8),
    st.floats(0.01, 1),
)
def test_sum_ratio_dominates_least_ratio(pairs, r):
    # (sum a) / (sum b)^r >= min a_j / b_j^r; connected mode relies on it
    a = sum(x for x, _ in pairs)
    b = sum(y for _, y in pairs)
    assert a / b**r >= min(x / y**r for x, y in pairs) * (1 - 1e-12)


@given(st.integers(1, 2**12 - 2))
def test_ratio_at_least_least_component(bits):
    g, nu, d = power_setup(D22, 2)
    s = Subset.from_bits(g, bits)
    mu = induced_vertex_measure(nu)
    if 2 * mu.of(s) > 1:
        s = s.complement()
    parts = connected_components(g, s)
    assert iso_ratio(s, 2, nu, d) >= min(iso_ratio(p, 2, nu, d) for p in parts) * (1 - 1e-12)


# ------------------------------------------------------------ minimisation


def test_d22_minimum():
    nu, d = setup(D22)
    rep = min_iso_ratio(D22, 2, nu, d)
    assert rep.min_ratio == pytest.approx(math.sqrt(2), abs=1e-12)
    assert len(rep.witness) == 2
    assert rep.witness_perimeter == 1 and rep.witness_measure == F(1, 2)
    assert min_iso_ratio(D22, 2, nu, d, mode="connected").min_ratio == rep.min_ratio


def test_laakso_uniform_minimum_below_source_ratio():
    nu, d = setup(LA)
    rep = min_iso_ratio(LA, F(3, 2), nu, d)
    assert rep.min_ratio <= iso_ratio(Subset.of(LA, [LA.source]), F(3, 2), nu, d)


CASES = {
    "D22^2": lambda: power_setup(D22, 2),
    "La": lambda: (LA, *setup(LA)),
    "La-weighted": lambda: (LA, *setup(LA, weighted=True)),
    "D23": lambda: power_setup(diamond_graph(2, 3), 1),
    "P3^2": lambda: power_setup(path_graph(3), 2),
    "D32": lambda: power_setup(diamond_graph(3, 2), 1),
}


@pytest.mark.parametrize("name", CASES)
@pytest.mark.parametrize("delta", [F(3, 2), 2, 3])
def test_scans_match_brute_force(name, delta):
    g, nu, d = CASES[name]()
    oracle = brute_force_min(g, delta, nu, d)
    for mode in ("exhaustive", "connected"):
        for backend in ("numba", "numpy"):
            rep = min_iso_ratio(g, delta, nu, d, mode=mode, backend=backend)
            assert rep.min_ratio == pytest.approx(oracle, rel=1e-12)
            assert iso_ratio(rep.witness, delta, nu, d) == pytest.approx(rep.min_ratio, rel=1e-12)


@settings(max_examples=15)
@given(alphas)
def test_scans_match_brute_force_with_alpha(alpha):
    g, nu, d = power_setup(D22, 2)
    rep = min_iso_ratio(g, 2, nu, d, alpha)
    assert rep.min_ratio == pytest.approx(brute_force_min(g, 2, nu, d, alpha), rel=1e-12)


def test_exhaustive_cap():
    g, nu, d = power_setup(D22, 2)
    with pytest.raises(ResourceCapError):
        min_iso_ratio(g, 2, nu, d, caps=Caps(exhaustive_vertices=8))


@pytest.mark.parametrize(
    "g,n",
    [(D22, 2), (diamond_graph(2, 3), 2), (path_graph(3), 2), (LA, 1), (D22, 1)],
    ids=["D22^2", "D23^2", "P3^2", "La", "D22"],
)
@pytest.mark.parametrize("alpha", [None, F(1, 3)])
def test_power_recursion_matches_exhaustive(g, n, alpha):
    pw, nu_n, d_n = power_setup(g, n)
    nu, d = setup(g)
    for delta in (2, F(3, 2)):
        fast = min_iso_ratio_power(g, n, delta, nu, d, alpha, power=pw)
        slow = min_iso_ratio(pw, delta, nu_n, d_n, alpha)
        assert fast.min_ratio == pytest.approx(slow.min_ratio, rel=1e-12)
        assert iso_ratio(fast.witness, delta, nu_n, d_n, alpha) == pytest.approx(fast.min_ratio, rel=1e-12)


def test_power_recursion_backends_agree():
    g = diamond_graph(3, 2)
    nu, d = setup(g)
    a = min_iso_ratio_power(g, 2, 2, nu, d, backend="numba")
    b = min_iso_ratio_power(g, 2, 2, nu, d, backend="numpy")
    assert a.min_ratio == b.min_ratio and a.witness == b.witness


def test_power_recursion_rejects_edge_alpha():
    nu, d = setup(D22)
    with pytest.raises(DomainError):
        min_iso_ratio_power(D22, 2, 2, nu, d, alpha=[F(1, 2)] * 4)


# ------------------------------------------------------------ dimension and power conditions


@pytest.mark.parametrize("k,m", [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (3, 4)])
def test_diamond_dimension(k, m):
    delta = iso_dimension(*setup(diamond_graph(k, m)))
    assert float(delta) == pytest.approx(1 + math.log(m) / math.log(k))


def test_exact_dimensions():
    assert iso_dimension(*setup(D22)) == 2 and isinstance(iso_dimension(*setup(D22)), Fraction)
    assert iso_dimension(*setup(diamond_graph(2, 4))) == 3
    assert iso_dimension(*setup(LA, weighted=True)) == F(3, 2)


def test_dimension_rejects_unit_mass():
    g = path_graph(2)
    with pytest.raises(DomainError):
        iso_dimension(edge_measure(g, [1, 0]), standard_metric(g))


def test_power_conditions_d22():
    cond = power_conditions(D22, 2, *setup(D22))
    assert (cond.rho, cond.p, cond.c) == (1.0, 1, 1) and cond.holds


def test_power_conditions_laakso():
    uni = power_conditions(LA, F(3, 2), *setup(LA))
    assert uni.p == F(2, 3) and not uni.holds
    assert uni.p_witness == Subset.of(LA, [LA.source])
    wtd = power_conditions(LA, F(3, 2), *setup(LA, weighted=True))
    assert wtd.c >= 1 and wtd.holds and wtd.rho == pytest.approx(1.0)


def test_laakso_weighted_every_set_has_perimeter_one():
    nu, d = setup(LA, weighted=True)
    pers = [perimeter(s, nu, d) for s in enumerate_subsets(LA)]
    assert len(pers) == 62 and min(pers) == 1


@pytest.mark.parametrize("g", [D22, LA, diamond_graph(2, 3), diamond_graph(3, 2)], ids=["D22", "La", "D23", "D32"])
def test_power_conditions_against_brute_force(g):
    nu, d = setup(g)
    cond = power_conditions(g, 2, nu, d)
    sets = list(enumerate_subsets(g))
    sep = [s for s in sets if (g.source in s) != (g.sink in s)]
    assert cond.p == min(perimeter(s, nu, d) for s in sep)
    assert cond.c == min(perimeter(s, nu, d) for s in sets)
    exact_rho = min(float(m) ** 0.5 / float(x) for m, x in zip(nu.mass, d.lengths))
    assert cond.rho == pytest.approx(exact_rho)


# ------------------------------------------------------------ product bounds


@pytest.mark.parametrize("g", [D22, LA, diamond_graph(2, 3)], ids=["D22", "La", "D23"])
@given(data=st.data())
def test_inside_copy_formula(g, data):
    h = D22
    product = oslash_product(h, g)
    nu_h = edge_measure(h, data.draw(probabilities(4).filter(lambda p: all(x > 0 for x in p))))
    nu_g = uniform_edge_measure(g)
    d_h, d_g = standard_metric(h), standard_metric(g)
    nu, d = oslash_edge_measure(nu_h, nu_g, product), oslash_metric(d_h, d_g, product)
    e0 = data.draw(st.integers(0, 3))
    inner = middles(g)
    bits = data.draw(st.integers(1, 2 ** len(inner) - 1))
    s = Subset.of(g, [v for i, v in enumerate(inner) if bits >> i & 1])
    lifted = Subset.of(product, [int(product.embedding[e0, u]) for u in s.members])
    alpha_g = data.draw(st.lists(alphas, min_size=g.n_edges, max_size=g.n_edges))
    alpha = [alpha_g[f] for _ in range(4) for f in range(g.n_edges)]
    assert perimeter(lifted, nu, d) == nu_h.mass[e0] / d_h.lengths[e0] * perimeter(s, nu_g, d_g)
    mu = induced_vertex_measure(nu, alpha)
    assert mu.of(lifted) == nu_h.mass[e0] * induced_vertex_measure(nu_g, alpha_g).of(s)
    delta = data.draw(st.sampled_from([F(3, 2), 2, 3]))
    factor = float(nu_h.mass[e0]) ** (1 / float(delta)) / float(d_h.lengths[e0])
    assert tilde_iso_ratio(lifted, delta, nu, d, alpha) == pytest.approx(
        factor * tilde_iso_ratio(s, delta, nu_g, d_g, alpha_g), rel=1e-12
    )


def test_inf_alpha_ratio_is_a_lower_envelope():
    nu, d = setup(D22)
    rng = random.Random(0)
    for s in enumerate_subsets(D22):
        low = inf_alpha_ratio(s, 2, nu, d)
        for k in range(1, 8):
            assert iso_ratio(s, 2, nu, d, [F(k, 8)] * 4) >= low * (1 - 1e-12)
        for _ in range(20):
            alpha = [F(rng.randint(1, 63), 64) for _ in range(4)]
            assert iso_ratio(s, 2, nu, d, alpha) >= low * (1 - 1e-12)


PRODUCTS = {
    "D22.D22": (lambda: D22, lambda: D22),
    "P2.D22": (lambda: path_graph(2), lambda: D22),
    "D22.La": (lambda: D22, lambda: LA),
}


@pytest.mark.parametrize("name", PRODUCTS)
def test_product_isoperimetry_bound(name):
    h, g = PRODUCTS[name][0](), PRODUCTS[name][1]()
    delta = 2
    nu_h, d_h = setup(h)
    nu_g, d_g = setup(g)
    rho_h = min(float(m) ** (1 / delta) / float(x) for m, x in zip(nu_h.mass, d_h.lengths))
    q_g_inner, _ = min_inf_alpha_ratio(g, delta, nu_g, d_g, two_sided=False, avoid_endpoints=True)
    q_h, _ = min_inf_alpha_ratio(h, delta, nu_h, d_h)
    p_g = float(power_conditions(g, delta, nu_g, d_g).p)
    bound = min(rho_h * q_g_inner, q_h * p_g)
    product = oslash_product(h, g)
    nu = oslash_edge_measure(nu_h, nu_g, product)
    d = oslash_metric(d_h, d_g, product)
    rng = random.Random(1)
    samples = [F(j, 8) for j in range(1, 8)]
    samples += [[F(rng.randint(1, 63), 64) for _ in range(product.n_edges)] for _ in range(3)]
    for alpha in samples:
        rep = min_iso_ratio(product, delta, nu, d, alpha)
        assert rep.min_ratio >= bound * (1 - 1e-12)


@pytest.mark.parametrize("k,m", [(2, 2), (2, 3)])
def test_powers_stay_above_least_perimeter(k, m):
    g = diamond_graph(k, m)
    nu, d = setup(g)
    delta = iso_dimension(nu, d)
    cert = certify_power(g, delta, nu, d, levels=(1, 2))
    assert cert.certified
    assert all(rep.min_ratio >= float(cert.conditions.c) * (1 - 1e-12) for rep in cert.reports.values())


def test_certify_modes_agree():
    nu, d = setup(D22)
    ratios = {
        mode: certify_power(D22, 2, nu, d, levels=(2,), mode=mode).reports[2].min_ratio
        for mode in ("exhaustive", "connected", "power")
    }
    assert max(ratios.values()) == pytest.approx(min(ratios.values()), rel=1e-12)


def test_certify_laakso():
    uni = certify_power(LA, F(3, 2), *setup(LA))
    assert not uni.certified and uni.witness == Subset.of(LA, [LA.source])
    wtd = certify_power(LA, F(3, 2), *setup(LA, weighted=True), levels=(1, 2))
    assert wtd.certified and wtd.constant == 1


def test_certify_fails_on_light_edge():
    nu, d = setup(D22)
    cert = certify_power(D22, F(3, 2), nu, d)
    assert not cert.certified and "rho" in cert.reason


# ------------------------------------------------------------ witness families


def test_laakso_singleton_family():
    nu, d = setup(LA)
    fam = witness_family(LA, F(3, 2), nu, d, levels=(1, 2, 3))
    assert fam.case == "singleton" and fam.factor == F(2, 3)
    for step in fam.steps:
        assert step.perimeter == step.predicted_perimeter == F(4, 3) * F(2, 3) ** (step.n - 1)
    ratios = [step.ratio for step in fam.steps]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_split_family_is_exact_power():
    g = path_graph(3)
    nu = uniform_edge_measure(g)
    d = geodesic_metric(g, [F(1, 4), F(1, 2), F(1, 4)])
    fam = witness_family(g, 2, nu, d, levels=(1, 2, 3))
    assert fam.case == "split" and fam.factor == F(2, 3)
    for step in fam.steps:
        assert step.perimeter == F(2, 3) ** step.n
        assert step.measure == F(1, 2)
    ratios = [step.ratio for step in fam.steps]
    assert all(b / a == pytest.approx(2 / 3) for a, b in zip(ratios, ratios[1:]))


def test_rho_family_factor():
    nu, d = setup(D22)
    fam = witness_family(D22, F(3, 2), nu, d, levels=(1, 2, 3))
    assert fam.case == "rho" and fam.factor == pytest.approx(0.25 ** (2 / 3) * 2)
    ratios = [step.ratio for step in fam.steps]
    for a, b in zip(ratios, ratios[1:]):
        assert b / a == pytest.approx(fam.factor)
    assert all(step.perimeter == step.predicted_perimeter for step in fam.steps)


def test_no_family_when_conditions_hold():
    assert witness_family(D22, 2, *setup(D22)) is None


# ------------------------------------------------------------ functional identities


def test_coarea_examples():
    p2 = path_graph(2)
    nu, d = setup(p2)
    assert coarea_sides(indicator(p2, [p2.sink]), nu, d) == (1, 1)
    assert coarea_sides(vertex_function(p2, [5, 5, 5]), nu, d) == (0, 0)
    with pytest.raises(DomainError):
        coarea_check(vertex_function(p2, [-1, 0, 0]), nu, d)


nonneg = st.builds(F, st.integers(0, 64), st.integers(1, 16))


@given(data=st.data())
def test_coarea_and_layer_cake(data):
    g, nu, d = power_setup(D22, 2)
    f = data.draw(vertex_functions(g, nonneg))
    assert coarea_check(f, nu, d)
    assert layer_cake_check(f)


@given(data=st.data())
def test_sobolev_additivity(data):
    g, nu, d = power_setup(D22, 2)
    f = data.draw(vertex_functions(g))
    total = sobolev_seminorm(f, 1, nu, d)
    assert total == sobolev_seminorm(positive_part(f), 1, nu, d) + sobolev_seminorm(negative_part(f), 1, nu, d)


def test_sobolev_example():
    nu, d = setup(D22)
    mu = induced_vertex_measure(nu)
    lhs, rhs = sobolev_sides(indicator(D22, [D22.source]), 2, 1, nu, d, mu)
    assert lhs == pytest.approx(math.sqrt(3) / 4) and rhs == 2
    assert sobolev_sides(vertex_function(D22, [2] * 4), 2, 1, nu, d, mu) == (0, 0)


@given(data=st.data())
def test_sobolev_inequality(data):
    g, nu, d = power_setup(D22, 2)
    f = data.draw(vertex_functions(g))
    assert sobolev_check(f, 2, 1, nu, d, induced_vertex_measure(nu))


def test_median_examples():
    two = make_graph(2, [(0, 1)])
    assert median(vertex_function(two, [0, 1]), vertex_measure(two, [F(1, 2), F(1, 2)])) == 0
    p2 = path_graph(2)
    mu = vertex_measure(p2, [F(1, 4), F(1, 2), F(1, 4)])
    assert median(vertex_function(p2, [7, 7, 7]), mu) == 7
    assert median(vertex_function(p2, [1, 2, 3]), mu) == 2


@given(data=st.data())
def test_median_tails(data):
    g, nu, _ = power_setup(D22, 2)
    mu = induced_vertex_measure(nu)
    f = data.draw(vertex_functions(g))
    m = median(f, mu)
    vals = np.array(f.values)
    assert sum(w for x, w in zip(vals, mu.mass) if x > m) <= F(1, 2)
    assert sum(w for x, w in zip(vals, mu.mass) if x < m) <= F(1, 2)
    assert all(not (x < m and median_ok(f, mu, x)) for x in set(f.values))


def median_ok(f, mu, m):
    above = sum((w for x, w in zip(f.values, mu.mass) if x > m), F(0))
    below = sum((w for x, w in zip(f.values, mu.mass) if x < m), F(0))
    return above <= F(1, 2) and below <= F(1, 2)
