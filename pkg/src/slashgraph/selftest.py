"""Fast end-to-end checks behind ``slashgraph selftest``.

Each check takes a seed and returns ``(ok, detail)``.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .bounds import diamond_bound
from .graph import collapsing_map_diamond, diamond_graph, laakso_graph, oslash_power, path_graph
from .isoperimetry import certify_power, iso_dimension
from .measures import laakso_weighted_measure, power_metric, standard_metric, uniform_edge_measure
from .spectral import base_function_diamond, build_spectral_tower, is_strongly_orthogonal
from .transport import make_instance, w1_beckmann, w1_coupling, w1_tree


def diamond_isoperimetry(seed: int) -> tuple[bool, str]:
    g = diamond_graph(2, 2)
    cert = certify_power(g, 2, uniform_edge_measure(g), standard_metric(g), levels=(1, 2))
    ratios = [cert.reports[n].min_ratio for n in (1, 2)]
    ok = cert.certified and all(abs(q - math.sqrt(2)) < 1e-12 for q in ratios)
    return ok, f"min ratio {ratios[0]:.6f} at n=1,2; constant {cert.constant}"


def laakso_dichotomy(seed: int) -> tuple[bool, str]:
    g = laakso_graph()
    d = standard_metric(g)
    uni = certify_power(g, Fraction(3, 2), uniform_edge_measure(g), d)
    weighted = laakso_weighted_measure(g)
    wtd = certify_power(g, Fraction(3, 2), weighted, d)
    ok = (
        not uni.certified
        and uni.witness.members == (g.source,)
        and uni.conditions.p == Fraction(2, 3)
        and wtd.certified
        and iso_dimension(weighted, d) == Fraction(3, 2)
    )
    return ok, f"uniform p={uni.conditions.p} witness {uni.witness}; weighted certified={wtd.certified}"


def spectral_sizes(seed: int) -> tuple[bool, str]:
    g = diamond_graph(2, 2)
    tower = build_spectral_tower(g, collapsing_map_diamond(2, 2), base_function_diamond(2, 2), 3)
    sizes = [len(f) for f in tower]
    strong = all(is_strongly_orthogonal(f.functions, f.edge_measure)[0] for f in tower)
    return sizes == [1, 3, 11] and strong, f"sizes {sizes}, strongly orthogonal {strong}"


def _random_probability(rng: random.Random, n: int) -> list[Fraction]:
    raw = [rng.randint(0, 6) for _ in range(n)]
    raw[rng.randrange(n)] += 1
    return [Fraction(x, sum(raw)) for x in raw]


def transport_agreement(seed: int) -> tuple[bool, str]:
    p2 = path_graph(2)
    d = standard_metric(p2)
    mu, nu = [1, 0, 0], [0, Fraction(1, 2), Fraction(1, 2)]
    inst = make_instance(d, mu, nu)
    triple = {w1_coupling(inst).value, w1_beckmann(p2, d.lengths, mu, nu).value, w1_tree(p2, d.lengths, mu, nu)}
    g = oslash_power(diamond_graph(2, 2), 2)
    dg = power_metric(standard_metric(diamond_graph(2, 2)), g)
    rng = random.Random(seed)
    mismatches = 0
    for _ in range(20):
        a, b = _random_probability(rng, g.n_vertices), _random_probability(rng, g.n_vertices)
        if w1_coupling(make_instance(dg, a, b)).value != w1_beckmann(g, dg.lengths, a, b).value:
            mismatches += 1
    ok = triple == {Fraction(3, 4)} and mismatches == 0
    return ok, f"path instance {sorted(triple)}, {mismatches} mismatches in 20 random instances"


def certified_bound(seed: int) -> tuple[bool, str]:
    rep = diamond_bound(2, 2, 4, constants="certified")
    expected = math.sqrt(4 * math.log(2)) / 128
    return abs(rep.value - expected) < 1e-9, f"value {rep.value:.9f}, closed form {expected:.9f}"


CHECKS = {
    "diamond-isoperimetry": diamond_isoperimetry,
    "laakso-dichotomy": laakso_dichotomy,
    "spectral-sizes": spectral_sizes,
    "transport-agreement": transport_agreement,
    "certified-bound": certified_bound,
}
