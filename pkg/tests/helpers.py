"""Shared strategies and small builders for the test suite."""

from fractions import Fraction

from hypothesis import strategies as st

from slashgraph.functions import vertex_function

rationals = st.builds(Fraction, st.integers(-64, 64), st.integers(1, 64))
alphas = st.builds(Fraction, st.integers(1, 63), st.just(64))


def vertex_functions(g, values=rationals):
    return st.lists(values, min_size=g.n_vertices, max_size=g.n_vertices).map(
        lambda vals: vertex_function(g, vals)
    )


def probability(weights):
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def probabilities(n, max_weight=8):
    return (
        st.lists(st.integers(0, max_weight), min_size=n, max_size=n)
        .filter(lambda w: sum(w) > 0)
        .map(probability)
    )
