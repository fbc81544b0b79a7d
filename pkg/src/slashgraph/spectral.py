"""Orthogonal families of Lipschitz functions on slash powers.

The family on ``G^n = G^(n-1) (x) G`` is assembled from three pieces:

* functions on ``G^(n-1)`` lifted by linear interpolation along each copy
  of ``G`` (barycentric extension onto ``G^(n-1) (x) P_k`` followed by the
  pullback through ``id (x) pi``);
* Hadamard-type edge functions on ``G^(n-1)``;
* a base function ``phi`` on ``G`` placed into every copy.

Every value is a ``Fraction`` and every orthogonality test is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import DomainError, InvalidMeasureError
from .exact import exact_gram, fraction_array, nullspace
from .functions import (
    EdgeFunction,
    VertexFunction,
    edge_function,
    lipschitz_constant,
    lp_norm,
    minus_part,
    plus_part,
    vertex_function,
)
from .graph import (
    Graph,
    Morphism,
    collapsing_map,
    diamond_graph,
    identity_morphism,
    oslash_morphism,
    oslash_product,
    path_graph,
)
from .measures import (
    EdgeMeasure,
    GeodesicMetric,
    VertexMeasure,
    induced_vertex_measure,
    is_reflection_invariant,
    power_edge_measure,
    power_metric,
    pushforward_measure,
    standard_metric,
    uniform_edge_measure,
)


# ------------------------------------------------------------ operators


def lin_extension(f: VertexFunction, k: int, product: Graph | None = None) -> VertexFunction:
    """Barycentric extension of ``f`` on ``H`` to ``H (x) P_k``.

    The vertex ``e (x) i/k`` receives ``(1 - i/k) f(e-) + (i/k) f(e+)``.
    """
    h = f.graph
    if product is None:
        product = oslash_product(h, path_graph(k))
    emb = product.embedding
    if emb is None or emb.shape != (h.n_edges, k + 1):
        raise DomainError("product graph is not H (x) P_k")
    out = [None] * product.n_vertices
    for e, (u, v) in enumerate(h.edges):
        for i in range(k + 1):
            t = Fraction(i, k)
            out[emb[e, i]] = (1 - t) * f.values[u] + t * f.values[v]
    return vertex_function(product, out)


def pullback(theta: Morphism, f, d: GeodesicMetric | None = None, d_codomain: GeodesicMetric | None = None):
    """``f o theta`` for vertex or edge functions on the codomain.

    When both metrics are given, every edge must have the length of its
    image, which is what makes the pullback preserve Lipschitz constants.
    """
    if not f.graph.same_as(theta.codomain):
        raise DomainError("function does not live on the morphism's codomain")
    if d is not None and d_codomain is not None:
        mismatch = [
            e for e, img in enumerate(theta.edge_map.tolist()) if d.lengths[e] != d_codomain.lengths[img]
        ]
        if mismatch:
            raise DomainError(f"edge {mismatch[0]} is not mapped isometrically")
    if isinstance(f, EdgeFunction):
        return edge_function(theta.domain, f.values[theta.edge_map])
    return vertex_function(theta.domain, f.values[theta.vertex_map])


def conditional_expectation(g: EdgeFunction, theta: Morphism, nu: EdgeMeasure) -> EdgeFunction:
    """Average of ``g`` over each fiber of the edge map, weighted by ``nu``."""
    if not g.graph.same_as(theta.domain):
        raise DomainError("function does not live on the morphism's domain")
    fibers: dict[int, list[int]] = {}
    for e, img in enumerate(theta.edge_map.tolist()):
        fibers.setdefault(img, []).append(e)
    out = [Fraction(0)] * g.graph.n_edges
    for img, edges in fibers.items():
        mass = sum((nu.mass[e] for e in edges), Fraction(0))
        if mass == 0:
            raise InvalidMeasureError(f"fiber over edge {img} has zero mass")
        avg = sum((nu.mass[e] * g.values[e] for e in edges), Fraction(0)) / mass
        for e in edges:
            out[e] = avg
    return edge_function(g.graph, out)


def oslash_function(h: EdgeFunction, g, product: Graph | None = None):
    """``(h (x) g)(e (x) u) = h(e) g(u)``; vertex ``g`` must vanish at source and sink."""
    hg, gg = h.graph, g.graph
    if product is None:
        product = oslash_product(hg, gg)
    if isinstance(g, EdgeFunction):
        if product.n_edges != hg.n_edges * gg.n_edges:
            raise DomainError("product graph does not match the factors")
        return edge_function(product, np.outer(h.values, g.values).ravel())
    if g.values[gg.source] != 0 or g.values[gg.sink] != 0:
        raise DomainError("vertex factor must vanish at the source and the sink")
    emb = product.embedding
    if emb is None or emb.shape != (hg.n_edges, gg.n_vertices):
        raise DomainError("product graph does not match the factors")
    out = [Fraction(0)] * product.n_vertices
    for e in range(hg.n_edges):
        for u in range(gg.n_vertices):
            val = h.values[e] * g.values[u]
            if val != 0:
                out[emb[e, u]] = val
    return vertex_function(product, out)


def induced_edge_functions(f: VertexFunction) -> tuple[EdgeFunction, EdgeFunction]:
    """``(f_-, f_+)`` with ``f_-(e) = f(e-)`` and ``f_+(e) = f(e+)``."""
    return minus_part(f), plus_part(f)


def has_edge_sign(f: VertexFunction) -> bool:
    g = f.graph
    return all(a * b >= 0 for a, b in zip(f.values[g.src], f.values[g.dst]))


def _stack(functions: Sequence) -> np.ndarray:
    return np.array([list(f.values) for f in functions], dtype=object).reshape(len(functions), -1)


def _first_offdiagonal(gram: np.ndarray, symmetric: bool):
    for i, j in zip(*np.nonzero(gram != 0)):
        if i != j and (not symmetric or i < j):
            return int(i), int(j)
    return None


def is_orthogonal(functions: Sequence, measure) -> tuple[bool, tuple[int, int] | None]:
    """Exact pairwise orthogonality in ``L_2(measure)``; returns a failing pair."""
    if len(functions) < 2:
        return True, None
    a = _stack(functions)
    pair = _first_offdiagonal(exact_gram(a, a, measure.mass), True)
    return pair is None, pair


def is_strongly_orthogonal(functions: Sequence[VertexFunction], nu: EdgeMeasure):
    """All four endpoint pairings ``<f_a, g_b>`` vanish for distinct members.

    Returns ``(ok, witness)`` with witness ``(i, j, a, b)`` for the first
    nonzero pairing, signs given as ``"-"`` or ``"+"``.
    """
    if len(functions) < 2:
        return True, None
    g = functions[0].graph
    a = _stack(functions)
    parts = {"-": a[:, g.src], "+": a[:, g.dst]}
    for sa, pa in parts.items():
        for sb, pb in parts.items():
            pair = _first_offdiagonal(exact_gram(pa, pb, nu.mass), False)
            if pair is not None:
                return False, (*pair, sa, sb)
    return True, None


# ------------------------------------------------------------ base functions


def base_function_diamond(k: int, m: int) -> VertexFunction:
    """1 on interior vertices of odd branches ``i < m``, -1 on even branches, 0 elsewhere."""
    g = diamond_graph(k, m)
    values = [Fraction(0)] * g.n_vertices
    for i in range(1, m + 1):
        sign = -1 if i % 2 == 0 else (1 if i < m else 0)
        for j in range(1, k):
            values[1 + (i - 1) * (k - 1) + (j - 1)] = Fraction(sign)
    return vertex_function(g, values)


def _kernel_rows(g: Graph, pi: Morphism, nu: EdgeMeasure) -> list[list[Fraction]]:
    rows = []
    for img in range(pi.codomain.n_edges):
        for ends in (g.src, g.dst):
            row = [Fraction(0)] * g.n_vertices
            for e in pi.fiber(img):
                row[ends[e]] += nu.mass[e]
            rows.append(row)
    for v in (g.source, g.sink):
        row = [Fraction(0)] * g.n_vertices
        row[v] = Fraction(1)
        rows.append(row)
    return rows


def is_base_function(phi: VertexFunction, pi: Morphism, nu: EdgeMeasure | None = None) -> bool:
    """Edge-sign property plus ``phi_-`` and ``phi_+`` averaging to zero on every fiber."""
    g = phi.graph
    nu = uniform_edge_measure(g) if nu is None else nu
    if not has_edge_sign(phi):
        return False
    for part in induced_edge_functions(phi):
        if not conditional_expectation(part, pi, nu).is_zero():
            return False
    return True


def find_base_function(g: Graph, pi: Morphism | None = None) -> VertexFunction:
    """A nonzero base function found from the exact kernel of the fiber averages.

    Tries each kernel basis vector, then sums and differences of pairs, and
    returns the first with the edge-sign property, scaled to sup norm 1.
    """
    pi = collapsing_map(g) if pi is None else pi
    nu = uniform_edge_measure(g)
    basis = nullspace(_kernel_rows(g, pi, nu), g.n_vertices)
    candidates = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            candidates.append([a + b for a, b in zip(basis[i], basis[j])])
            candidates.append([a - b for a, b in zip(basis[i], basis[j])])
    for vec in candidates:
        f = vertex_function(g, vec)
        if not f.is_zero() and has_edge_sign(f):
            return f / f.sup_norm
    if not basis:
        raise DomainError("graph has no nonzero base function: the fiber averages force zero")
    raise DomainError("no kernel vector with the edge-sign property was found")


# ------------------------------------------------------------ Hadamard


def sylvester(order: int) -> np.ndarray:
    """Sylvester Hadamard matrix of size ``2**order``."""
    h = np.array([[1]], dtype=np.int64)
    for _ in range(order):
        h = np.block([[h, h], [h, -h]])
    return h


def hadamard_family(size: int, count: int | None = None) -> list[list[int]]:
    """Orthogonal +-1/0 functions on a uniform set of ``size`` points.

    Uses the largest power of two ``2**j <= size``: the first ``2**j``
    points carry the Sylvester columns and the rest are zero. ``count``
    keeps only the first columns.
    """
    if size < 1:
        raise DomainError("need at least one point")
    order = size.bit_length() - 1
    h = sylvester(order)
    width = 1 << order
    count = width if count is None else count
    if not 1 <= count <= width:
        raise DomainError(f"at most {width} Hadamard columns fit on {size} points")
    return [list(h[:, j]) + [0] * (size - width) for j in range(count)]


# ------------------------------------------------------------ families


@dataclass(frozen=True)
class Member:
    function: VertexFunction
    lipschitz: Fraction
    l1: Fraction
    linf: Fraction
    provenance: str


@dataclass(frozen=True)
class SpectralFamily:
    """Functions on ``G^n`` with their norms and how each one was built.

    ``provenance`` is ``"lifted"`` for members interpolated from level
    ``n-1`` and ``"level-n product"`` for Hadamard times base-function
    members created at this level (``"base"`` for the level-one member).
    """

    graph: Graph
    level: int
    k: int
    members: list[Member]
    vertex_measure: VertexMeasure
    edge_measure: EdgeMeasure
    metric: GeodesicMetric
    base_raw: VertexFunction
    f2_sizes: list[int] = field(default_factory=list)

    @property
    def functions(self) -> list[VertexFunction]:
        return [m.function for m in self.members]

    def __len__(self) -> int:
        return len(self.members)

    @property
    def lipschitz(self) -> list[Fraction]:
        return [m.lipschitz for m in self.members]


def _member(f: VertexFunction, mu: VertexMeasure, d: GeodesicMetric, how: str) -> Member:
    return Member(f, lipschitz_constant(f, d), lp_norm(f, mu, 1), lp_norm(f, mu, math.inf), how)


def assemble(
    f1: Sequence[VertexFunction],
    f2: Sequence[EdgeFunction],
    f3: Sequence[VertexFunction],
    pi: Morphism,
    product: Graph | None = None,
    lin_product: Graph | None = None,
) -> tuple[list[VertexFunction], list[VertexFunction]]:
    """Lifted ``F1`` and products ``F2 (x) F3`` on ``H (x) G``.

    ``pi`` collapses ``G`` onto ``P_k``; ``product`` is ``H (x) G`` and
    ``lin_product`` is ``H (x) P_k``.
    """
    g = pi.domain
    h = f1[0].graph if f1 else f2[0].graph
    if product is None:
        product = oslash_product(h, g)
    if lin_product is None:
        lin_product = oslash_product(h, pi.codomain)
    k = pi.codomain.n_edges
    lift = oslash_morphism(identity_morphism(h), pi, domain=product, codomain=lin_product)
    lifted = [pullback(lift, lin_extension(f, k, lin_product)) for f in f1]
    products = [oslash_function(a, b, product) for a in f2 for b in f3]
    return lifted, products


def _check_hypotheses(g: Graph, pi: Morphism, phi: VertexFunction, nu: EdgeMeasure, d: GeodesicMetric) -> int:
    if len(set(nu.mass)) != 1 or not nu.is_probability:
        raise DomainError("the edge measure must be uniform")
    if not is_reflection_invariant(pushforward_measure(pi, nu)):
        raise DomainError("the pushed-forward path measure is not reflection invariant")
    if phi.is_zero() or not is_base_function(phi, pi, nu):
        raise DomainError("phi is not a nonzero base function")
    k = pi.codomain.n_edges
    if any(x != Fraction(1, k) for x in d.lengths):
        raise DomainError(f"every edge must have length 1/{k}")
    return k


def build_spectral_tower(
    g: Graph,
    pi: Morphism,
    phi: VertexFunction,
    n: int,
    f2_size: str = "half",
    caps: Caps = DEFAULT_CAPS,
) -> list[SpectralFamily]:
    """Families on ``G^1, ..., G^n``; level ``j`` adds ``|F2|`` product members.

    ``f2_size="half"`` uses ``ceil(|E(G^(j-1))| / 2)`` Hadamard columns,
    the least count the growth estimate needs; ``"full"`` uses every
    column of the largest Sylvester block that fits.
    """
    if n < 1:
        raise DomainError("level must be at least 1")
    if f2_size not in {"half", "full"}:
        raise ValueError("f2_size must be 'half' or 'full'")
    nu = uniform_edge_measure(g)
    d = standard_metric(g)
    k = _check_hypotheses(g, pi, phi, nu, d)
    base = phi / phi.sup_norm
    mu = induced_vertex_measure(nu)
    tower = [SpectralFamily(g, 1, k, [_member(base, mu, d, "base")], mu, nu, d, phi, [])]
    h = g
    for level in range(2, n + 1):
        product = oslash_product(h, g, caps)
        lin_product = oslash_product(h, pi.codomain, caps)
        size = h.n_edges
        count = -(-size // 2) if f2_size == "half" else None
        f2 = [edge_function(h, col) for col in hadamard_family(size, count)]
        prev = tower[-1]
        lifted, products = assemble(prev.functions, f2, [base], pi, product, lin_product)
        nu_n = power_edge_measure(nu, product)
        d_n = power_metric(d, product)
        mu_n = induced_vertex_measure(nu_n)
        members = [_member(f, mu_n, d_n, "lifted") for f in lifted]
        members += [_member(f, mu_n, d_n, f"level-{level} product") for f in products]
        tower.append(
            SpectralFamily(product, level, k, members, mu_n, nu_n, d_n, phi, prev.f2_sizes + [len(f2)])
        )
        h = product
    return tower


def build_spectral_family(g, pi, phi, n, f2_size="half", caps: Caps = DEFAULT_CAPS) -> SpectralFamily:
    return build_spectral_tower(g, pi, phi, n, f2_size, caps)[-1]


# ------------------------------------------------------------ growth and report


def growth_function(family: SpectralFamily | Sequence[Fraction], s, strict: bool = False) -> int:
    """Members with Lipschitz constant ``<= s`` (or ``< s`` when ``strict``)."""
    lips = family.lipschitz if isinstance(family, SpectralFamily) else list(family)
    if s < 0:
        raise DomainError("s must be nonnegative")
    if strict:
        return sum(1 for x in lips if x < s)
    return sum(1 for x in lips if x <= s)


@dataclass(frozen=True)
class SpectralReport:
    """Constants of a Lipschitz-spectral profile.

    ``c_gamma`` maximises ``s**delta / gamma(s)`` over ``s = k**m`` in
    ``[k, beta]``; ``c_gamma_continuum`` is the supremum over the whole
    interval ``[k, beta]``, reached at ``beta`` or just below a jump of
    ``gamma``. Below the least Lipschitz constant ``gamma`` is zero, so no
    finite constant covers ``[1, k)`` when that constant exceeds 1;
    ``gamma_gap`` records this.
    """

    size: int
    delta: float
    beta: float
    c_inf: Fraction
    c_one: Fraction
    c_gamma: float
    c_gamma_continuum: float
    gamma_gap: bool
    growth: list[tuple[float, int]]
    growth_strict: list[tuple[float, int]]
    orthogonal: bool
    strongly_orthogonal: bool
    edge_sign: bool
    certified: bool


def profile_report(
    family: SpectralFamily,
    delta,
    beta,
    k: int | None = None,
    grid_points: int = 64,
) -> SpectralReport:
    delta = float(delta)
    beta = float(beta)
    if beta < 1:
        raise DomainError("bandwidth must be at least 1")
    k = family.k if k is None else k
    ok, pair = is_orthogonal(family.functions, family.vertex_measure)
    if not ok:
        raise DomainError(f"members {pair} are not orthogonal")
    strong, _ = is_strongly_orthogonal(family.functions, family.edge_measure)
    lips = family.lipschitz
    c_inf = max(m.linf for m in family.members)
    min_l1 = min(m.l1 for m in family.members)
    c_one = 1 / min_l1 if min_l1 > 0 else math.inf

    def ratio(s, count):
        return math.inf if count == 0 else s**delta / count

    powers = []
    m = 1
    while k**m <= beta * (1 + 1e-12):
        powers.append(float(k**m))
        m += 1
    c_gamma = max((ratio(s, growth_function(lips, s)) for s in powers), default=math.inf)
    lo = float(min(k, beta))
    grid = list(np.geomspace(lo, beta, grid_points)) if beta > lo else [lo]
    jumps = sorted({float(x) for x in lips if lo < x <= beta})
    cont = [ratio(s, growth_function(lips, s)) for s in grid + powers]
    cont += [ratio(x, growth_function(lips, Fraction(x), strict=True)) for x in jumps]
    c_gamma_continuum = max(cont)
    samples = sorted(set(powers) | set(grid) | set(jumps))
    growth = [(s, growth_function(lips, s)) for s in samples]
    growth_strict = [(s, growth_function(lips, s, strict=True)) for s in samples]
    gap = min(lips) > 1
    certified = ok and math.isfinite(c_one) and math.isfinite(c_gamma) and c_inf > 0
    return SpectralReport(
        size=len(family),
        delta=delta,
        beta=beta,
        c_inf=c_inf,
        c_one=c_one,
        c_gamma=c_gamma,
        c_gamma_continuum=c_gamma_continuum,
        gamma_gap=gap,
        growth=growth,
        growth_strict=growth_strict,
        orthogonal=ok,
        strongly_orthogonal=strong,
        edge_sign=all(has_edge_sign(f) for f in family.functions),
        certified=certified,
    )


def proof_constants(phi: VertexFunction, g: Graph) -> dict[str, Fraction]:
    """Constants guaranteed for the family built from ``phi`` on powers of ``g``."""
    mu = induced_vertex_measure(uniform_edge_measure(g))
    return {
        "c_one": 2 * phi.sup_norm / lp_norm(phi, mu, 1),
        "c_inf": Fraction(1),
        "c_gamma": Fraction(2 * g.n_edges**2),
        "growth": Fraction(2 * g.n_edges),
    }
