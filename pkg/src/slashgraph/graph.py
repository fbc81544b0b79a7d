"""Directed s-t graphs, the slash product, morphisms and vertex subsets.

Vertices and edges are dense integer ids. Human-readable provenance lives
in ``vertex_labels`` / ``edge_labels``; every edge additionally carries a
*word*, the tuple of base-edge indices it was built from, which is what
makes products of products comparable independent of bracketing.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import InvalidGraphError, NotAMorphismError, ResourceCapError

SLASH = "⊘"


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite connected directed graph, optionally with a source and sink.

    Use :func:`make_graph` rather than the constructor; it validates the
    edge list and fills in default labels.
    """

    n_vertices: int
    src: np.ndarray
    dst: np.ndarray
    source: int | None
    sink: int | None
    vertex_labels: tuple[str, ...]
    edge_labels: tuple[str, ...]
    edge_words: tuple[tuple[int, ...], ...]
    embedding: np.ndarray | None = field(default=None, repr=False)
    outer_vertex_map: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_edges(self) -> int:
        return int(self.src.shape[0])

    @property
    def is_st(self) -> bool:
        return self.source is not None

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(int(u), int(v)): i for i, (u, v) in enumerate(zip(self.src, self.dst))}

    @cached_property
    def word_index(self) -> dict[tuple[int, ...], int]:
        return {w: i for i, w in enumerate(self.edge_words)}

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.vertices]
        for i, u in enumerate(self.src.tolist()):
            out[u].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in self.vertices]
        for i, v in enumerate(self.dst.tolist()):
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        nb: list[set[int]] = [set() for _ in self.vertices]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in nb) for nb in self.neighbors)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Undirected incidence in CSR form: ``(indptr, neighbour, edge id)``."""
        deg = np.zeros(self.n_vertices + 1, dtype=np.int64)
        np.add.at(deg, self.src + 1, 1)
        np.add.at(deg, self.dst + 1, 1)
        indptr = np.cumsum(deg)
        nbr = np.empty(2 * self.n_edges, dtype=np.int64)
        eid = np.empty(2 * self.n_edges, dtype=np.int64)
        fill = indptr[:-1].copy()
        for i, (u, v) in enumerate(self.edges):
            nbr[fill[u]], eid[fill[u]] = v, i
            fill[u] += 1
            nbr[fill[v]], eid[fill[v]] = u, i
            fill[v] += 1
        return indptr, nbr, eid

    def same_as(self, other: "Graph") -> bool:
        """Same vertices, edges, endpoints and labels (not necessarily the same object)."""
        return self is other or (
            isinstance(other, Graph)
            and self.n_vertices == other.n_vertices
            and self.source == other.source
            and self.sink == other.sink
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and self.vertex_labels == other.vertex_labels
        )

    def vertex_id(self, label: str) -> int:
        try:
            return self.vertex_labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def __repr__(self) -> str:
        kind = "StGraph" if self.is_st else "Graph"
        return f"<{kind} |V|={self.n_vertices} |E|={self.n_edges}>"


def _reachable(start: int, adjacency: Sequence[Sequence[int]]) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def make_graph(
    n_vertices: int,
    edges: Sequence[tuple[int, int]],
    source: int | None = None,
    sink: int | None = None,
    vertex_labels: Sequence[str] | None = None,
    edge_labels: Sequence[str] | None = None,
    edge_words: Sequence[tuple[int, ...]] | None = None,
    *,
    st_check: str = "raise",
    embedding: np.ndarray | None = None,
    outer_vertex_map: np.ndarray | None = None,
) -> Graph:
    """Validate an edge list and build a :class:`Graph`.

    Rejects self-loops, repeated or antiparallel edges, edgeless and
    disconnected inputs. When ``source`` is given the result is an s-t
    graph: ``source != sink`` and every vertex must lie on a directed
    path from source to sink. ``st_check="warn"`` downgrades only that
    last path condition to a warning.
    """
    if n_vertices < 2:
        raise InvalidGraphError("a graph needs at least two vertices")
    if not edges:
        raise InvalidGraphError("a graph needs at least one edge")
    src = np.asarray([int(u) for u, _ in edges], dtype=np.int64)
    dst = np.asarray([int(v) for _, v in edges], dtype=np.int64)
    if src.min() < 0 or dst.min() < 0 or max(src.max(), dst.max()) >= n_vertices:
        raise InvalidGraphError("edge endpoint outside the vertex range")
    seen: set[tuple[int, int]] = set()
    for u, v in zip(src.tolist(), dst.tolist()):
        if u == v:
            raise InvalidGraphError(f"self-loop at vertex {u}")
        if (u, v) in seen or (v, u) in seen:
            raise InvalidGraphError(f"parallel edge between {u} and {v}")
        seen.add((u, v))
    undirected: list[list[int]] = [[] for _ in range(n_vertices)]
    forward: list[list[int]] = [[] for _ in range(n_vertices)]
    backward: list[list[int]] = [[] for _ in range(n_vertices)]
    for u, v in zip(src.tolist(), dst.tolist()):
        undirected[u].append(v)
        undirected[v].append(u)
        forward[u].append(v)
        backward[v].append(u)
    if len(_reachable(0, undirected)) != n_vertices:
        raise InvalidGraphError("graph is not connected")
    if (source is None) != (sink is None):
        raise InvalidGraphError("source and sink must be given together")
    if source is not None:
        if not (0 <= source < n_vertices and 0 <= sink < n_vertices):
            raise InvalidGraphError("source or sink outside the vertex range")
        if source == sink:
            raise InvalidGraphError("source and sink must differ")
        on_path = _reachable(source, forward) & _reachable(sink, backward)
        if len(on_path) != n_vertices:
            missing = sorted(set(range(n_vertices)) - on_path)
            msg = f"vertices {missing} lie on no directed source-sink path"
            if st_check == "warn":
                warnings.warn(msg, stacklevel=2)
            else:
                raise InvalidGraphError(msg)
    if vertex_labels is None:
        vertex_labels = [str(i) for i in range(n_vertices)]
    if edge_labels is None:
        edge_labels = [f"{vertex_labels[u]}->{vertex_labels[v]}" for u, v in edges]
    if edge_words is None:
        edge_words = [(i,) for i in range(len(edges))]
    if len(vertex_labels) != n_vertices or len(edge_labels) != len(edges):
        raise InvalidGraphError("label count does not match the graph size")
    if len(set(vertex_labels)) != n_vertices:
        raise InvalidGraphError("vertex labels must be unique")
    for arr in (src, dst):
        arr.setflags(write=False)
    if embedding is not None:
        embedding.setflags(write=False)
    if outer_vertex_map is not None:
        outer_vertex_map.setflags(write=False)
    return Graph(
        n_vertices=n_vertices,
        src=src,
        dst=dst,
        source=source,
        sink=sink,
        vertex_labels=tuple(vertex_labels),
        edge_labels=tuple(edge_labels),
        edge_words=tuple(tuple(w) for w in edge_words),
        embedding=embedding,
        outer_vertex_map=outer_vertex_map,
    )


def path_graph(k: int) -> Graph:
    """The directed path with vertices ``i/k`` from source 0 to sink 1."""
    if k < 2:
        raise InvalidGraphError("path length must be at least 2")
    labels = [str(Fraction(i, k)) for i in range(k + 1)]
    edges = [(i - 1, i) for i in range(1, k + 1)]
    return make_graph(k + 1, edges, 0, k, labels)


def diamond_graph(k: int, m: int) -> Graph:
    """``m`` copies of the path of length ``k`` glued at both ends.

    Vertex order is source, then the interior of branch 1, ..., branch m,
    then sink; edges run branch by branch from source to sink.
    """
    if k < 2 or m < 2:
        raise InvalidGraphError("diamond depth and branching must both be at least 2")
    n = (k - 1) * m + 2
    sink = n - 1

    def vid(j: int, branch: int) -> int:
        if j == 0:
            return 0
        if j == k:
            return sink
        return 1 + (branch - 1) * (k - 1) + (j - 1)

    labels = ["0"] + [
        f"({Fraction(j, k)},{i})" for i in range(1, m + 1) for j in range(1, k)
    ] + ["1"]
    edges = [(vid(j - 1, i), vid(j, i)) for i in range(1, m + 1) for j in range(1, k + 1)]
    return make_graph(n, edges, 0, sink, labels)


LAAKSO_LABELS = ("u0", "u1/4", "u1/2+", "u1/2-", "u3/4", "u1")


def laakso_graph() -> Graph:
    """Six vertices, six edges: a path of length 4 with a doubled middle."""
    edges = [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)]
    return make_graph(6, edges, 0, 5, LAAKSO_LABELS)


def oslash_product(h: Graph, g: Graph, caps: Caps = DEFAULT_CAPS) -> Graph:
    """Replace every edge of ``h`` by a copy of the s-t graph ``g``.

    The vertex set is ``E(h) x V(g)`` modulo gluing the sink of one copy to
    the source of the next wherever the underlying ``h``-edges meet; copies
    sharing a head share their sink, copies sharing a tail share their
    source. Each class is identified by its lexicographically least member
    and classes are numbered in that order. Edge ``e (x) f`` receives id
    ``e * |E(g)| + f``.

    The result keeps ``h``'s source and sink when ``h`` has them, and
    records ``embedding[e, u]`` (the vertex id of ``e (x) u``) and
    ``outer_vertex_map[x]`` (the canonical copy of ``x in V(h)``).
    """
    if not g.is_st:
        raise InvalidGraphError("the right factor of a slash product must be an s-t graph")
    n_edges = h.n_edges * g.n_edges
    if n_edges > caps.power_edges:
        raise ResourceCapError(
            f"slash product would have {n_edges} edges (cap {caps.power_edges})"
        )
    s, t = g.source, g.sink
    ng = g.n_vertices
    # Rep of the class glued at each h-vertex x: least (e, s) with e- = x or (e, t) with e+ = x.
    vertex_rep: list[tuple[int, int]] = []
    for x in h.vertices:
        members = [(e, s) for e in h.out_edges[x]] + [(e, t) for e in h.in_edges[x]]
        vertex_rep.append(min(members))
    reps: list[tuple[tuple[int, int], int]] = [(rep, -1 - x) for x, rep in enumerate(vertex_rep)]
    for e in range(h.n_edges):
        for u in g.vertices:
            if u != s and u != t:
                reps.append(((e, u), 0))
    reps.sort()
    embedding = np.empty((h.n_edges, ng), dtype=np.int64)
    outer = np.empty(h.n_vertices, dtype=np.int64)
    labels: list[str] = []
    for vid, ((e, u), tag) in enumerate(reps):
        if tag < 0:
            x = -1 - tag
            outer[x] = vid
            labels.append(h.vertex_labels[x])
        else:
            embedding[e, u] = vid
            labels.append(f"{h.edge_labels[e]}{SLASH}{g.vertex_labels[u]}")
    for e, (a, b) in enumerate(h.edges):
        embedding[e, s] = outer[a]
        embedding[e, t] = outer[b]
    edges, elabels, words = [], [], []
    for e in range(h.n_edges):
        for f, (a, b) in enumerate(g.edges):
            edges.append((int(embedding[e, a]), int(embedding[e, b])))
            elabels.append(f"{h.edge_labels[e]}{SLASH}{g.edge_labels[f]}")
            words.append(h.edge_words[e] + g.edge_words[f])
    source = int(outer[h.source]) if h.is_st else None
    sink = int(outer[h.sink]) if h.is_st else None
    return make_graph(
        len(reps),
        edges,
        source,
        sink,
        labels,
        elabels,
        words,
        st_check="warn",
        embedding=embedding,
        outer_vertex_map=outer,
    )


def oslash_power(g: Graph, n: int, caps: Caps = DEFAULT_CAPS, nesting: str = "left") -> Graph:
    """``n``-fold slash power.

    ``nesting="left"`` builds ``G^(n) = G^(n-1) (x) G``; ``"right"`` builds
    ``G (x) G^(n-1)``. The two are isomorphic; see :func:`reassociation_map`.
    """
    if n < 1:
        raise InvalidGraphError("slash power exponent must be at least 1")
    if not g.is_st:
        raise InvalidGraphError("slash powers need an s-t graph")
    if g.n_edges**n > caps.power_edges:
        raise ResourceCapError(
            f"G^{n} would have {g.n_edges**n} edges (cap {caps.power_edges})"
        )
    out = g
    for _ in range(n - 1):
        out = oslash_product(out, g, caps) if nesting == "left" else oslash_product(g, out, caps)
    return out


def power_sizes(n_vertices: int, n_edges: int, n: int) -> tuple[int, int]:
    """``(|V|, |E|)`` of the ``n``-th slash power without building it."""
    v, e = n_vertices, n_edges
    for _ in range(n - 1):
        v, e = v + e * (n_vertices - 2), e * n_edges
    return v, e


def reassociation_map(a: Graph, b: Graph) -> np.ndarray:
    """Vertex bijection ``a -> b`` matching edges with equal words.

    Raises ``InvalidGraphError`` when the word-matched edges do not induce a
    well-defined graph isomorphism.
    """
    if a.n_vertices != b.n_vertices or a.n_edges != b.n_edges:
        raise InvalidGraphError("graphs differ in size")
    vmap = np.full(a.n_vertices, -1, dtype=np.int64)
    for i, word in enumerate(a.edge_words):
        j = b.word_index.get(word)
        if j is None:
            raise InvalidGraphError(f"edge word {word} missing from target")
        for x, y in ((a.src[i], b.src[j]), (a.dst[i], b.dst[j])):
            if vmap[x] == -1:
                vmap[x] = y
            elif vmap[x] != y:
                raise InvalidGraphError(f"vertex {x} maps inconsistently")
    if len(set(vmap.tolist())) != a.n_vertices:
        raise InvalidGraphError("word matching is not injective on vertices")
    return vmap


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class Morphism:
    """A vertex map carrying directed edges of ``domain`` onto edges of ``codomain``."""

    domain: Graph
    codomain: Graph
    vertex_map: np.ndarray

    @cached_property
    def edge_map(self) -> np.ndarray:
        """Image edge id per domain edge, ``-1`` where no image edge exists."""
        vm = self.vertex_map
        idx = self.codomain.edge_index
        return np.asarray(
            [idx.get((int(vm[u]), int(vm[v])), -1) for u, v in self.domain.edges],
            dtype=np.int64,
        )

    @property
    def is_st(self) -> bool:
        d, c = self.domain, self.codomain
        return (
            d.is_st
            and c.is_st
            and int(self.vertex_map[d.source]) == c.source
            and int(self.vertex_map[d.sink]) == c.sink
        )

    @property
    def is_surjective(self) -> bool:
        return set(self.edge_map.tolist()) >= set(range(self.codomain.n_edges))

    def fiber(self, codomain_edge: int) -> np.ndarray:
        return np.flatnonzero(self.edge_map == codomain_edge)


def validate_morphism(theta: Morphism, st: bool = False) -> tuple[bool, list[str]]:
    problems = []
    if theta.vertex_map.shape != (theta.domain.n_vertices,):
        return False, ["vertex map has the wrong length"]
    vm = theta.vertex_map
    if vm.min() < 0 or vm.max() >= theta.codomain.n_vertices:
        return False, ["vertex map leaves the codomain"]
    for i in np.flatnonzero(theta.edge_map < 0):
        u, v = theta.domain.edges[i]
        problems.append(f"edge {i} ({u}->{v}) maps to non-edge ({vm[u]}->{vm[v]})")
    if st and not theta.is_st:
        problems.append("source or sink is not preserved")
    return not problems, problems


def make_morphism(domain: Graph, codomain: Graph, vertex_map, st: bool = False) -> Morphism:
    vm = np.asarray(vertex_map, dtype=np.int64)
    vm.setflags(write=False)
    theta = Morphism(domain, codomain, vm)
    ok, problems = validate_morphism(theta, st=st)
    if not ok:
        raise NotAMorphismError("; ".join(problems))
    return theta


def identity_morphism(g: Graph) -> Morphism:
    return make_morphism(g, g, np.arange(g.n_vertices))


def vertex_levels(g: Graph) -> np.ndarray | None:
    """Directed distance from the source when every edge climbs one level.

    Returns None unless the graph is graded: each edge goes from level ``i``
    to ``i + 1``, only the source has level 0 and only the sink has the top
    level.
    """
    if not g.is_st:
        return None
    level = np.full(g.n_vertices, -1, dtype=np.int64)
    level[g.source] = 0
    queue = deque([g.source])
    while queue:
        x = queue.popleft()
        for e in g.out_edges[x]:
            y = int(g.dst[e])
            if level[y] == -1:
                level[y] = level[x] + 1
                queue.append(y)
    if (level < 0).any() or (level[g.dst] != level[g.src] + 1).any():
        return None
    top = level[g.sink]
    if (level == 0).sum() != 1 or (level == top).sum() != 1:
        return None
    return level


def collapsing_map(g: Graph) -> Morphism:
    """The s-t morphism onto the path ``P_k`` sending a vertex to its level.

    Only the source maps to 0 and only the sink maps to 1, which is what
    the spectral construction needs.
    """
    level = vertex_levels(g)
    if level is None:
        raise NotAMorphismError("graph is not graded, so it does not collapse onto a path")
    return make_morphism(g, path_graph(int(level[g.sink])), level, st=True)


def collapsing_map_diamond(k: int, m: int) -> Morphism:
    g = diamond_graph(k, m)
    images = [0] + [j for _ in range(m) for j in range(1, k)] + [k]
    return make_morphism(g, path_graph(k), images, st=True)


def oslash_morphism(
    theta_h: Morphism,
    theta_g: Morphism,
    domain: Graph | None = None,
    codomain: Graph | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> Morphism:
    """``(theta_h (x) theta_g)(e (x) u) = theta_h(e) (x) theta_g(u)``.

    ``theta_g`` must preserve source and sink, otherwise the map is not
    well defined on glued vertices.
    """
    ok, problems = validate_morphism(theta_g, st=True)
    if not ok:
        raise NotAMorphismError("right factor must be an s-t morphism: " + "; ".join(problems))
    ok, problems = validate_morphism(theta_h)
    if not ok:
        raise NotAMorphismError("; ".join(problems))
    if domain is None:
        domain = oslash_product(theta_h.domain, theta_g.domain, caps)
    if codomain is None:
        codomain = oslash_product(theta_h.codomain, theta_g.codomain, caps)
    vm = np.full(domain.n_vertices, -1, dtype=np.int64)
    he, gv = theta_h.edge_map, theta_g.vertex_map
    for e in range(theta_h.domain.n_edges):
        for u in range(theta_g.domain.n_vertices):
            x = domain.embedding[e, u]
            y = codomain.embedding[he[e], gv[u]]
            if vm[x] == -1:
                vm[x] = y
            elif vm[x] != y:
                raise NotAMorphismError(f"image of glued vertex {x} is ambiguous")
    return make_morphism(domain, codomain, vm)


# ------------------------------------------------------------------ subsets


@dataclass(frozen=True, eq=False)
class Subset:
    """A set of vertices of ``graph`` stored as a boolean mask."""

    graph: Graph
    mask: np.ndarray

    @classmethod
    def of(cls, graph: Graph, vertices) -> "Subset":
        mask = np.zeros(graph.n_vertices, dtype=bool)
        mask[list(vertices)] = True
        mask.setflags(write=False)
        return cls(graph, mask)

    @classmethod
    def from_bits(cls, graph: Graph, bits: int) -> "Subset":
        return cls.of(graph, [v for v in graph.vertices if bits >> v & 1])

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(np.flatnonzero(self.mask).tolist())

    @property
    def bits(self) -> int:
        return sum(1 << v for v in self.members)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.graph.vertex_labels[v] for v in self.members)

    @cached_property
    def boundary(self) -> np.ndarray:
        return np.flatnonzero(self.mask[self.graph.src] != self.mask[self.graph.dst])

    @cached_property
    def interior_edges(self) -> np.ndarray:
        return np.flatnonzero(self.mask[self.graph.src] & self.mask[self.graph.dst])

    def complement(self) -> "Subset":
        mask = ~self.mask
        mask.setflags(write=False)
        return Subset(self.graph, mask)

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, v: int) -> bool:
        return bool(self.mask[v])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subset)
            and other.graph.same_as(self.graph)
            and np.array_equal(other.mask, self.mask)
        )

    def __hash__(self) -> int:
        return hash((id(self.graph), self.bits))

    def __repr__(self) -> str:
        return "Subset{" + ", ".join(self.labels) + "}"


def connected_components(g: Graph, s: Subset) -> list[Subset]:
    """Components of the subgraph induced by ``s`` (undirected), by least vertex."""
    remaining = set(s.members)
    parts = []
    while remaining:
        start = min(remaining)
        comp = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.neighbors[x]:
                if y in remaining and y not in comp:
                    comp.add(y)
                    queue.append(y)
        remaining -= comp
        parts.append(Subset.of(g, sorted(comp)))
    return parts


def connected_subset_bits(g: Graph, caps: Caps = DEFAULT_CAPS) -> Iterator[int]:
    """Bitmasks of all connected proper nonempty vertex subsets, each once.

    Sets are grouped by least vertex ``v``; within a group the search keeps
    the candidate set equal to the neighbours of the current set that are
    neither excluded nor members, and excludes a candidate once both
    branches on it have been explored.
    """
    full = (1 << g.n_vertices) - 1
    adj = g.neighbor_masks
    count = 0

    def grow(current: int, ext: int, excl: int) -> Iterator[int]:
        nonlocal count
        if current != full:
            count += 1
            if count > caps.connected_subsets:
                raise ResourceCapError(
                    f"more than {caps.connected_subsets} connected subsets"
                )
            yield current
        while ext:
            low = ext & -ext
            ext ^= low
            w = low.bit_length() - 1
            fresh = adj[w] & ~excl & ~current & ~ext
            yield from grow(current | low, ext | fresh, excl)
            excl |= low

    for v in g.vertices:
        below = (1 << v) - 1
        start = 1 << v
        yield from grow(start, adj[v] & ~below & ~start, below | start)


def enumerate_subsets(
    g: Graph, mode: str = "exhaustive", caps: Caps = DEFAULT_CAPS
) -> Iterator[Subset]:
    """Proper nonempty vertex subsets.

    ``"exhaustive"`` yields all ``2**|V| - 2`` of them in bitmask order and
    refuses graphs above the exhaustive cap. ``"connected"`` yields only the
    subsets inducing a connected subgraph.
    """
    if mode == "exhaustive":
        if g.n_vertices > caps.exhaustive_vertices:
            raise ResourceCapError(
                f"{g.n_vertices} vertices exceeds the exhaustive cap {caps.exhaustive_vertices}"
            )
        for bits in range(1, (1 << g.n_vertices) - 1):
            yield Subset.from_bits(g, bits)
    elif mode == "connected":
        for bits in connected_subset_bits(g, caps):
            yield Subset.from_bits(g, bits)
    else:
        raise ValueError(f"unknown enumeration mode {mode!r}")
