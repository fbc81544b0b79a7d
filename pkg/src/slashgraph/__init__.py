"""Exact computations for slash products of s-t graphs.

Builds slash powers with their product measures and geodesic metrics,
certifies isoperimetric and Lipschitz-spectral constants, solves exact
1-Wasserstein problems and evaluates the resulting distortion bounds.
"""

from .bounds import BoundInputs, BoundReport, diamond_bound, kislyakov_bound
from .config import DEFAULT_CAPS, Caps
from .errors import (
    DomainError,
    InvalidGraphError,
    InvalidMeasureError,
    NonGeodesicError,
    NotAMorphismError,
    ResourceCapError,
    SlashGraphError,
)
from .graph import (
    Graph,
    Morphism,
    Subset,
    collapsing_map,
    collapsing_map_diamond,
    diamond_graph,
    laakso_graph,
    make_graph,
    make_morphism,
    oslash_power,
    oslash_product,
    path_graph,
)
from .isoperimetry import (
    IsoReport,
    certify_power,
    iso_dimension,
    iso_ratio,
    min_iso_ratio,
    min_iso_ratio_power,
    perimeter,
    power_conditions,
    witness_family,
)
from .measures import (
    EdgeMeasure,
    GeodesicMetric,
    VertexMeasure,
    edge_measure,
    geodesic_metric,
    induced_vertex_measure,
    laakso_weighted_measure,
    power_edge_measure,
    power_metric,
    standard_metric,
    uniform_edge_measure,
)
from .spectral import SpectralFamily, SpectralReport, build_spectral_family, profile_report
from .transport import TransportInstance, make_instance, w1_beckmann, w1_coupling, w1_tree

__version__ = "0.1.0"
