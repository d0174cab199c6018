"""Contractions of tropical hyperelliptic covers and their Gorenstein singularities."""
from .halfint import HalfInt
from .cover import (
    Edge, Marking, TropCover, Vertex, MalformedInput,
    build_cover_graph, contracted_subcurve_genus, validate_cover,
)
from .clfunc import (
    CLFunction, check_balancing, div_at, is_contraction_datum, level_structure,
    pullback_to_cover, solve_slopes, sprout, truncate,
)
from .contract import contract, contraction_locus, genus_audit, multidegree, parity_analysis
from .singularity import (
    Branch, SingularityChart, certify_gorenstein, dualizing_pullback, eta_generator,
    glue_decomposition, make_chart, normalize, present,
)

__version__ = "0.1.0"
