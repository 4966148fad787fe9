"""polytower: exact certification toolkit for towers of finite polyhedra."""

from .complexes import (
    Complex,
    Point,
    Subcomplex,
    barycenter_point,
    barycentric_subdivision,
    distance,
    flatten_point,
    induced_subcomplex,
    is_full_subcomplex,
    lift_to_subdivision,
    make_point,
    subcomplex_from,
    validate,
    vertex_point,
    whole_subcomplex,
)
from .connectivity import (
    HomologySummary,
    ae_verdict,
    homology,
    is_connected,
    k_connected_verdict,
    pi1_presentation,
    pi1_verdict,
)
from .maps import (
    QSMap,
    VertexMap,
    apply,
    check_quasi_simplicial,
    check_simplicial,
    compose,
    identity_qsmap,
    induced_homology_map,
    is_surjective,
    lipschitz_constant,
    preimage_subcomplex,
)
from .plmaps import PartialPLMap
from .stars import (
    IndexedCover,
    OpenStarSet,
    are_close,
    barycentric_star,
    barycentric_vertex_star,
    closed_star_cover,
    cover_B,
    cover_O,
    covers_isomorphic,
    deformation_phi,
    mesh,
    nerve,
    open_star,
    open_vertex_star,
    pullback_cover,
)
from .carriers import (
    Carrier,
    close_maps_homotopy,
    extend_carried,
    is_carried,
    validate_carrier,
)
from .towers import (
    RegularityReport,
    ThreadApprox,
    Tower,
    TowerCertificate,
    pullback_star_cover,
    regularity_report,
    restrict_tower,
    single_lift,
    tower_lift,
    verify_tower,
)
from .verdicts import Budgets, DEFAULT_BUDGETS, Verdict

__all__ = [
    "Budgets",
    "Carrier",
    "Complex",
    "DEFAULT_BUDGETS",
    "HomologySummary",
    "IndexedCover",
    "OpenStarSet",
    "PartialPLMap",
    "Point",
    "QSMap",
    "RegularityReport",
    "Subcomplex",
    "ThreadApprox",
    "Tower",
    "TowerCertificate",
    "Verdict",
    "VertexMap",
    "ae_verdict",
    "apply",
    "are_close",
    "barycenter_point",
    "barycentric_star",
    "barycentric_subdivision",
    "barycentric_vertex_star",
    "check_quasi_simplicial",
    "check_simplicial",
    "close_maps_homotopy",
    "closed_star_cover",
    "compose",
    "cover_B",
    "cover_O",
    "covers_isomorphic",
    "deformation_phi",
    "distance",
    "extend_carried",
    "flatten_point",
    "homology",
    "identity_qsmap",
    "induced_homology_map",
    "induced_subcomplex",
    "is_carried",
    "is_connected",
    "is_full_subcomplex",
    "is_surjective",
    "k_connected_verdict",
    "lift_to_subdivision",
    "lipschitz_constant",
    "make_point",
    "mesh",
    "nerve",
    "open_star",
    "open_vertex_star",
    "pi1_presentation",
    "pi1_verdict",
    "preimage_subcomplex",
    "pullback_cover",
    "pullback_star_cover",
    "regularity_report",
    "restrict_tower",
    "single_lift",
    "subcomplex_from",
    "tower_lift",
    "validate",
    "validate_carrier",
    "verify_tower",
    "vertex_point",
    "whole_subcomplex",
]
