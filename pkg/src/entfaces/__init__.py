"""Exact polymatroid cones, the 2-faces of Gamma_4, and entropic points on them."""

from .catalog import Catalog, FaceType, RayName, build_catalog, named_rank_function
from .cone import ExtremeRay, FacePair, double_description, enumerate_2faces, verify_extreme
from .dist import JointDist, entropy_vector, marginalize, product_combine
from .entspace import (
    GroundSet,
    LinearInequality,
    SetFunction,
    apply_permutation,
    combine,
    elemental_inequalities,
    is_polymatroid,
    restrict,
)
from .faces import (
    FacePoint,
    Verdict,
    face_point_vector,
    membership,
    region_sample,
    validation_set,
    witness,
)

__all__ = [
    "Catalog",
    "FaceType",
    "RayName",
    "build_catalog",
    "named_rank_function",
    "ExtremeRay",
    "FacePair",
    "double_description",
    "enumerate_2faces",
    "verify_extreme",
    "JointDist",
    "entropy_vector",
    "marginalize",
    "product_combine",
    "GroundSet",
    "LinearInequality",
    "SetFunction",
    "apply_permutation",
    "combine",
    "elemental_inequalities",
    "is_polymatroid",
    "restrict",
    "FacePoint",
    "Verdict",
    "face_point_vector",
    "membership",
    "region_sample",
    "validation_set",
    "witness",
]

__version__ = "0.1.0"
