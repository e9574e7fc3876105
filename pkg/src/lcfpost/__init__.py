"""Probabilistic low-cycle-fatigue postprocessor for finite-element results.

Computes the probability of surface crack initiation from linear-elastic
FEA displacement fields via a local Weibull hazard model, and calibrates
the underlying material parameters from strain-controlled specimen tests.
"""

from .mesh import (
    Node,
    Element,
    ElementKind,
    Mesh,
    BoundaryFace,
    MeshParseError,
    DegenerateElementError,
    read_mesh,
    write_mesh,
    extract_boundary_faces,
)
from .fields import ElasticConstants, strain_at, stress_from_strain, von_mises
from .materials import (
    RambergOsgoodParams,
    CMBParams,
    MaterialParams,
    ramberg_osgood_strain,
    neuber_shakedown,
    cmb_life,
    cmb_strain,
    load_material,
    save_material,
)
from .quadrature import QuadratureRule, gauss_interval, tensor_square, triangle_rule
from .reliability import (
    FaceContribution,
    ReliabilityResult,
    integrate_hazard,
    weibull_scale,
    pof,
    failure_density,
    crack_count_probability,
    aggregate_segments,
    top_faces_report,
)
from .calibration import (
    SpecimenRecord,
    load_specimens,
    save_specimens,
    log_likelihood,
    fit_mle,
    FitResult,
)

__version__ = "0.1.0"

__all__ = [
    "Node", "Element", "ElementKind", "Mesh", "BoundaryFace",
    "MeshParseError", "DegenerateElementError",
    "read_mesh", "write_mesh", "extract_boundary_faces",
    "ElasticConstants", "strain_at", "stress_from_strain", "von_mises",
    "RambergOsgoodParams", "CMBParams", "MaterialParams",
    "ramberg_osgood_strain", "neuber_shakedown", "cmb_life", "cmb_strain",
    "load_material", "save_material",
    "QuadratureRule", "gauss_interval", "tensor_square", "triangle_rule",
    "FaceContribution", "ReliabilityResult", "integrate_hazard",
    "weibull_scale", "pof", "failure_density", "crack_count_probability",
    "aggregate_segments", "top_faces_report",
    "SpecimenRecord", "load_specimens", "save_specimens",
    "log_likelihood", "fit_mle", "FitResult",
    "__version__",
]
