"""Exact computations with homomorphisms from finite groups into
extensions of finite groups by tori."""

from .errors import DomainError, InternalInvariantViolation, SizeLimitExceeded, ToralMapsError
from .groups import FiniteGroup, FiniteHom
from .mapping import (
    ToralHom,
    centralizer,
    conjugacy_test,
    enumerate_hom_classes,
    fixed_points_report,
    mapping_space_report,
)
from .toral import ToralElement, ToralGroup, finite_catalog, make_toral_group, toral_catalog

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "FiniteGroup",
    "FiniteHom",
    "InternalInvariantViolation",
    "SizeLimitExceeded",
    "ToralElement",
    "ToralGroup",
    "ToralHom",
    "ToralMapsError",
    "centralizer",
    "conjugacy_test",
    "enumerate_hom_classes",
    "finite_catalog",
    "fixed_points_report",
    "make_toral_group",
    "mapping_space_report",
    "toral_catalog",
]
