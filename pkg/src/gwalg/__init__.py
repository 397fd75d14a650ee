"""Generalized finite and affine W-algebras attached to pairs of partitions."""

from .centralizer import CentElt, Centralizer, GenIndex, GradedData, graded_data
from .kpoly import KPoly
from .pyramids import Pyramid, build, parse_partition
from .uea import UEA, UEAElement
from .vertex import LambdaPoly, VertexAlgebra, VState

__all__ = [
    "CentElt", "Centralizer", "GenIndex", "GradedData", "graded_data", "KPoly",
    "Pyramid", "build", "parse_partition", "UEA", "UEAElement", "LambdaPoly",
    "VertexAlgebra", "VState",
]

__version__ = "0.1.0"
