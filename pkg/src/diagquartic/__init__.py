"""Brauer-Manin analysis of diagonal quartic surfaces over the rationals."""

from .brauer import construct_algebra, verdict
from .localpoints import everywhere_locally_soluble, qp_soluble
from .surface import Surface, normalize, theorem_conditions

__all__ = [
    "Surface",
    "construct_algebra",
    "everywhere_locally_soluble",
    "normalize",
    "qp_soluble",
    "theorem_conditions",
    "verdict",
]
