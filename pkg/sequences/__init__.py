"""
Sequence generators: Halton, Halton-type (polynomial bases) and digital (generating matrices).
"""

from .census import elementary_interval_census
from .digital import GeneratingMatrix, check_t_property, digital_point, faure_matrices, pascal_matrix_power
from .halton import IntegerBaseSet, UnitPoint, halton_array, halton_point, halton_prefix, radical_inverse
from .polynomial import PolyBaseSet, faure_bases, halton_type_point, halton_type_prefix, poly_radical_inverse

__all__ = [
    "elementary_interval_census",
    "GeneratingMatrix",
    "check_t_property",
    "digital_point",
    "faure_matrices",
    "pascal_matrix_power",
    "IntegerBaseSet",
    "UnitPoint",
    "halton_array",
    "halton_point",
    "halton_prefix",
    "radical_inverse",
    "PolyBaseSet",
    "faure_bases",
    "halton_type_point",
    "halton_type_prefix",
    "poly_radical_inverse",
]
