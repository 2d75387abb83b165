"""Exact billiards on prefractal Koch snowflake, T-fractal and carpet tables."""
from .exact import Q, QSqrt3, Vec
from .kernel import BACKEND
from .tables import (Family, PointClass, Table, build_carpet, build_koch_snowflake,
                     build_square, build_t_fractal, build_table, build_triangle,
                     classify_point)
from .billiard import (CornerPolicy, GeometryError, Orbit, OrbitStatus, State,
                       billiard_step, is_rational_direction, run_orbit)

__all__ = [
    "Q", "QSqrt3", "Vec", "BACKEND", "Family", "PointClass", "Table", "build_carpet",
    "build_koch_snowflake", "build_square", "build_t_fractal", "build_table",
    "build_triangle", "classify_point", "CornerPolicy", "GeometryError", "Orbit",
    "OrbitStatus", "State", "billiard_step", "is_rational_direction", "run_orbit",
]
__version__ = "0.1.0"
