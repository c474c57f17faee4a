"""Linear complementary pairs of codes over finite rings."""

from .algebra import AlgebraSpec, RingElem, preset
from .budget import Budget, default_budget
from .codes import LinearCode, RingMatrix, dual, min_distance, weight_distribution
from .errors import RingLcpError
from .equiv import equivalent
from .lcp import check_lcp, is_lcp, projection_idempotent, theorem_5_3_pipeline
from .rmodule import Submodule, from_generators

__all__ = [
    "AlgebraSpec",
    "Budget",
    "LinearCode",
    "RingElem",
    "RingLcpError",
    "RingMatrix",
    "Submodule",
    "check_lcp",
    "default_budget",
    "dual",
    "equivalent",
    "from_generators",
    "is_lcp",
    "min_distance",
    "preset",
    "projection_idempotent",
    "theorem_5_3_pipeline",
    "weight_distribution",
]

__version__ = "0.1.0"
