"""Exact computations with uniserial representations of <x> ⋉ L(V).

L(V) = V ⊕ Λ²V is the free 2-step nilpotent Lie algebra on V and x acts on V
by a single Jordan block.  Everything is exact over the rationals.
"""
__version__ = "0.1.0"

from .exact_linalg import Matrix, Q  # noqa: E402
from .lie_core import build_g  # noqa: E402
from .rep_builder import RepParams, build_R, normalize, dualize  # noqa: E402
from .module_analysis import kernel_and_flags, isomorphism_search  # noqa: E402

__all__ = ["Matrix", "Q", "build_g", "RepParams", "build_R", "normalize", "dualize",
           "kernel_and_flags", "isomorphism_search", "__version__"]
