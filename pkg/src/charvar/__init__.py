"""Exact computations with decorated representation varieties of surfaces
with marked boundary, over the rationals and small prime fields."""

from .errors import CharvarError, DomainError, EnumerationTooLarge
from .exactfield import GF, QQ, ExactMatrix, Subspace, identity
from .surface import MarkedPoint, SurfaceType, build_presentation
from .flags import Flag, RelativePosition, relative_position, standard_flag
from .jordan import (JordanType, ShuffledJordanType, classify_invariant_flag,
                     count_shuffled_jordan_types, count_shuffles, flag_from_type, jordan_type)
from .repvar import DecoratedRep, MixedGroupElement, dims, mixed_conjugate, sample_random, verify_relation

__version__ = "0.1.0"
