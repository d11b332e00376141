"""Move Method refactoring recommender.

Fuses call-graph (structural) and AST-path (semantic) embeddings of
methods, trains binary classifiers on auto-generated samples, and ranks
candidate target classes for every method.
"""

from .config import Config
from .rng import RandomStream, seeded_rng

__version__ = "0.1.0"

__all__ = ["Config", "RandomStream", "seeded_rng", "__version__"]
