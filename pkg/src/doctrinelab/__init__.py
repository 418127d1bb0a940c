"""doctrinelab: a finite-model workbench for doctrines and triposes."""

from .verdicts import Verdict
from .poset import FinPoset, MonotoneMap
from .fincat import FinCategory
from .doctrine import Doctrine

__version__ = "0.1.0"

__all__ = ["Verdict", "FinPoset", "MonotoneMap", "FinCategory", "Doctrine",
           "__version__"]
