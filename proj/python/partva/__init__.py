"""Part-whole visual analogy benchmark: generation, solving, evaluation."""

from ._partva import *  # noqa: F401,F403
from ._partva import __version__  # noqa: F401
