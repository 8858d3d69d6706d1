"""Random k-SAT laboratory."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, build_id  # noqa: F401
