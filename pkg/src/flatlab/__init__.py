"""Exact-arithmetic laboratory for translation surfaces and their dynamics."""

from . import errors
from .errors import *  # noqa: F401,F403
from .exact_scalar import *  # noqa: F401,F403
from .surface import *  # noqa: F401,F403
from .homology import *  # noqa: F401,F403
from .planes import *  # noqa: F401,F403
from .triangulation import *  # noqa: F401,F403
from .veech import *  # noqa: F401,F403
from .margulis import *  # noqa: F401,F403

__version__ = "0.1.0"
