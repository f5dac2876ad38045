from ._adaptta import *  # noqa: F401,F403
from ._adaptta import __doc__  # noqa: F401
