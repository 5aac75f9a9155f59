"""Coset states over finite groups, their measurements and sample-complexity bounds."""

from ._cosetlab import *  # noqa: F401,F403
from ._cosetlab import __doc__  # noqa: F401
