"""Concentration and exploration toolkit for coupled spin systems.

Exact Gibbs enumeration, coupled spin-edge sampling, cluster reduction of
weighted spin sums, concentration bounds, and isolated-vertex exploration.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
