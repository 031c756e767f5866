"""Steady states, spectra, and slow interface dynamics for viscous fronts.

The heavy lifting lives in the compiled extension ``_mfront``; this package
re-exports its public surface.
"""

from ._mfront import *  # noqa: F401,F403
from ._mfront import __version__  # noqa: F401
