"""Network-of-caches simulator and analytics.

The compiled core exposes the selection policy analytics (closed forms,
Markov oracle, IRM simulation), the stack-distance analyzer, the tandem
filter-effect experiment and the network simulator presets.
"""

from netcache._core import *  # noqa: F401,F403
from netcache._core import __version__  # noqa: F401
