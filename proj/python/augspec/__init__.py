"""Probabilistic spectral analysis of multivariate real nonstationary signals."""

try:
    from ._augspec import *  # noqa: F401,F403  (installed layout)
    from ._augspec import __doc__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _augspec import *  # noqa: F401,F403
    from _augspec import __doc__  # noqa: F401
