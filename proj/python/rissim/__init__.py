"""RIS-aided ISAC link simulator: two-phase protocol, subspace localization
and sensing-based beamforming, wrapped from the C++ core."""

try:
    from ._rissim import *  # noqa: F401,F403  (installed package layout)
    from ._rissim import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: extension sits next to the package
    from _rissim import *  # noqa: F401,F403
