"""Boosted complex free-field covariance verification toolkit."""

try:
    from pwick._pwick import *  # noqa: F401,F403  (installed layout)
    from pwick._pwick import __doc__ as _doc
except ImportError:  # in-tree build: the extension sits on sys.path directly
    from _pwick import *  # noqa: F401,F403
    from _pwick import __doc__ as _doc

__doc__ = _doc
__version__ = "0.1.0"
