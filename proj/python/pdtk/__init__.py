try:
    from ._core import *  # noqa: F401,F403
    from ._core import gaussian  # noqa: F401
except ImportError:
    # Development layout: the extension is built by CMake outside the package,
    # reachable through PYTHONPATH.
    from _core import *  # noqa: F401,F403
    from _core import gaussian  # noqa: F401

__version__ = "0.1.0"
