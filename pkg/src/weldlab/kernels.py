"""Backend selection for the hot enumeration kernel.

The Cython extension is used when it was built; otherwise the pure-Python
implementation with the same signature is imported.
"""

try:
    from ._matchings import enumerate_regular_matchings
    BACKEND = "cython"
except ImportError:  # extension not compiled
    from ._matchings_py import enumerate_regular_matchings
    BACKEND = "python"

__all__ = ["BACKEND", "enumerate_regular_matchings"]
