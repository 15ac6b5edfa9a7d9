"""swekit - static word embeddings for sentence semantics.

Pipeline: vocab -> extract -> pca -> distill / xl-train -> encode / ensemble -> reports.
"""

from swekit._version import __version__, __build__

__all__ = ["__version__", "__build__"]
