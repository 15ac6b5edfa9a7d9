"""swekit._version

Single place for runtime versioning / build identification.

Provenance sidecars record this string, so artifacts can be traced back to the
code that produced them.
"""

from __future__ import annotations

__version__ = "0.1.0"
__build__ = "2026-10-19"
