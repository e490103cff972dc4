"""
Taffin

Exact symbolic verification kernel for the vertex representation of twisted
quantum affinizations.
"""
from taffin.config import settings

__version__ = settings.TOOL_VERSION
