"""Request handlers, one tool per request family."""

from .cartier import CartierTool
from .classify import ClassifyTool
from .construct import ConstructTool
from .decide import DecideTool
from .osculate import OsculateTool
from .roundtrip import RoundtripTool

__all__ = [
    "CartierTool",
    "ClassifyTool",
    "ConstructTool",
    "DecideTool",
    "OsculateTool",
    "RoundtripTool",
]
