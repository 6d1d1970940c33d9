"""2-Iwasawa modules of real biquadratic fields: ranks, tables and structure."""

from .fields import BiquadField

__version__ = "0.1.0"
__all__ = ["BiquadField", "__version__"]
