"""Region documents and command-line value syntax."""

from spectral_construct.parsers.region_parser import load_region, parse_region, parse_region_text

__all__ = ["load_region", "parse_region", "parse_region_text"]
