"""
Model text formats and input auto-detection.
"""

import logging
from typing import Optional, Union

from ..errors import ParseFailure
from ..model.document import ModelDocument
from .base import BaseFormat
from .sbml import SbmlFormat, SbmlReader, SbmlSerializationOptions, read_sbml, write_sbml
from .shorthand import ShorthandFormat, parse_shorthand, print_shorthand

logger = logging.getLogger(__name__)

# Detection order: shorthand headers are checked before the generic "<" test.
FORMATS: list[BaseFormat] = [ShorthandFormat(), SbmlFormat()]


def detect_format(data: Union[bytes, str]) -> Optional[BaseFormat]:
    """Return the first registered format that claims ``data``."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    for fmt in FORMATS:
        if fmt.detect(data):
            logger.debug(f"Detected {fmt.name} input")
            return fmt
    return None


def get_format(name: str) -> BaseFormat:
    for fmt in FORMATS:
        if fmt.name == name:
            return fmt
    raise KeyError(name)


def load_model(data: Union[bytes, str]) -> ModelDocument:
    """Parse SBML or shorthand bytes, chosen by the leading ``<`` or ``@model:``.

    Raises:
        ParseFailure: the input matches neither format or fails to parse
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    fmt = detect_format(data)
    if fmt is None:
        raise ParseFailure("input is neither SBML (starts with '<') nor shorthand ('@model:')")
    return fmt.read(data)


__all__ = [
    "BaseFormat",
    "FORMATS",
    "SbmlFormat",
    "SbmlReader",
    "SbmlSerializationOptions",
    "ShorthandFormat",
    "detect_format",
    "get_format",
    "load_model",
    "parse_shorthand",
    "print_shorthand",
    "read_sbml",
    "write_sbml",
]
