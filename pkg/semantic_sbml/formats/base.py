from abc import ABC, abstractmethod
from typing import Any

from ..model.document import ModelDocument


class BaseFormat(ABC):
    """Base class for model text formats"""

    #: Short format name used by detection and the CLI
    name = "base"
    #: Media type of serialized documents
    media_type = "application/octet-stream"

    @abstractmethod
    def read(self, data: bytes) -> ModelDocument:
        """Parse serialized bytes into a document.

        Args:
            data: Serialized model

        Returns:
            Parsed model document
        """
        pass

    @abstractmethod
    def write(self, doc: ModelDocument, **kwargs: Any) -> bytes:
        """Serialize a document.

        Args:
            doc: Model document (must validate)
            **kwargs: Format-specific options

        Returns:
            Serialized bytes
        """
        pass

    def detect(self, data: bytes) -> bool:
        """Detect if data is in this format.

        Args:
            data: Raw input bytes

        Returns:
            True if this format can read the data
        """
        # To be implemented by subclasses
        return False

    @staticmethod
    def _leading_text(data: bytes) -> str:
        """First non-blank characters of the input, BOM stripped."""
        head = data[:256].decode("utf-8", errors="replace")
        return head.lstrip("\ufeff \t\r\n")
