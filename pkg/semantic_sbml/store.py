"""
Content-addressed model store used by the HTTP service.

Models are stored as canonical SBML bytes under ``<root>/<h[:2]>/<h>.xml``
where ``h`` is the SHA-256 hex digest of those bytes. Writes go to a
temporary file in the target directory and are moved into place with
``os.replace``; reads take no lock.
"""

import hashlib
import logging
import os
import re
import tempfile
from pathlib import Path
from typing import Union

from .errors import UnknownHandle
from .formats import load_model, write_sbml
from .model.document import ModelDocument

logger = logging.getLogger(__name__)

HANDLE_RE = re.compile(r"[0-9a-f]{64}\Z")
SUFFIX = ".xml"


def canonical_bytes(doc: ModelDocument) -> bytes:
    return write_sbml(doc)


def model_handle(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class ModelStore:
    def __init__(self, root: Union[str, Path]) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, handle: str) -> Path:
        return self.root / handle[:2] / f"{handle}{SUFFIX}"

    def __contains__(self, handle: object) -> bool:
        if not isinstance(handle, str) or not HANDLE_RE.match(handle):
            return False
        return self._path(handle).is_file()

    def __len__(self) -> int:
        return sum(1 for _ in self.root.glob(f"??/*{SUFFIX}"))

    def put(self, doc: ModelDocument) -> str:
        """Store ``doc`` and return its handle; storing twice is a no-op."""
        data = canonical_bytes(doc)
        handle = model_handle(data)
        path = self._path(handle)
        if path.is_file():
            logger.debug(f"Model {handle[:12]} already stored")
            return handle
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".model-", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        logger.info(f"Stored model {doc.id} as {handle[:12]}")
        return handle

    def store_model(self, data: Union[bytes, str]) -> str:
        """Parse SBML or shorthand input and store its canonical SBML.

        Raises:
            ParseFailure: the input does not parse
            InvalidModel: the parsed document has validation errors
        """
        return self.put(load_model(data))

    def get_bytes(self, handle: str) -> bytes:
        """Stored canonical SBML.

        Raises:
            UnknownHandle: nothing is stored under ``handle``
        """
        if handle not in self:
            raise UnknownHandle(f"no model stored under {handle}", {"handle": handle})
        return self._path(handle).read_bytes()

    def load(self, handle: str) -> ModelDocument:
        return load_model(self.get_bytes(handle))
