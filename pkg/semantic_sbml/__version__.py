"""Version of semantic-sbml.

Releases are numbered ``year.month.day.HHMM`` (UTC build time).
"""

import re
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

__version__ = "2026.10.17.0900"  # Auto-updated

_VERSION_LINE = re.compile(r'^__version__ = "[^"]*"', re.MULTILINE)


def get_current_version(now: Optional[datetime] = None) -> str:
    """Version string for ``now`` (default: the current UTC time)."""
    now = now or datetime.now(timezone.utc)
    return f"{now.year}.{now.month}.{now.day}.{now.hour:02d}{now.minute:02d}"


def update_version(path: Union[str, Path, None] = None, now: Optional[datetime] = None) -> str:
    """Rewrite the ``__version__`` line of ``path`` (this file by default)."""
    target = Path(path) if path is not None else Path(__file__)
    version = get_current_version(now)
    text = target.read_text(encoding="utf-8")
    updated = _VERSION_LINE.sub(f'__version__ = "{version}"', text, count=1)
    target.write_text(updated, encoding="utf-8")
    return version
