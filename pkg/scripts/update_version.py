#!/usr/bin/env python3
"""Stamp semantic_sbml/__version__.py with the current UTC build time."""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from semantic_sbml.__version__ import update_version  # noqa: E402

if __name__ == "__main__":
    print(f"Version set to {update_version()}")
