"""Golden HFS files and recorded values, shipped as package data."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Optional, Union

SYMBOLS = ("eq31", "full", "pentagon")
GOLDEN = "golden.json"

PathLike = Union[str, Path]


def catalog_dir() -> Path:
    return Path(str(resources.files(__name__)))


def read_text(name: str, directory: Optional[PathLike] = None) -> str:
    base = Path(directory) if directory is not None else catalog_dir()
    return (base / name).read_text()


def read_symbol_text(name: str, directory: Optional[PathLike] = None) -> str:
    return read_text(f"{name}.hfs", directory)


def golden(directory: Optional[PathLike] = None) -> dict:
    return json.loads(read_text(GOLDEN, directory))
