"""Resource caps shared by the enumeration and construction routines."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import DomainError


@dataclass(frozen=True)
class Caps:
    """Upper limits that turn runaway work into a ``ResourceCapError``.

    ``exhaustive_vertices`` bounds the number of free vertices in a
    brute-force subset scan (2**n subsets). ``power_edges`` bounds the
    edge count of any constructed product graph. ``connected_subsets``
    bounds the connected-subset enumerator. ``frontier_width`` bounds the
    length of the measure-indexed tables used by the product recursion.
    """

    exhaustive_vertices: int = 24
    power_edges: int = 1_000_000
    connected_subsets: int = 2_000_000
    frontier_width: int = 2_000_000

    @classmethod
    def from_file(cls, path: str | Path) -> "Caps":
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown cap(s) in {path}: {sorted(unknown)}")
        for key, value in data.items():
            if not isinstance(value, int) or value <= 0:
                raise DomainError(f"cap {key!r} must be a positive integer")
        return replace(cls(), **data)


DEFAULT_CAPS = Caps()
