"""TSPLIB ATSP files (EXPLICIT / FULL_MATRIX), tour files and the
registry of known optima."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ParseError
from .exact import held_karp
from .instance import Instance, Tour, scaled_cost

_SCALE_TAG = re.compile(r"asymtsp-scale\s+(\d+)")
_SECTIONS = {"EDGE_WEIGHT_SECTION", "TOUR_SECTION", "DISPLAY_DATA_SECTION", "NODE_COORD_SECTION", "EOF"}


def _text(data: bytes | str) -> str:
    return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data


def _header(lines: list[str]) -> tuple[dict[str, tuple[str, int]], str | None, int]:
    """Collect ``KEY: value`` pairs up to the first section keyword."""
    head: dict[str, tuple[str, int]] = {}
    for i, raw in enumerate(lines):
        line = raw.strip()
        if not line:
            continue
        word = line.split(":", 1)[0].strip().upper()
        if word in _SECTIONS and not line.partition(":")[2].strip():
            return head, word, i
        if ":" not in line:
            raise ParseError(f"expected 'KEY: value', got {line!r}", i + 1)
        key, value = line.split(":", 1)
        head[key.strip().upper()] = (value.strip(), i + 1)
    return head, None, len(lines)


def parse_tsplib(data: bytes | str, name: str | None = None) -> Instance:
    """Parse an explicit full-matrix TSPLIB document.

    Diagonal entries are set to 0 whatever the file says.  A
    ``COMMENT: asymtsp-scale s`` line means every entry is to be divided
    by ``s`` (used to store rational instances).
    """
    lines = _text(data).splitlines()
    head, section, start = _header(lines)
    kind = head.get("TYPE", ("ATSP", 0))[0].upper()
    if kind not in ("ATSP", "TSP"):
        raise ParseError(f"unsupported TYPE {kind}", head["TYPE"][1])
    wtype = head.get("EDGE_WEIGHT_TYPE", ("EXPLICIT", 0))
    if wtype[0].upper() != "EXPLICIT":
        raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {wtype[0]}", wtype[1])
    fmt = head.get("EDGE_WEIGHT_FORMAT", ("FULL_MATRIX", 0))
    if fmt[0].upper() != "FULL_MATRIX":
        raise ParseError(f"unsupported EDGE_WEIGHT_FORMAT {fmt[0]}", fmt[1])
    if "DIMENSION" not in head:
        raise ParseError("missing DIMENSION")
    dim_text, dim_line = head["DIMENSION"]
    try:
        n = int(dim_text)
    except ValueError:
        raise ParseError(f"DIMENSION is not an integer: {dim_text!r}", dim_line) from None
    if n < 1:
        raise ParseError("DIMENSION must be positive", dim_line)
    if section != "EDGE_WEIGHT_SECTION":
        raise ParseError("missing EDGE_WEIGHT_SECTION", start + 1)

    values: list[int] = []
    for i in range(start + 1, len(lines)):
        line = lines[i].strip()
        if not line:
            continue
        if line.upper().startswith("EOF") or line.split(":")[0].strip().upper() in _SECTIONS:
            break
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise ParseError(f"non-integer matrix entry {tok!r}", i + 1) from None
            if x < 0:
                raise ParseError(f"negative matrix entry {x}", i + 1)
            values.append(x)
            if len(values) > n * n:
                raise ParseError(f"more than DIMENSION^2 = {n * n} matrix entries", i + 1)
    if len(values) != n * n:
        raise ParseError(f"expected {n * n} matrix entries for DIMENSION {n}, found {len(values)}", len(lines))

    scale = 1
    if "COMMENT" in head:
        m = _SCALE_TAG.search(head["COMMENT"][0])
        if m:
            scale = int(m.group(1))
            if scale < 1:
                raise ParseError("scale must be positive", head["COMMENT"][1])
    cost = np.array(values, dtype=np.int64).reshape(n, n)
    np.fill_diagonal(cost, 0)
    label = name or head.get("NAME", ("unnamed", 0))[0]
    return Instance(cost, name=label, scale=scale)


def read_tsplib(path: str | Path) -> Instance:
    path = Path(path)
    inst = parse_tsplib(path.read_bytes())
    if inst.name == "unnamed":
        inst.name = path.stem
    return inst


def write_tsplib(instance: Instance) -> bytes:
    lines = [f"NAME: {instance.name}", "TYPE: ATSP"]
    if instance.scale != 1:
        lines.append(f"COMMENT: asymtsp-scale {instance.scale}")
    lines += [
        f"DIMENSION: {instance.n}",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    lines += [" ".join(str(int(x)) for x in row) for row in instance.cost]
    lines.append("EOF")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_tour(data: bytes | str) -> Tour:
    """TSPLIB tour file (1-based ids, ``-1`` terminated) to a 0-based tour."""
    lines = _text(data).splitlines()
    head, section, start = _header(lines)
    if section != "TOUR_SECTION":
        raise ParseError("missing TOUR_SECTION", start + 1)
    order: list[int] = []
    for i in range(start + 1, len(lines)):
        line = lines[i].strip()
        if not line:
            continue
        if line.upper().startswith("EOF"):
            break
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"non-integer tour entry {tok!r}", i + 1) from None
            if v == -1:
                return Tour(order)
            if v < 1:
                raise ParseError(f"tour ids are 1-based, got {v}", i + 1)
            order.append(v - 1)
    if not order:
        raise ParseError("empty tour")
    return Tour(order)


def write_tour(tour: Tour, name: str = "tour") -> bytes:
    lines = [f"NAME: {name}", "TYPE: TOUR", f"DIMENSION: {len(tour)}", "TOUR_SECTION"]
    lines += [str(v + 1) for v in tour]
    lines += ["-1", "EOF"]
    return ("\n".join(lines) + "\n").encode("utf-8")


@dataclass(frozen=True)
class OptimumEntry:
    name: str
    cost: int
    applies_to: str  # "raw" or "closure"
    note: str = ""


class OptimaRegistry:
    """Known optimal tour costs keyed by instance name."""

    def __init__(self, entries: Iterable[OptimumEntry] = ()):
        self._entries: dict[str, OptimumEntry] = {}
        for e in entries:
            if e.name in self._entries:
                raise ValueError(f"duplicate registry entry {e.name}")
            if e.cost <= 0:
                raise ValueError(f"registry cost for {e.name} must be positive")
            if e.applies_to not in ("raw", "closure"):
                raise ValueError(f"unknown registry tag {e.applies_to!r}")
            self._entries[e.name] = e

    @classmethod
    def from_text(cls, text: str) -> OptimaRegistry:
        entries = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split(None, 3)
            entries.append(OptimumEntry(parts[0], int(parts[1]), parts[2], parts[3] if len(parts) > 3 else ""))
        return cls(entries)

    @classmethod
    def builtin(cls) -> OptimaRegistry:
        text = resources.files("asymtsp").joinpath("data/optima.txt").read_text()
        return cls.from_text(text)

    def get(self, name: str) -> OptimumEntry | None:
        return self._entries.get(_base_name(name))

    def __contains__(self, name: str) -> bool:
        return self.get(name) is not None

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return sorted(self._entries)


def _base_name(name: str) -> str:
    name = name.strip()
    for suffix in (".atsp", ".tsp"):
        if name.lower().endswith(suffix):
            name = name[: -len(suffix)]
    return name


def reference_optimum(
    instance: Instance, registry: OptimaRegistry | None = None, exact_limit: int = 16
) -> tuple[Fraction | int, str] | None:
    """Optimum by Held-Karp for small instances, else from the registry.

    Returns ``(cost, source)`` with source ``exact`` or ``registry-<tag>``,
    or ``None`` when neither is available.
    """
    if instance.n <= exact_limit:
        return instance.real(scaled_cost(instance.cost, held_karp(instance, limit=exact_limit).order)), "exact"
    if registry is not None:
        e = registry.get(instance.name)
        if e is not None:
            return e.cost, f"registry-{e.applies_to}"
    return None
