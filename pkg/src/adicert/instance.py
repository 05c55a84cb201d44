"""Instance files: a ring, named modules, ideals and element systems.

The format is TOML::

    ring = "Z"

    [modules]
    M = [["2", "0"], ["0", "12"]]   # presentation, columns are relations

    [ideals]
    I = ["4", "6"]

    [systems]
    x = ["2"]

A module with n generators and no relations is written as n empty rows.
Elements may be strings in the ring grammar or, over Z, integers.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .cech import ElementSystem
from .fpmod import FPModule, Ideal
from .matrix import Matrix
from .ring import ElementParseError, Ring, parse_ring

SECTIONS = ("modules", "ideals", "systems")


class InstanceError(ValueError):
    """Malformed instance text."""


@dataclass
class Instance:
    ring: Ring
    modules: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)

    def module(self, name: str | None = None) -> FPModule:
        return self._get("module", self.modules, name)

    def ideal(self, name: str | None = None) -> Ideal:
        return self._get("ideal", self.ideals, name)

    def system(self, name: str | None = None) -> ElementSystem:
        return self._get("system", self.systems, name)

    @staticmethod
    def _get(kind: str, table: dict, name):
        if name is None:
            if not table:
                raise InstanceError(f"instance has no {kind}")
            return next(iter(table.values()))
        if name not in table:
            raise InstanceError(f"missing {kind} {name!r}")
        return table[name]

    def digest(self) -> str:
        return hashlib.sha256(print_instance(self).encode()).hexdigest()


def _element(ring: Ring, value, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InstanceError(f"{where}: expected a string or integer, got {value!r}")
    try:
        return ring.parse(value)
    except (ElementParseError, TypeError, ValueError) as exc:
        raise InstanceError(f"{where}: {exc}") from None


def _matrix(ring: Ring, rows, where: str) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InstanceError(f"{where}: a presentation is a list of rows")
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InstanceError(f"{where}: rows have different lengths")
    cols = widths.pop() if widths else 0
    data = [[_element(ring, v, f"{where}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)]
    return Matrix(ring, data, len(rows), cols)


def _element_list(ring: Ring, values, where: str) -> list:
    if not isinstance(values, list) or not values:
        raise InstanceError(f"{where}: expected a nonempty list of elements")
    return [_element(ring, v, f"{where}[{i}]") for i, v in enumerate(values)]


def parse_instance(text: str) -> Instance:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
        where = f" at line {line}, column {col}" if line else ""
        raise InstanceError(f"syntax error{where}: {getattr(exc, 'msg', exc)}") from None
    unknown = set(doc) - {"ring", *SECTIONS}
    if unknown:
        raise InstanceError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "ring" not in doc:
        raise InstanceError("missing 'ring'")
    try:
        ring = parse_ring(str(doc["ring"]))
    except ValueError as exc:
        raise InstanceError(str(exc)) from None
    seen: dict[str, str] = {}
    for section in SECTIONS:
        table = doc.get(section, {})
        if not isinstance(table, dict):
            raise InstanceError(f"[{section}] must be a table")
        for name in table:
            if name in seen:
                raise InstanceError(f"name {name!r} used in both [{seen[name]}] and [{section}]")
            seen[name] = section
    inst = Instance(ring)
    for name, rows in doc.get("modules", {}).items():
        inst.modules[name] = FPModule(ring, _matrix(ring, rows, f"modules.{name}"))
    for name, gens in doc.get("ideals", {}).items():
        inst.ideals[name] = Ideal(ring, _element_list(ring, gens, f"ideals.{name}"))
    for name, xs in doc.get("systems", {}).items():
        elements = _element_list(ring, xs, f"systems.{name}")
        if len(elements) > 3:
            raise InstanceError(f"systems.{name}: at most 3 elements are supported")
        inst.systems[name] = ElementSystem(ring, tuple(elements))
    return inst


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _key(name: str) -> str:
    return name if re.fullmatch(r"[A-Za-z0-9_-]+", name) else _quote(name)


def _elements(ring: Ring, xs) -> str:
    return "[" + ", ".join(_quote(ring.format(x)) for x in xs) + "]"


def print_instance(inst: Instance) -> str:
    ring = inst.ring
    out = [f"ring = {_quote(str(ring))}"]
    if inst.modules:
        out += ["", "[modules]"]
        for name, M in inst.modules.items():
            rows = ", ".join(_elements(ring, row) for row in M.presentation.tolist())
            out.append(f"{_key(name)} = [{rows}]")
    if inst.ideals:
        out += ["", "[ideals]"]
        for name, I in inst.ideals.items():
            out.append(f"{_key(name)} = {_elements(ring, I.generators)}")
    if inst.systems:
        out += ["", "[systems]"]
        for name, S in inst.systems.items():
            out.append(f"{_key(name)} = {_elements(ring, S.elements)}")
    return "\n".join(out) + "\n"
