"""Input bundles (polytope + characteristic matrix) and the shipped example catalogue."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .charalg import CharacteristicMatrix, _check_shape, check_nondegeneracy
from .polytope import SimplePolytope, cube, polygon, product, simplex


@dataclass(frozen=True)
class InputBundle:
    """One JSON object: the polytope keys, ``lambda`` and optional ``options``."""

    polytope: SimplePolytope
    lam: CharacteristicMatrix
    name: str = ""
    options: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {}
        if self.name:
            out["name"] = self.name
        out.update(self.polytope.to_json())
        out["lambda"] = self.lam.to_json()
        if self.options:
            out["options"] = dict(self.options)
        return out

    @classmethod
    def from_json(cls, data) -> "InputBundle":
        if not isinstance(data, dict):
            raise ValueError("input must be a JSON object")
        if "lambda" not in data:
            raise ValueError("input is missing 'lambda'")
        p = SimplePolytope.from_json(data)
        lam = CharacteristicMatrix.from_json(data["lambda"])
        _check_shape(p, lam)
        options = data.get("options", {})
        if not isinstance(options, dict):
            raise ValueError("'options' must be an object")
        name = data.get("name", "")
        if not isinstance(name, str):
            raise ValueError("'name' must be a string")
        return cls(p, lam, name, options)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def standard_lambda(n: int) -> list[list[int]]:
    """[I | I] on cube(n): opposite facets share a circle."""
    return [[int(i % n == j) for i in range(2 * n)] for j in range(n)]


def projective_lambda(n: int) -> list[list[int]]:
    """[I | -1] on simplex(n), the data of CP^n."""
    return [[int(i == j) - int(i == n) for i in range(n + 1)] for j in range(n)]


def hirzebruch_lambda(a: int) -> list[list[int]]:
    return [[1, 0, -1, a], [0, 1, 0, -1]]


def bott_lambda(a: int, b: int, c: int) -> list[list[int]]:
    """Three-stage Bott tower on cube(3) with twists a, b, c."""
    return [[1, 0, 0, -1, a, b], [0, 1, 0, 0, -1, c], [0, 0, 1, 0, 0, -1]]


def block_diagonal(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    wa, wb = len(a[0]), len(b[0])
    return [list(r) + [0] * wb for r in a] + [[0] * wa + list(r) for r in b]


def product_bundle(name: str, x: InputBundle, y: InputBundle) -> InputBundle:
    return InputBundle(product(x.polytope, y.polytope), CharacteristicMatrix.from_json(block_diagonal(x.lam.rows, y.lam.rows)), name)


def _bundle(name: str, p: SimplePolytope, lam) -> InputBundle:
    return InputBundle(p, CharacteristicMatrix.from_json([list(r) for r in lam]), name)


# toric surfaces over polygons, rays listed around the fan
POLYGON_RAYS = {
    "pentagon": [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)],
    "hexagon": [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
}


def catalogue() -> list[InputBundle]:
    """Named examples; every entry is checked nondegenerate when built."""
    out: dict[str, InputBundle] = {}
    spheres = ["s2", "s2xs2", "s2xs2xs2", "s2xs2xs2xs2"]
    for n, name in enumerate(spheres, start=1):
        out[name] = _bundle(name, cube(n), standard_lambda(n))
    for n in range(1, 5):
        out[f"cp{n}"] = _bundle(f"cp{n}", simplex(n), projective_lambda(n))
    for a in range(-3, 4):
        out[f"hirzebruch_a{a}"] = _bundle(f"hirzebruch_a{a}", cube(2), hirzebruch_lambda(a))
    for twist in [(1, 1, 0), (2, 1, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]:
        name = "bott" + "".join(map(str, twist))
        out[name] = _bundle(name, cube(3), bott_lambda(*twist))
    for name, rays in POLYGON_RAYS.items():
        out[name] = _bundle(name, polygon(len(rays)), [[r[0] for r in rays], [r[1] for r in rays]])
    pairs = [
        ("s2xcp2", "s2", "cp2"),
        ("cp2xcp2", "cp2", "cp2"),
        ("s2xcp3", "s2", "cp3"),
        ("cp2xs2xs2", "cp2", "s2xs2"),
        ("hirzebruch_a1xs2", "hirzebruch_a1", "s2"),
        ("cp1xcp1", "cp1", "cp1"),
    ]
    for name, x, y in pairs:
        out[name] = product_bundle(name, out[x], out[y])
    for b in out.values():
        report = check_nondegeneracy(b.polytope, b.lam)
        if not report.ok:
            raise AssertionError(f"catalogue entry {b.name} is degenerate: {report.failures}")
    return list(out.values())


def lookup(name: str) -> InputBundle:
    for b in catalogue():
        if b.name == name:
            return b
    raise KeyError(name)
