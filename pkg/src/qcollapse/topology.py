"""Topology descriptors: adjacency plus the geometric data renderers need."""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    AdjacencyConfig,
    build_grid2d,
    build_grid3d_columns,
    build_hexgrid,
    hexgrid_coordinates,
)


@dataclass(frozen=True)
class Topology:
    kind: str  # "grid2d" | "hexgrid" | "grid3d" | "custom"
    adjacency: AdjacencyConfig
    params: tuple[tuple[str, int], ...] = ()

    def param(self, name: str) -> int:
        return dict(self.params)[name]


def grid2d_topology(width: int, height: int) -> Topology:
    return Topology("grid2d", build_grid2d(width, height), (("width", width), ("height", height)))


def hexgrid_topology(radius: int) -> Topology:
    return Topology("hexgrid", build_hexgrid(radius), (("radius", radius),))


def grid3d_topology(width: int, depth: int, height: int) -> Topology:
    return Topology(
        "grid3d",
        build_grid3d_columns(width, depth, height),
        (("width", width), ("depth", depth), ("height", height)),
    )


def hex_coords(topology: Topology):
    assert topology.kind == "hexgrid"
    return hexgrid_coordinates(topology.param("radius"))
