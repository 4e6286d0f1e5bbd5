"""Run configuration: YAML schema parsing, validation and serialization.

A config names a topology, an alphabet, a ruleset (literal rules or a named
generator), a generation mode and its parameters.  Seeds are mandatory so
every run is reproducible.  See demos/configs/ for working documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import yaml

from . import usecases
from .errors import ConfigError
from .hybrid import Partitioning, equal_blocks, validate_partitioning
from .model import (
    AdjacencyConfig,
    Alphabet,
    ContentInstance,
    Pattern,
    Rule,
    Ruleset,
    Symbol,
    make_factor,
)
from .topology import Topology, grid2d_topology, grid3d_topology, hexgrid_topology

MODES = ("cwfc", "qwfc", "hwfc", "oracle")

_DIRECTION_ALIASES = {
    "grid2d": {"right": 1, "up": 2, "left": 3, "down": 4},
    "grid3d": {"above": 1, "below": 2},
    "hexgrid": {"e": 1, "ne": 2, "nw": 3, "w": 4, "sw": 5, "se": 6},
}


@dataclass
class RunConfig:
    name: str
    seed: int
    mode: str
    topology: Topology
    alphabet: Alphabet
    ruleset: Ruleset
    order: tuple[int, ...]
    partitioning: Partitioning | None
    shots: int
    max_restarts: int
    output_format: str
    scale: int
    source: dict
    validator: Callable[[ContentInstance], list[str]] | None = None


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML config document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1} column {mark.column + 1}" if mark else ""
        raise ConfigError(f"parse error{where}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    return _build(doc)


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def serialize_config(config: RunConfig) -> str:
    return yaml.safe_dump(config.source, sort_keys=True)


def _require(doc: dict, field: str):
    if field not in doc:
        raise ConfigError(f"missing required field {field!r}")
    return doc[field]


def _int_field(doc, field, default=None, minimum=None):
    raw = doc.get(field, default)
    if raw is None:
        raise ConfigError(f"missing required field {field!r}")
    if not isinstance(raw, int) or isinstance(raw, bool):
        raise ConfigError(f"field {field!r} must be an integer, got {raw!r}")
    if minimum is not None and raw < minimum:
        raise ConfigError(f"field {field!r} must be >= {minimum}")
    return raw


def _build_topology(spec) -> Topology:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("field 'topology' must be a mapping with a 'type'")
    kind = spec["type"]
    if kind == "grid2d":
        return grid2d_topology(_int_field(spec, "width", minimum=1), _int_field(spec, "height", minimum=1))
    if kind == "hexgrid":
        return hexgrid_topology(_int_field(spec, "radius", minimum=0))
    if kind == "grid3d":
        return grid3d_topology(
            _int_field(spec, "width", minimum=1),
            _int_field(spec, "depth", minimum=1),
            _int_field(spec, "height", minimum=1),
        )
    if kind == "custom":
        n = _int_field(spec, "segments", minimum=1)
        d = _int_field(spec, "directions", minimum=1)
        edges_spec = spec.get("edges", {})
        edge_sets = []
        for direction in range(1, d + 1):
            pairs = edges_spec.get(direction, edges_spec.get(str(direction), []))
            try:
                edge_sets.append(frozenset((int(i), int(j)) for i, j in pairs))
            except (TypeError, ValueError):
                raise ConfigError(f"topology.edges[{direction}] must be [i, j] pairs") from None
        try:
            adjacency = AdjacencyConfig(n, d, tuple(edge_sets))
        except ValueError as exc:
            raise ConfigError(f"topology: {exc}") from None
        return Topology("custom", adjacency, (("segments", n),))
    raise ConfigError(f"unknown topology type {kind!r}")


def _build_alphabet(spec) -> Alphabet:
    if not isinstance(spec, list) or not spec:
        raise ConfigError("field 'alphabet' must be a non-empty list")
    symbols = []
    for entry in spec:
        if isinstance(entry, str):
            symbols.append(Symbol(entry))
            continue
        if not isinstance(entry, dict) or "name" not in entry:
            raise ConfigError(f"alphabet entry {entry!r} needs a 'name'")
        color = entry.get("color")
        if color is not None:
            color = tuple(int(c) for c in color)
            if len(color) != 3:
                raise ConfigError(f"alphabet color for {entry['name']!r} must be an RGB triple")
        symbols.append(Symbol(entry["name"], color, entry.get("glyph")))
    try:
        return Alphabet(tuple(symbols))
    except ValueError as exc:
        raise ConfigError(f"alphabet: {exc}") from None


def _resolve_value(raw, alphabet: Alphabet) -> int:
    if isinstance(raw, int) and not isinstance(raw, bool):
        value = raw
    else:
        try:
            value = alphabet.value_of(str(raw))
        except KeyError:
            raise ConfigError(f"unknown symbol {raw!r}") from None
    if not (1 <= value <= alphabet.n_values):
        raise ConfigError(
            f"value {value} outside the alphabet [1,{alphabet.n_values}]"
        )
    return value


def _resolve_direction(raw, topology: Topology) -> int:
    aliases = _DIRECTION_ALIASES.get(topology.kind, {})
    if isinstance(raw, int) and not isinstance(raw, bool):
        d = raw
    elif isinstance(raw, str) and raw.lower() in aliases:
        d = aliases[raw.lower()]
    elif isinstance(raw, str) and raw.lower().startswith("d") and raw[1:].isdigit():
        d = int(raw[1:])
    else:
        raise ConfigError(f"unknown direction {raw!r}")
    if not (1 <= d <= topology.adjacency.n_directions):
        raise ConfigError(
            f"direction {raw!r} outside [1,{topology.adjacency.n_directions}]"
        )
    return d


def _build_literal_rules(spec, alphabet, topology) -> Ruleset:
    rules = []
    for entry in spec:
        if not isinstance(entry, dict) or "value" not in entry:
            raise ConfigError(f"rule entry {entry!r} needs a 'value'")
        value = _resolve_value(entry["value"], alphabet)
        weight_spec = entry.get("weight", 1.0)
        if isinstance(weight_spec, dict):
            params = {k: v for k, v in weight_spec.items() if k != "factor"}
            try:
                weight = make_factor(weight_spec.get("factor", ""), **params)
            except (KeyError, TypeError) as exc:
                raise ConfigError(f"rule weight: {exc}") from None
        else:
            weight = float(weight_spec)
            if weight <= 0:
                raise ConfigError(f"rule weight must be > 0, got {weight}")
        pairs = []
        for draw, vraw in (entry.get("pattern") or {}).items():
            pairs.append((_resolve_direction(draw, topology), _resolve_value(vraw, alphabet)))
        try:
            rules.append(Rule(value, weight, Pattern(frozenset(pairs))))
        except ValueError as exc:
            raise ConfigError(f"rule {entry!r}: {exc}") from None
    if not rules:
        raise ConfigError("field 'rules' must define at least one rule")
    return Ruleset(tuple(rules))


def _build_from_generator(spec, topology: Topology):
    """Returns (alphabet, ruleset, validator, default_partitioning)."""
    name = spec["generator"]
    params = {k: v for k, v in spec.items() if k != "generator"}

    def dims(*names):
        return tuple(topology.param(n) for n in names)

    try:
        if name == "checkerboard":
            uc = usecases.checkerboard_usecase(*dims("width", "height"))
        elif name == "pipes":
            uc = usecases.pipes_usecase(*dims("width", "height"))
        elif name == "hexmap":
            uc = usecases.hexmap_usecase(topology.param("radius"), **params)
        elif name == "platformer":
            if topology.kind != "grid3d" or topology.param("depth") != 1:
                raise ConfigError("generator 'platformer' needs a grid3d topology with depth 1")
            uc = usecases.platformer_usecase(*dims("width", "height"))
        elif name == "voxel_skyline":
            uc = usecases.voxel_skyline_usecase(*dims("width", "depth", "height"))
        else:
            raise ConfigError(f"unknown rule generator {name!r}")
    except KeyError as exc:
        raise ConfigError(f"generator {name!r} incompatible with topology: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"generator {name!r}: {exc}") from None
    return uc.alphabet, uc.ruleset, uc.validator, uc.partitioning


def _build_order(spec, topology: Topology) -> tuple[int, ...]:
    n = topology.adjacency.n_segments
    if spec is None or spec in ("raster", "spiral"):
        # ids are already raster (grids) or ring-spiral (hex discs)
        return tuple(range(1, n + 1))
    if not isinstance(spec, list):
        raise ConfigError(f"field 'order' must be 'raster', 'spiral' or a list, got {spec!r}")
    order = tuple(int(i) for i in spec)
    if sorted(order) != list(range(1, n + 1)):
        raise ConfigError("field 'order' must be a permutation of all segment ids")
    return order


def _build_partitioning(spec, topology: Topology) -> Partitioning | None:
    if spec is None:
        return None
    n = topology.adjacency.n_segments
    if isinstance(spec, list):
        part = Partitioning(tuple(tuple(int(i) for i in block) for block in spec))
    elif isinstance(spec, str) and ":" in spec:
        scheme, _, count = spec.partition(":")
        if not count.isdigit():
            raise ConfigError(f"partition count in {spec!r} must be an integer")
        h = int(count)
        if scheme == "blocks":
            part = equal_blocks(n, h)
        elif scheme == "rows" and topology.kind == "grid2d":
            if topology.param("height") % h:
                raise ConfigError(f"{h} row groups do not divide height {topology.param('height')}")
            part = equal_blocks(n, h)
        elif scheme == "layers" and topology.kind == "grid3d":
            if topology.param("height") % h:
                raise ConfigError(f"{h} layer groups do not divide height {topology.param('height')}")
            part = equal_blocks(n, h)
        elif scheme == "columns" and topology.kind == "grid2d":
            width, height = topology.param("width"), topology.param("height")
            if width % h:
                raise ConfigError(f"{h} column groups do not divide width {width}")
            per = width // h
            blocks = []
            for g in range(h):
                block = []
                for x in range(g * per, (g + 1) * per):
                    block.extend(x + 1 + y * width for y in range(height))
                blocks.append(tuple(block))
            part = Partitioning(tuple(blocks))
        else:
            raise ConfigError(f"partition scheme {spec!r} not valid for topology {topology.kind!r}")
    else:
        raise ConfigError(f"field 'partitions' must be 'scheme:H' or a list of lists, got {spec!r}")
    problems = validate_partitioning(part, n)
    if problems:
        raise ConfigError("partitions: " + "; ".join(problems))
    return part


def _build(doc: dict) -> RunConfig:
    seed = _int_field(doc, "seed")
    mode = _require(doc, "mode")
    if mode not in MODES:
        raise ConfigError(f"field 'mode' must be one of {MODES}, got {mode!r}")
    topology = _build_topology(_require(doc, "topology"))

    rules_spec = _require(doc, "rules")
    validator = None
    default_partitioning = None
    if isinstance(rules_spec, dict) and "generator" in rules_spec:
        alphabet, ruleset, validator, default_partitioning = _build_from_generator(
            rules_spec, topology
        )
        if "alphabet" in doc:
            alphabet = _build_alphabet(doc["alphabet"])
            if alphabet.n_values < max(r.value for r in ruleset.rules):
                raise ConfigError("alphabet is smaller than the generated ruleset requires")
    elif isinstance(rules_spec, list):
        alphabet = _build_alphabet(_require(doc, "alphabet"))
        ruleset = _build_literal_rules(rules_spec, alphabet, topology)
    else:
        raise ConfigError("field 'rules' must be a list of rules or a generator mapping")

    order = _build_order(doc.get("order"), topology)
    partitioning = _build_partitioning(doc.get("partitions"), topology)
    if partitioning is None:
        partitioning = default_partitioning
    if mode == "hwfc" and partitioning is None:
        raise ConfigError("mode 'hwfc' requires a 'partitions' field")

    output_format = doc.get("format", "ascii")
    return RunConfig(
        name=str(doc.get("name", "run")),
        seed=seed,
        mode=mode,
        topology=topology,
        alphabet=alphabet,
        ruleset=ruleset,
        order=order,
        partitioning=partitioning,
        shots=_int_field(doc, "shots", default=1, minimum=1),
        max_restarts=_int_field(doc, "max_restarts", default=100, minimum=0),
        output_format=output_format,
        scale=_int_field(doc, "scale", default=16, minimum=1),
        source=doc,
        validator=validator,
    )
