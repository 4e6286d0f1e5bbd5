"""Classical wave function collapse: minimum-entropy segment selection with
pattern-based value selection and restart-on-conflict."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConflictError, RestartsExhaustedError
from .framework import RandomSource, generate, ruleset_value_selector
from .model import (
    AdjacencyConfig,
    Alphabet,
    ContentInstance,
    Ruleset,
    constraint_signature,
    value_distribution,
)

_ENTROPY_TIE_TOL = 1e-12


def shannon_entropy(
    segment: int,
    adjacency: AdjacencyConfig,
    content: ContentInstance,
    ruleset: Ruleset,
    n_values: int,
    frozen: ContentInstance | None = None,
) -> float:
    """Entropy in nats of the segment's value distribution (0 ln 0 := 0)."""
    comp = ruleset._compiled(adjacency.n_directions)
    key = None
    if not comp.func_rows:
        signature = constraint_signature(
            segment,
            adjacency,
            content.mapping,
            frozen.mapping if frozen is not None else None,
        )
        key = (segment, signature)
        cached = comp.entropy_cache.get(key)
        if cached is not None:
            return cached
    p = value_distribution(segment, adjacency, content, ruleset, n_values, frozen)
    nz = p[p > 0.0]
    h = float(-(nz * np.log(nz)).sum())
    if key is not None and len(comp.entropy_cache) < 1 << 18:
        comp.entropy_cache[key] = h
    return h


@dataclass(frozen=True)
class EntropyReport:
    entropies: dict[int, float]  # unplaced segment -> entropy in nats
    minimizers: tuple[int, ...]  # segments attaining the minimum


def entropy_report(
    adjacency: AdjacencyConfig,
    content: ContentInstance,
    ruleset: Ruleset,
    n_values: int,
    frozen: ContentInstance | None = None,
) -> EntropyReport:
    placed = set(content.mapping)
    if frozen is not None:
        placed |= set(frozen.mapping)
    entropies = {
        i: shannon_entropy(i, adjacency, content, ruleset, n_values, frozen)
        for i in range(1, adjacency.n_segments + 1)
        if i not in placed
    }
    if not entropies:
        return EntropyReport({}, ())
    h_min = min(entropies.values())
    mins = tuple(i for i, h in sorted(entropies.items()) if h <= h_min + _ENTROPY_TIE_TOL)
    return EntropyReport(entropies, mins)


class EntropySelector:
    """Identifier selector: uniform over the minimum-entropy segments.

    Caches per-segment entropies between calls and recomputes only segments
    affected by newly placed values, so repeated sampling stays cheap.
    """

    def __init__(
        self,
        adjacency: AdjacencyConfig,
        ruleset: Ruleset,
        n_values: int,
        frozen: ContentInstance | None = None,
    ):
        self.adjacency = adjacency
        self.ruleset = ruleset
        self.n_values = n_values
        self.frozen = frozen
        self._cache: dict[int, float] = {}
        self._seen: tuple[tuple[int, int], ...] = ()

    def _sync(self, content: ContentInstance) -> None:
        entries = content.entries
        n = len(self._seen)
        if entries[:n] != self._seen:
            self._cache.clear()
            self._seen = ()
            n = 0
        for seg, _ in entries[n:]:
            self._cache.pop(seg, None)
            for other in self.adjacency.influenced_by(seg):
                self._cache.pop(other, None)
        self._seen = entries

    def __call__(self, k: int, content: ContentInstance) -> np.ndarray:
        self._sync(content)
        placed = content.mapping
        extra = self.frozen.mapping if self.frozen is not None else {}
        h_min = math.inf
        for i in range(1, self.adjacency.n_segments + 1):
            if i in placed or i in extra:
                continue
            h = self._cache.get(i)
            if h is None:
                h = shannon_entropy(i, self.adjacency, content, self.ruleset, self.n_values, self.frozen)
                self._cache[i] = h
            if h < h_min:
                h_min = h
        probs = np.zeros(self.adjacency.n_segments)
        for i, h in self._cache.items():
            if i not in placed and i not in extra and h <= h_min + _ENTROPY_TIE_TOL:
                probs[i - 1] = 1.0
        total = probs.sum()
        if total > 0.0:
            probs /= total
        return probs


def entropy_selector(
    adjacency: AdjacencyConfig, ruleset: Ruleset, n_values: int, frozen: ContentInstance | None = None
) -> EntropySelector:
    return EntropySelector(adjacency, ruleset, n_values, frozen)


def cwfc_generate(
    adjacency: AdjacencyConfig,
    alphabet: Alphabet,
    ruleset: Ruleset,
    rng: RandomSource,
    max_restarts: int = 100,
    frozen: ContentInstance | None = None,
    on_restart=None,
) -> ContentInstance:
    """Entropy-driven generation with restart-from-scratch on conflicts.

    A conflict discards the partial content and starts over with fresh draws;
    ``on_restart`` (if given) is called once per restart actually taken.
    Raises RestartsExhaustedError after ``max_restarts`` restarts all hit a
    conflict again.
    """
    n_values = alphabet.n_values
    n_free = adjacency.n_segments - (len(frozen) if frozen is not None else 0)
    value_sel = ruleset_value_selector(adjacency, ruleset, n_values, frozen)
    for attempt in range(max_restarts + 1):
        id_sel = entropy_selector(adjacency, ruleset, n_values, frozen)
        try:
            return generate(n_free, id_sel, value_sel, rng)
        except ConflictError:
            if attempt == max_restarts:
                raise RestartsExhaustedError(max_restarts) from None
            if on_restart is not None:
                on_restart()
    raise AssertionError("unreachable")
