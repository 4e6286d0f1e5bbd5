"""Generic probabilistic iterative generation: draw an identifier, draw a
value, append; repeated until the content is complete.

Selectors are plain callables:

* identifier selector: ``(k, content) -> probs`` of shape (N,)
* value selector: ``(k, segment, content) -> probs`` of shape (W,)

Both receive the partial content produced so far and must follow the usual
contracts (no mass on placed ids, at least one admissible id/value).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, ConflictError, SelectorContractError
from .model import ContentInstance, Distribution, Ruleset, AdjacencyConfig, encode_values, value_distribution


class RandomSource:
    """Seedable deterministic stream with a categorical-draw primitive."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def uniform(self) -> float:
        return self._rng.random()

    def categorical(self, probs: np.ndarray) -> int:
        """Single inverse-CDF draw; returns a 0-based index, ties ascending."""
        cum = np.cumsum(probs)
        u = self._rng.random() * cum[-1]
        return int(np.searchsorted(cum, u, side="right"))


def fixed_order_selector(order: tuple[int, ...], n_segments: int):
    """Identifier selector that walks a predefined segment order."""
    order = tuple(order)

    def select(k: int, content: ContentInstance) -> np.ndarray:
        probs = np.zeros(n_segments)
        probs[order[k - 1] - 1] = 1.0
        return probs

    return select


def ruleset_value_selector(
    adjacency: AdjacencyConfig,
    ruleset: Ruleset,
    n_values: int,
    frozen: ContentInstance | None = None,
):
    """Value selector backed by the pattern-based value distribution."""

    def select(k: int, segment: int, content: ContentInstance) -> np.ndarray:
        return value_distribution(segment, adjacency, content, ruleset, n_values, frozen)

    return select


def generate(
    n_segments: int,
    identifier_selector,
    value_selector,
    rng: RandomSource,
    start: ContentInstance | None = None,
) -> ContentInstance:
    """Run the three-step iteration until ``n_segments`` entries are placed.

    Propagates ConflictError from the value selector; raises
    SelectorContractError if the identifier distribution puts mass on an
    already-placed id.
    """
    content = start if start is not None else ContentInstance()
    for k in range(len(content) + 1, n_segments + 1):
        id_probs = np.asarray(identifier_selector(k, content), dtype=float)
        placed = content.mapping
        for seg in placed:
            if id_probs[seg - 1] > 0.0:
                raise SelectorContractError(
                    f"identifier distribution puts mass on placed id {seg} at k={k}"
                )
        total = id_probs.sum()
        if total <= 0.0:
            raise SelectorContractError(f"identifier distribution empty at k={k}")
        segment = rng.categorical(id_probs) + 1
        value_probs = np.asarray(value_selector(k, segment, content), dtype=float)
        if value_probs.sum() <= 0.0:
            raise ConflictError(segment, content, "value selector returned empty support")
        value = rng.categorical(value_probs) + 1
        content = content.add(segment, value)
    return content


# --------------------------------------------------------------------------
# exact enumeration
# --------------------------------------------------------------------------


def _check_budget(n_segments: int, n_values: int, budget: float) -> None:
    if n_values ** n_segments > budget:
        raise BudgetExceededError(
            f"{n_values}^{n_segments} candidate instances exceed the budget of {budget:g}"
        )


def exact_distribution_oracle(
    n_segments: int,
    n_values: int,
    identifier_selector,
    value_selector,
    budget: float = 1e6,
) -> Distribution:
    """Exact chain-rule distribution over complete instances.

    Walks every reachable (partial content, iteration) branch breadth-first,
    merging branches that reach the same set of placed pairs, so the sum over
    selection orders is accumulated without enumerating permutations.
    """
    _check_budget(n_segments, n_values, budget)
    frontier: dict[frozenset[tuple[int, int]], float] = {frozenset(): 1.0}
    for k in range(1, n_segments + 1):
        nxt: dict[frozenset[tuple[int, int]], float] = {}
        for state, mass in frontier.items():
            content = ContentInstance(tuple(sorted(state)))
            id_probs = np.asarray(identifier_selector(k, content), dtype=float)
            for seg0 in np.nonzero(id_probs > 0.0)[0]:
                segment = int(seg0) + 1
                value_probs = np.asarray(value_selector(k, segment, content), dtype=float)
                for v0 in np.nonzero(value_probs > 0.0)[0]:
                    child = state | {(segment, int(v0) + 1)}
                    nxt[child] = nxt.get(child, 0.0) + mass * id_probs[seg0] * value_probs[v0]
        frontier = nxt

    segments = tuple(range(1, n_segments + 1))
    probs: dict[int, float] = {}
    for state, mass in frontier.items():
        key = encode_values(dict(state), segments, n_values)
        probs[key] = probs.get(key, 0.0) + mass
    return Distribution(segments, n_values, probs)


@dataclass(frozen=True)
class SelectorViolation:
    condition: str  # "S1" | "S2" | "V1" | "V2"
    iteration: int
    content: ContentInstance
    detail: str


def validate_selectors(
    n_segments: int,
    n_values: int,
    identifier_selector,
    value_selector,
    budget: float = 1e6,
) -> list[SelectorViolation]:
    """Exhaustively walk reachable branches and report contract violations.

    S1: mass on a placed id.  S2: no admissible unplaced id.  V1: mass outside
    the alphabet (wrong support length or negative entries).  V2: empty value
    support for a reachable (id, content) pair.
    """
    _check_budget(n_segments, n_values, budget)
    violations: list[SelectorViolation] = []
    frontier: set[frozenset[tuple[int, int]]] = {frozenset()}
    for k in range(1, n_segments + 1):
        nxt: set[frozenset[tuple[int, int]]] = set()
        for state in frontier:
            content = ContentInstance(tuple(sorted(state)))
            placed = {i for i, _ in state}
            id_probs = np.asarray(identifier_selector(k, content), dtype=float)
            for seg in placed:
                if id_probs[seg - 1] > 0.0:
                    violations.append(
                        SelectorViolation("S1", k, content, f"mass on placed id {seg}")
                    )
            open_mass = sum(id_probs[i - 1] for i in range(1, n_segments + 1) if i not in placed)
            if open_mass <= 0.0:
                violations.append(
                    SelectorViolation("S2", k, content, "no admissible unplaced id")
                )
            for seg0 in np.nonzero(id_probs > 0.0)[0]:
                segment = int(seg0) + 1
                if segment in placed:
                    continue
                try:
                    value_probs = np.asarray(value_selector(k, segment, content), dtype=float)
                except ConflictError:
                    violations.append(
                        SelectorViolation("V2", k, content, f"conflict for id {segment}")
                    )
                    continue
                if len(value_probs) != n_values or np.any(value_probs < 0.0):
                    violations.append(
                        SelectorViolation("V1", k, content, f"bad support for id {segment}")
                    )
                    continue
                if value_probs.sum() <= 0.0:
                    violations.append(
                        SelectorViolation("V2", k, content, f"empty support for id {segment}")
                    )
                    continue
                for v0 in np.nonzero(value_probs > 0.0)[0]:
                    nxt.add(state | {(segment, int(v0) + 1)})
        frontier = nxt
    return violations
