import numpy as np
import pytest
from conftest import chain_adjacency, max_prob_deviation, reference_chain_distribution

from qcollapse import (
    BudgetExceededError,
    ConflictError,
    ContentInstance,
    Pattern,
    RandomSource,
    Rule,
    Ruleset,
    SelectorContractError,
    exact_distribution_oracle,
    fixed_order_selector,
    generate,
    ruleset_value_selector,
    validate_selectors,
)


def test_random_source_determinism():
    a = [RandomSource(5).categorical(np.array([0.3, 0.3, 0.4])) for _ in range(20)]
    b = [RandomSource(5).categorical(np.array([0.3, 0.3, 0.4])) for _ in range(20)]
    assert a == b
    assert RandomSource(5).uniform() != RandomSource(6).uniform()


def test_categorical_respects_support():
    rng = RandomSource(0)
    draws = {rng.categorical(np.array([0.0, 1.0, 0.0])) for _ in range(50)}
    assert draws == {1}
    # unnormalized weights are fine
    draws = {rng.categorical(np.array([0.0, 2.0, 6.0])) for _ in range(200)}
    assert draws == {1, 2}


def test_fixed_order_selector():
    sel = fixed_order_selector((3, 1, 2), 3)
    np.testing.assert_array_equal(sel(1, ContentInstance()), [0, 0, 1])
    np.testing.assert_array_equal(sel(2, ContentInstance(((3, 1),))), [1, 0, 0])


def test_generate_walks_order():
    adj = chain_adjacency(3)
    rs = Ruleset((Rule(1, 1.0, Pattern.of()), Rule(2, 1.0, Pattern.of())))
    out = generate(
        3,
        fixed_order_selector((2, 3, 1), 3),
        ruleset_value_selector(adj, rs, 2),
        RandomSource(1),
    )
    assert tuple(s for s, _ in out.entries) == (2, 3, 1)
    assert out.is_complete(3)


def test_generate_enforces_no_mass_on_placed():
    def bad_id_selector(k, content):
        return np.array([1.0, 0.0])  # keeps pointing at id 1

    def value_selector(k, segment, content):
        return np.array([1.0])

    with pytest.raises(SelectorContractError):
        generate(2, bad_id_selector, value_selector, RandomSource(0))


def test_generate_propagates_conflicts():
    adj = chain_adjacency(2)
    # value 1 demands its successor already carry value 2, which never holds
    rs = Ruleset((Rule(1, 1.0, Pattern.of((1, 2))),))
    with pytest.raises(ConflictError):
        generate(
            2,
            fixed_order_selector((2, 1), 2),
            ruleset_value_selector(adj, rs, 1),
            RandomSource(0),
        )


def test_oracle_matches_reference_enumeration():
    adj = chain_adjacency(3)
    rs = Ruleset(
        (
            Rule(1, 2.0, Pattern.of()),
            Rule(2, 1.0, Pattern.of()),
            Rule(2, 3.0, Pattern.of((2, 1))),  # boosted after a 1
        )
    )
    order = (1, 2, 3)
    dist = exact_distribution_oracle(
        3, 2, fixed_order_selector(order, 3), ruleset_value_selector(adj, rs, 2)
    )
    ref = reference_chain_distribution(adj, rs, 2, order)
    assert max_prob_deviation(dist.probs, ref) < 1e-12
    assert abs(dist.total_mass() - 1.0) < 1e-12


def test_oracle_merges_orders():
    # A uniform identifier selector over unplaced ids with independent values
    # must yield the uniform product distribution regardless of path.
    n, w = 3, 2

    def id_sel(k, content):
        placed = set(content.mapping)
        probs = np.array([0.0 if i in placed else 1.0 for i in range(1, n + 1)])
        return probs / probs.sum()

    def val_sel(k, segment, content):
        return np.full(w, 1.0 / w)

    dist = exact_distribution_oracle(n, w, id_sel, val_sel)
    assert len(dist.probs) == w**n
    for p in dist.probs.values():
        assert abs(p - 1.0 / w**n) < 1e-12


def test_oracle_budget():
    with pytest.raises(BudgetExceededError):
        exact_distribution_oracle(30, 4, None, None, budget=1e6)


def test_validate_selectors_flags_violations():
    def bad_id(k, content):
        return np.array([1.0, 0.0])  # mass stays on id 1 forever

    def ok_val(k, segment, content):
        return np.array([1.0, 0.0])

    found = validate_selectors(2, 2, bad_id, ok_val)
    assert {v.condition for v in found} >= {"S1"}

    adj = chain_adjacency(2)
    rs = Ruleset((Rule(1, 1.0, Pattern.of((1, 2))),))
    found = validate_selectors(
        2, 1, fixed_order_selector((2, 1), 2), ruleset_value_selector(adj, rs, 1)
    )
    assert any(v.condition == "V2" for v in found)


def test_validate_selectors_clean_case():
    adj = chain_adjacency(2)
    rs = Ruleset((Rule(1, 1.0, Pattern.of()), Rule(2, 1.0, Pattern.of())))
    assert (
        validate_selectors(
            2, 2, fixed_order_selector((1, 2), 2), ruleset_value_selector(adj, rs, 2)
        )
        == []
    )
