import math
from pathlib import Path

import numpy as np
import pytest
from conftest import (
    chain_adjacency,
    conflict_free_ruleset,
    max_prob_deviation,
    reference_chain_distribution,
)

from qcollapse import (
    CapacityError,
    CircuitProgram,
    ConditionalLoad,
    ConflictError,
    ContentInstance,
    ContractError,
    Pattern,
    QubitLayout,
    RandomSource,
    Rule,
    Ruleset,
    build_circuit,
    build_grid2d,
    dependency_set,
    exact_distribution,
    export_qasm,
    lower_to_gates,
    sample_shots,
    simulate,
    simulate_gates,
)
from qcollapse.usecases import checkerboard_ruleset, checkerboard_usecase

DATA = Path(__file__).parent / "data"


def test_layout_offsets_and_codec():
    layout = QubitLayout((1, 2, 3), 3)
    assert layout.bits_per_value == 2 and layout.n_qubits == 6
    assert layout.group_offset(2) == 2
    key = layout.encode({1: 2, 2: 1, 3: 3})
    assert key == 1 | (0 << 2) | (2 << 4)
    assert layout.decode(key).mapping == {1: 2, 2: 1, 3: 3}
    with pytest.raises(ValueError):
        QubitLayout((2, 1), 2)


def test_conditional_load_validation():
    with pytest.raises(ValueError):
        ConditionalLoad(1, (), 1, (0.5, 0.5))  # squared norm 0.5
    with pytest.raises(ValueError):
        ConditionalLoad(1, ((1, 1),), 1, (1.0,))  # self-control
    ConditionalLoad(1, (), 1, (math.sqrt(0.5), math.sqrt(0.5)))


def test_dependency_set_uses_rule_directions():
    adj = build_grid2d(2, 2)
    rs = checkerboard_ruleset()  # patterns use all four directions
    order = (1, 2, 3, 4)
    assert dependency_set(1, order, adj, rs) == frozenset()
    assert dependency_set(4, order, adj, rs) == frozenset({2, 3})
    # vertical-only rules ignore horizontal neighbors
    vert = Ruleset((Rule(1, 1.0, Pattern.of((2, 1))), Rule(2, 1.0, Pattern.of((4, 1)))))
    assert dependency_set(4, order, adj, vert) == frozenset({2})


def test_build_circuit_checkerboard_2x2():
    adj = build_grid2d(2, 2)
    circuit = build_circuit(adj, 2, checkerboard_ruleset(), (1, 2, 3, 4))
    # reachable loads: 1 + 2 + 2 + 2 (only consistent control assignments)
    assert [load.step for load in circuit.loads] == [1, 2, 2, 3, 3, 4, 4]
    first = circuit.loads[0]
    assert first.controls == () and first.amplitudes == pytest.approx(
        (math.sqrt(0.5), math.sqrt(0.5))
    )
    # every later load is deterministic given its controls
    for load in circuit.loads[1:]:
        assert sorted(load.amplitudes) == pytest.approx([0.0, 1.0])


def test_build_circuit_rejects_bad_orders():
    adj = build_grid2d(2, 1)
    rs = checkerboard_ruleset()
    with pytest.raises(ValueError):
        build_circuit(adj, 2, rs, (1, 1))
    with pytest.raises(ValueError):
        build_circuit(adj, 2, rs, (1, 2), frozen=ContentInstance(((2, 1),)))


def test_build_circuit_conflict_during_compile():
    adj = chain_adjacency(2)
    rs = Ruleset((Rule(1, 1.0, Pattern.of((1, 2))),))  # dead end at segment 1
    with pytest.raises(ConflictError):
        build_circuit(adj, 1, rs, (2, 1))


def test_capacity_caps():
    uc = checkerboard_usecase(3, 3)
    circuit = build_circuit(uc.adjacency, 2, uc.ruleset, uc.order)
    with pytest.raises(CapacityError):
        simulate(circuit, memory_cap_qubits=8)
    with pytest.raises(CapacityError):
        build_circuit(uc.adjacency, 2, uc.ruleset, uc.order, max_loads_per_step=1)
    # support cap: uniform unconstrained rules double the support each step
    adj = chain_adjacency(8)
    rs = conflict_free_ruleset((), 2)
    with pytest.raises(CapacityError):
        build_circuit(adj, 2, rs, tuple(range(1, 9)), max_support=16)


def test_simulate_matches_reference_distribution():
    adj = chain_adjacency(4)
    rs = conflict_free_ruleset(
        (
            Rule(1, 3.0, Pattern.of((2, 1))),
            Rule(2, 2.0, Pattern.of((2, 1))),
            Rule(3, 1.0, Pattern.of((2, 2), (1, 3))),
        ),
        3,
        floor=0.5,
    )
    order = (1, 2, 3, 4)
    circuit = build_circuit(adj, 3, rs, order)
    psi = simulate(circuit)
    dist = exact_distribution(psi, circuit.layout)
    ref = reference_chain_distribution(adj, rs, 3, order)
    assert max_prob_deviation(dist.probs, ref) < 1e-12
    assert abs(dist.total_mass() - 1.0) < 1e-12


def test_simulate_out_of_order_segments():
    # a non-ascending generation order still lands on the canonical layout
    uc = checkerboard_usecase(3, 3)
    order = tuple(range(9, 0, -1))
    circuit = build_circuit(uc.adjacency, 2, uc.ruleset, order)
    dist = exact_distribution(simulate(circuit), circuit.layout)
    assert set(dist.probs) == {170, 341}


def test_simulate_contract_violation():
    layout = QubitLayout((1,), 2)
    load = ConditionalLoad(1, (), 1, (math.sqrt(0.5), math.sqrt(0.5)))
    with pytest.raises(ContractError):
        simulate(CircuitProgram(layout, (load, load)))  # reloads a lifted group


def test_frozen_context_conditions_circuit():
    adj = build_grid2d(2, 1)
    rs = checkerboard_ruleset()
    circuit = build_circuit(adj, 2, rs, (2,), frozen=ContentInstance(((1, 1),)))
    dist = exact_distribution(simulate(circuit), circuit.layout)
    assert dist.probs == pytest.approx({1: 1.0})  # forced to the other color


def test_sample_shots_deterministic_and_in_support():
    uc = checkerboard_usecase(3, 3)
    circuit = build_circuit(uc.adjacency, 2, uc.ruleset, uc.order)
    psi = simulate(circuit)
    a = sample_shots(psi, circuit.layout, 25, RandomSource(2))
    b = sample_shots(psi, circuit.layout, 25, RandomSource(2))
    assert a == b
    for inst in a:
        assert circuit.layout.encode(inst.mapping) in (170, 341)
    with pytest.raises(ValueError):
        sample_shots(psi, circuit.layout, 0, RandomSource(2))


@pytest.mark.parametrize("n_values", [2, 3, 4])
def test_gate_lowering_round_trip(n_values):
    adj = chain_adjacency(3)
    rng = np.random.default_rng(n_values)
    rules = [
        Rule(
            int(rng.integers(1, n_values + 1)),
            float(rng.uniform(0.5, 3.0)),
            Pattern.of((2, int(rng.integers(1, n_values + 1)))),
        )
        for _ in range(6)
    ]
    rs = conflict_free_ruleset(rules, n_values, floor=0.1)
    circuit = build_circuit(adj, n_values, rs, (1, 2, 3))
    psi_ref = simulate(circuit)
    psi_gate = simulate_gates(lower_to_gates(circuit))
    assert np.abs(np.abs(psi_gate) ** 2 - np.abs(psi_ref) ** 2).max() < 1e-9


def test_qasm_golden_file():
    uc = checkerboard_usecase(2, 2)
    circuit = build_circuit(uc.adjacency, 2, uc.ruleset, uc.order)
    text = export_qasm(lower_to_gates(circuit), circuit.layout)
    assert text == (DATA / "checkerboard_2x2.qasm").read_text(encoding="utf-8")


def test_qasm_structure():
    uc = checkerboard_usecase(2, 2)
    circuit = build_circuit(uc.adjacency, 2, uc.ruleset, uc.order)
    lines = export_qasm(lower_to_gates(circuit), circuit.layout).splitlines()
    assert lines[0] == "OPENQASM 3.0;"
    assert 'include "stdgates.inc";' in lines
    assert "qubit[4] q;" in lines and "bit[4] c;" in lines
    assert lines[-1] == "c = measure q;"
    assert sum("ry(" in ln for ln in lines) == len(
        [g for g in lower_to_gates(circuit).gates if not hasattr(g, "qubit")]
    )
