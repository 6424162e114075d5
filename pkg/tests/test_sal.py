import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from qpf.errors import BudgetError, PreconditionError
from qpf.field import FieldSpec
from qpf.network import LayerSpec, NetworkArch
from qpf.oracle import enumerate_performance
from qpf.sal import (
    SalConfig,
    TrainingSet,
    accumulate,
    ancillas_clean,
    evaluate_classically,
    nonlinear_search,
    nq,
    run_sal,
    search_digits,
)
from qpf.state import RegisterLayout, SparseState, basis_state, from_vector

Z2, Z3 = FieldSpec(2), FieldSpec(3)
R = 1 / math.sqrt(2)
NEURON2 = NetworkArch.neuron(2)
TWO_LAYER = NetworkArch((LayerSpec(2, 2), LayerSpec(1, 2)))


def ts(*patterns, spec=Z2):
    return TrainingSet(tuple(patterns), spec)


def brute_force(arch, spec, data):
    """Independent enumeration: y = sum_i x_i w_i for a single neuron."""
    out = {}
    for w in itertools.product(range(spec.p), repeat=arch.n_inputs):
        hits = 0
        for x, d in data.patterns:
            y = sum(a * b for a, b in zip(x, w)) % spec.p
            hits += (y,) == d
        out[w] = hits
    return out


# -- nq ------------------------------------------------------------------------

PSI = RegisterLayout([("psi", 1, Z2), ("c", 1, Z2)])


def test_nq_sets_all_flags_when_any_set():
    s = SparseState(PSI, {(0, 0): R, (1, 1): R})
    assert nq(s, "c").approx_equal(SparseState(PSI, {(0, 1): R, (1, 1): R}))


def test_nq_leaves_unflagged_state():
    s = SparseState(PSI, {(0, 0): R, (1, 0): R})
    assert nq(s, "c").approx_equal(s)


def test_nq_single_flagged_term():
    s = SparseState(PSI, {(1, 1): 1.0})
    assert nq(s, "c") == s


def test_nq_merges_coinciding_labels():
    s = SparseState(PSI, {(0, 0): R, (0, 1): R})
    out = nq(s, "c")
    assert out.approx_equal(SparseState(PSI, {(0, 1): 1.0}))


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_nq_idempotent(seed, width):
    import numpy as np

    lay = RegisterLayout([("psi", width, Z3), ("c", 1, Z2)])
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=lay.dimension()) * (rng.random(lay.dimension()) < 0.5)
    if not vec.any():
        vec[0] = 1.0
    s = from_vector(lay, vec / np.linalg.norm(vec))
    once = nq(s, "c")
    assert once.is_normalized()
    assert nq(once, "c").approx_equal(once, tol=1e-12)
    assert len(once.register_values("c")) == 1


# -- nonlinear search ------------------------------------------------------------

def test_search_single_branch():
    data = ts(((0, 1), (1,)))
    config = SalConfig([NEURON2], 0, Z2)
    mc, state = accumulate(config, data)
    one = {lab: amp for lab, amp in state.items()
           if mc.layout.read(lab, "w") == (1, 1)}
    single = SparseState(state.layout, {next(iter(one)): 1.0})
    out, found = nonlinear_search(single, search_digits(mc), 0)
    assert found and out == single


def test_search_fixes_digits_in_order():
    data = ts(((0, 1), (1,)))
    mc, state = accumulate(SalConfig([NEURON2], 0, Z2), data)
    trace = []
    out, found = nonlinear_search(state, search_digits(mc), 0, trace=trace)
    assert found
    assert out.register_values("w") == {(0, 1)}
    assert [(t["name"], t["value"]) for t in trace] == [("w[0]", 0), ("w[1]", 1)]
    assert len(out) == 1 and out.is_normalized()


def test_search_impossible_threshold_leaves_state():
    data = ts(((0, 1), (1,)), ((1, 1), (0,)))
    mc, state = accumulate(SalConfig([NEURON2], 0, Z2), data)
    trace = []
    out, found = nonlinear_search(state, search_digits(mc), data.k, trace=trace)
    assert not found
    assert out == state
    assert all(t["value"] == "skip" for t in trace)


def test_search_needs_clear_objective():
    lay = RegisterLayout([("w", 1, Z2), ("perf", 1, Z2), ("obj", 1, Z2)])
    s = basis_state(lay, {"w": 0, "perf": 1, "obj": 1})
    with pytest.raises(PreconditionError):
        nonlinear_search(s, [0], 0)


# -- run_sal ---------------------------------------------------------------------

def test_run_sal_single_pattern():
    data = ts(((0, 1), (1,)))
    table = brute_force(NEURON2, Z2, data)
    assert table == {(0, 0): 0, (0, 1): 1, (1, 0): 0, (1, 1): 1}
    result = run_sal(SalConfig([NEURON2], 0, Z2), data)
    assert result.found
    assert result.weights in {(0, 1), (1, 1)}
    assert result.weights == min(w for w, v in table.items() if v > 0)
    assert result.performance == 1
    assert result.arch_id == 0


def test_run_sal_contradictory_patterns():
    data = ts(((0, 1), (1,)), ((0, 1), (0,)))
    result = run_sal(SalConfig([NEURON2], 1, Z2), data)
    assert not result.found
    assert result.pre_search == result.state


def test_retry_lowers_threshold():
    data = ts(((0, 1), (1,)), ((0, 1), (0,)))
    result = run_sal(SalConfig([NEURON2], 1, Z2, max_retries=1), data)
    assert result.found
    assert result.theta == 0
    assert result.performance == 1


def test_two_architectures_prefer_the_first():
    # target y = x2 is reachable by both the neuron and the 2-layer net
    data = ts(((0, 1), (1,)), ((1, 0), (0,)), ((1, 1), (1,)))
    report = enumerate_performance([NEURON2, TWO_LAYER], Z2, data)
    theta = data.k - 1
    assert {a for a, _ in report.qualifying(theta)} == {0, 1}
    result = run_sal(SalConfig([NEURON2, TWO_LAYER], theta, Z2), data)
    assert result.found and result.arch_id == 0
    assert result.weights == (0, 1)


def test_second_architecture_chosen_when_first_cannot_learn():
    # y = x1 + x2 + x1*x2 style targets are beyond a single layer only if
    # they break linearity; here the 1-input neuron cannot see x2
    archs = [NetworkArch.neuron(1), NEURON2]
    data = ts(((0, 1), (1,)), ((1, 0), (1,)))
    report = enumerate_performance(archs, Z2, data)
    assert {a for a, _ in report.qualifying(1)} == {1}
    result = run_sal(SalConfig(archs, 1, Z2), data)
    assert result.found and result.arch_id == 1 and result.weights == (1, 1)


def test_result_registers_match_classical_evaluation():
    rng = random.Random(5)
    for _ in range(10):
        data = ts(*[(tuple(rng.randrange(3) for _ in range(2)), (rng.randrange(3),))
                    for _ in range(rng.randint(1, 5))], spec=Z3)
        result = run_sal(SalConfig([NEURON2], 0, Z3), data)
        if result.found:
            assert evaluate_classically(NEURON2, result.weights, data) == result.performance > 0


def test_evaluate_classically_examples():
    data = ts(((0, 1), (1,)))
    assert evaluate_classically(NEURON2, (0, 1), data) == 1
    assert evaluate_classically(NEURON2, (0, 0), data) == 0
    one = NetworkArch.neuron(1)
    data5 = TrainingSet((((3,), (2,)), ((4,), (1,))), FieldSpec(5))
    # 3*4 = 12 = 2 and 4*4 = 16 = 1 in Z5
    assert evaluate_classically(one, (4,), data5) == 2


def test_budget_enforced():
    data = ts(((1,) * 8, (0,)))
    with pytest.raises(BudgetError):
        run_sal(SalConfig([NetworkArch.neuron(8)], 0, Z2, budget=255), data)


def test_theta_above_k_rejected():
    with pytest.raises(ValueError):
        run_sal(SalConfig([NEURON2], 2, Z2), ts(((0, 1), (1,))))


def test_pattern_width_checked():
    with pytest.raises(ValueError):
        run_sal(SalConfig([NEURON2], 0, Z2), ts(((0, 1, 1), (1,))))


def test_hygiene_after_every_pattern():
    data = ts(*[((a, b), ((a + b) % 2,)) for a in range(2) for b in range(2)])
    seen = []

    def check(idx, state, mc):
        seen.append(idx)
        assert ancillas_clean(state, mc)

    run_sal(SalConfig([NEURON2, TWO_LAYER], 2, Z2), data, on_pattern=check)
    assert seen == [0, 1, 2, 3]


def test_pattern_loop_is_linear():
    counts = []
    for k in range(1, 9):
        data = ts(*[((1, 0), (1,))] * k)
        result = run_sal(SalConfig([NEURON2, TWO_LAYER], 0, Z2), data)
        loop = [ev for ev in result.trace if ev["event"] == "pattern"]
        assert len(loop) == k
        counts.append(result.telemetry.gate_applications)
    diffs = {b - a for a, b in zip(counts, counts[1:])}
    assert len(diffs) == 1


def test_trace_and_json():
    data = ts(((0, 1), (1,)))
    result = run_sal(SalConfig([NEURON2], 0, Z2, seed=3), data)
    assert result.trace_lines() == [
        "pattern 0 terms=4",
        "digit w[0] 0",
        "digit w[1] 1",
        "search theta=0 Found",
    ]
    assert "time=" in result.trace_lines(timings=True)[0]
    assert result.to_dict() == {"status": "Found", "selector": 0, "weights": [0, 1],
                                "performance": 1, "theta": 0, "seed": 3}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_completeness_all_z2_neurons(n):
    """Found iff some configuration beats theta, for every threshold."""
    rng = random.Random(n)
    arch = NetworkArch.neuron(n)
    for _ in range(8):
        k = rng.randint(1, 6)
        data = ts(*[(tuple(rng.randrange(2) for _ in range(n)), (rng.randrange(2),))
                    for _ in range(k)])
        table = brute_force(arch, Z2, data)
        for theta in range(k + 1):
            result = run_sal(SalConfig([arch], theta, Z2), data)
            winners = sorted(w for w, v in table.items() if v > theta)
            assert result.found == bool(winners)
            if winners:
                assert result.weights == winners[0]


PAIRS = [
    (NetworkArch.neuron(1), NEURON2),
    (NEURON2, NetworkArch.neuron(3)),
    (NEURON2, TWO_LAYER),
    (TWO_LAYER, NetworkArch.neuron(3)),
    (NetworkArch((LayerSpec(3, 3), LayerSpec(1, 3))), NetworkArch.neuron(2)),
]


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: "+".join(str(a.n_weights) for a in p))
def test_completeness_two_arch_sets(pair):
    assert 1 + max(a.n_weights for a in pair) <= 13
    rng = random.Random(sum(a.n_weights for a in pair))
    n_in = max(a.n_inputs for a in pair)
    for _ in range(4):
        k = rng.randint(1, 5)
        data = ts(*[(tuple(rng.randrange(2) for _ in range(n_in)), (rng.randrange(2),))
                    for _ in range(k)])
        report = enumerate_performance(pair, Z2, data)
        theta = rng.randrange(k + 1)
        result = run_sal(SalConfig(pair, theta, Z2), data)
        winner = report.lexicographic_winner(theta)
        assert result.found == (winner is not None)
        if result.found:
            assert report.digit_string(result.arch_id, result.weights) == winner


def test_training_set_csv_round_trip():
    text = "x1,x2,d1\n0,1,1\n1,1,0\n"
    data = TrainingSet.from_csv(text, Z2)
    assert data.patterns == (((0, 1), (1,)), ((1, 1), (0,)))
    assert data.to_csv() == text


@pytest.mark.parametrize("text", ["", "a,b\n0,1\n", "x1,d1\n0\n", "x1,d1\n0,2\n", "x1,d1\n"])
def test_training_set_csv_validation(text):
    with pytest.raises(ValueError):
        TrainingSet.from_csv(text, Z2)
