"""
Training by superposition: searching weights and architectures at once
======================================================================

Every (architecture, weight) configuration is superposed. For each
training pattern the circuit runs forward, compares the output with the
target, increments a performance counter on a match and uncomputes the
rest. A digit-by-digit search then keeps only configurations whose
performance exceeds a threshold theta, picking the smallest digit at
each step. The brute-force oracle confirms the answer.
"""
# %%
from qpf.field import FieldSpec
from qpf.network import LayerSpec, NetworkArch
from qpf.oracle import enumerate_performance
from qpf.sal import SalConfig, TrainingSet, ancillas_clean, evaluate_classically, run_sal

z2 = FieldSpec(2)
archs = [NetworkArch.neuron(2), NetworkArch((LayerSpec(2, 2), LayerSpec(1, 2)))]
# target: XOR of the two inputs
data = TrainingSet(tuple(((a, b), ((a + b) % 2,)) for a in range(2) for b in range(2)), z2)
print(data.to_csv())

# %%
clean = []
result = run_sal(SalConfig(archs, theta=3, spec=z2, seed=1), data,
                 on_pattern=lambda i, s, mc: clean.append(ancillas_clean(s, mc)))
print("\n".join(result.trace_lines()))
print(result.to_json())
print("ancillas clean after every pattern:", all(clean))
print("peak terms:", result.telemetry.peak_terms,
      "gate applications:", result.telemetry.gate_applications)

# %%
# Cross-check with exhaustive enumeration.
report = enumerate_performance(archs, z2, data)
print("oracle winner:", report.lexicographic_winner(3))
print("returned     :", report.digit_string(result.arch_id, result.weights))
print("classical score of returned config:",
      evaluate_classically(archs[result.arch_id], result.weights, data))

# %%
# An unattainable threshold gives NotFound; allowing retries lowers theta.
hard = TrainingSet((((0, 1), (1,)), ((0, 1), (0,))), z2)
print(run_sal(SalConfig(archs, 1, z2), hard).status)
print(run_sal(SalConfig(archs, 1, z2, max_retries=1), hard).to_dict())
