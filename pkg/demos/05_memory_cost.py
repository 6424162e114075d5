"""
Dense versus sparse memory
==========================

A dense operator on the 8n qubits of an n-input neuron with 8-bit
encodings needs 4 * (2^(8n))^2 bytes. The sparse simulator only stores
branches that are actually populated.
"""
# %%
from qpf.cli import sparse_peak
from qpf.oracle import dense_simulation_cost, human_bytes

for n in (1, 2, 3):
    print(f"n={n}: dense operator {human_bytes(dense_simulation_cost(n))}")

# %%
for n_weights in (2, 4, 8):
    print(f"Z2 neuron with {n_weights} superposed weights: "
          f"peak {sparse_peak(n_weights)} terms")
