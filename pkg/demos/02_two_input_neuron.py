"""
A two-input neuron on superposed weights
========================================

The neuron computes y = x1*w1 + x2*w2 over Z2 using two P gates (into the
product registers p1, p2) and one S gate (into y). Putting both weight
registers into uniform superposition evaluates all four weight settings
at once.
"""
# %%
from qpf.field import FieldSpec
from qpf.network import NeuronSpec, build_neuron, forward, inverse
from qpf.state import basis_state, uniform_superpose

z2 = FieldSpec(2)
circ = build_neuron(NeuronSpec(2, z2))
print("registers:", [r.name for r in circ.layout.registers])
print("gates:", [type(g).__name__ for g in circ.program])

# %%
# Input x = 01, weights superposed.
zero = {r.name: 0 for r in circ.layout.registers}
state = basis_state(circ.layout, dict(zero, x2=1))
state = uniform_superpose(uniform_superpose(state, "w1"), "w2")
print("before:\n" + state.dump())

out = forward(circ, state)
print("after (x1 x2 w1 w2 p1 p2 y re im):\n" + out.dump())

# %%
# The circuit is reversible: running it backwards restores the input.
print("inverse restores input:", inverse(circ, out) == state)
