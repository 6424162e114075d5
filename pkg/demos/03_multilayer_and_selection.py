"""
Layers, networks and architecture selection
===========================================

A layer is a grid of neurons sharing one input vector. Networks chain
layers; hidden outputs live in a scratch register. Several architectures
can share one circuit, each controlled by a value of a binary selector
register, so a superposed selector runs all of them side by side.
"""
# %%
from qpf import gates as G
from qpf.field import FieldSpec
from qpf.network import LayerSpec, NetworkArch, build_multi, build_network, forward
from qpf.oracle import classical_output
from qpf.state import basis_state, uniform_superpose

z3 = FieldSpec(3)
arch = NetworkArch((LayerSpec(2, 2), LayerSpec(1, 2)))
circ = build_network(arch, z3)
print(arch, "weights:", arch.n_weights, "scratch digits:", arch.scratch)

w = [1, 2, 0, 1, 2, 2]
zero = {r.name: [0] * r.width for r in circ.layout.registers}
out = forward(circ, basis_state(circ.layout, dict(zero, x=[2, 1], w=w)))
print("quantum output:", out.register_values("o"),
      "classical:", classical_output(arch, z3, w, [2, 1]))

# %%
# Two architectures behind a one-digit selector.
archs = [NetworkArch.neuron(2), arch]
mc = build_multi(archs, z3)
zero = {r.name: [0] * r.width for r in mc.layout.registers}
state = uniform_superpose(basis_state(mc.layout, dict(zero, x=[2, 1], w=w)), "a")
out = G.apply_gate(state, mc.program)
for lab, amp in out.items():
    sel = mc.selector.value_of(mc.layout.read(lab, "a"))
    print(f"arch {sel}: o = {mc.layout.read(lab, 'o')}  amplitude {amp.real:.4f}")
