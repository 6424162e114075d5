"""
Field arithmetic and the two basic gates
=========================================

Every register digit in this package holds an element of a prime field
Z_p. The two workhorse gates act on three digits |a, b, c>:

* S (sum):     c <- c + (a + b)
* P (product): c <- c + a * b

Both only relabel basis states, so their matrices are permutations.
"""
# %%
# Arithmetic in Z_7
from qpf.field import FieldSpec, inv, verify_field_axioms

z7 = FieldSpec(7)
a, b = z7(3), z7(5)
print("3 + 5 =", a + b, "  3 * 5 =", a * b, "  3^-1 =", inv(a))
print("field axioms hold for Z7:", verify_field_axioms(z7).ok)

# %%
# Dense matrices over Z2 on three digits
from qpf import gates as G
from qpf.state import RegisterLayout

z2 = FieldSpec(2)
layout = RegisterLayout([("a", 1, z2), ("b", 1, z2), ("c", 1, z2)])
S = G.dense_matrix(G.SumS(0, 1, 2, z2), layout)
P = G.dense_matrix(G.ProductP(0, 1, 2, z2), layout)
print("S =\n" + G.format_permutation(S))
print("P =\n" + G.format_permutation(P))

# %%
# Larger fields: the matrices are still permutations, and the inverse
# gates undo them.
z5 = FieldSpec(5)
lay5 = RegisterLayout([(f"q{i}", 1, z5) for i in range(4)])
for gate in (G.SumS(0, 1, 3, z5), G.ProductP(1, 2, 0, z5)):
    prog = G.Program((gate, gate.inverse()))
    print(type(gate).__name__, "is a permutation:", G.verify_permutation(gate, lay5),
          "| gate then inverse is identity:",
          all(prog.permute(lab) == lab for lab in lay5.labels()))
