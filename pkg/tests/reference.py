"""Hand-checked reference values shared by several test modules."""
import numpy as np

# |a b c> -> |a b c+(a+b)> over Z2, columns in |000>..|111> order
SUM_GATE_Z2 = np.array([
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
])

# |a b c> -> |a b c+a*b> over Z2
PRODUCT_GATE_Z2 = np.array([
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
])

# Two-input Z2 neuron on x=01 with all four weight settings superposed.
# Registers x1 x2 w1 w2 p1 p2 y; every branch has amplitude 1/2.
NEURON_DEMO_FINAL = {
    (0, 1, 0, 0, 0, 0, 0): 0.5,
    (0, 1, 0, 1, 0, 1, 1): 0.5,
    (0, 1, 1, 0, 0, 0, 0): 0.5,
    (0, 1, 1, 1, 0, 1, 1): 0.5,
}
NEURON_DEMO_INITIAL = {
    (0, 1, 0, 0, 0, 0, 0): 0.5,
    (0, 1, 0, 1, 0, 0, 0): 0.5,
    (0, 1, 1, 0, 0, 0, 0): 0.5,
    (0, 1, 1, 1, 0, 0, 0): 0.5,
}
