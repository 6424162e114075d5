"""Quantum perceptrons over a field and multilayer networks as gate programs.

A neuron computes y = sum_i x_i * w_i over Z_p with one product gate per
input and a chain of sum gates. A layer is a stack of neurons sharing the
input register; a network is a sequence of layers, each writing its outputs
into fresh digits that feed the next layer. No activation is applied.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

from .errors import LayoutError, PreconditionError, SelectorWidth
from .field import FieldSpec
from .gates import Controlled, Gate, ProductP, Program, SumS, Telemetry, apply_gate
from .state import RegisterLayout, SparseState


@dataclass(frozen=True)
class NeuronSpec:
    n_inputs: int
    spec: FieldSpec

    def __post_init__(self):
        if self.n_inputs < 1:
            raise ValueError("a neuron needs at least one input")

    @property
    def register_count(self) -> int:
        n = self.n_inputs
        if n == 1:
            return 3
        return n + n + n + (n - 2) + 1


@dataclass(frozen=True)
class LayerSpec:
    """Weight matrix shape: ``rows`` outputs, ``cols`` inputs."""

    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"layer shape must be positive, got {self.rows}x{self.cols}")

    @property
    def n_weights(self) -> int:
        return self.rows * self.cols

    @property
    def scratch(self) -> int:
        return self.rows * neuron_scratch(self.cols)


@dataclass(frozen=True)
class NetworkArch:
    layers: tuple[LayerSpec, ...]
    arch_id: int = 0

    def __post_init__(self):
        layers = tuple(l if isinstance(l, LayerSpec) else LayerSpec(**l) for l in self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers:
            raise ValueError("an architecture needs at least one layer")
        for a, b in zip(layers, layers[1:]):
            if a.rows != b.cols:
                raise ValueError(
                    f"layer {a.rows}x{a.cols} cannot feed layer {b.rows}x{b.cols}"
                )

    @classmethod
    def neuron(cls, n_inputs: int, arch_id: int = 0) -> "NetworkArch":
        return cls((LayerSpec(1, n_inputs),), arch_id)

    @property
    def n_inputs(self) -> int:
        return self.layers[0].cols

    @property
    def n_outputs(self) -> int:
        return self.layers[-1].rows

    @property
    def n_weights(self) -> int:
        return sum(l.n_weights for l in self.layers)

    @property
    def scratch(self) -> int:
        """Ancilla digits besides the final outputs."""
        inner = sum(l.rows for l in self.layers[:-1])
        return inner + sum(l.scratch for l in self.layers)

    def to_json(self) -> list:
        return [{"rows": l.rows, "cols": l.cols} for l in self.layers]


def neuron_scratch(n: int) -> int:
    # products + partial sums; the n=1 neuron writes its product straight to y
    return 0 if n == 1 else n + (n - 2)


# -- gate emission -------------------------------------------------------------

def neuron_gates(spec: FieldSpec, xs, ws, products, sums, y) -> list[Gate]:
    """P(x_i, w_i -> p_i) for every input, then a left fold of S gates
    p_1 + p_2 -> s_2, s_2 + p_3 -> s_3, ..., ending in y."""
    n = len(xs)
    if n == 1:
        return [ProductP(xs[0], ws[0], y, spec)]
    gates = [ProductP(x, w, p, spec) for x, w, p in zip(xs, ws, products)]
    acc = products[0]
    targets = list(sums) + [y]
    for p, t in zip(products[1:], targets):
        gates.append(SumS(acc, p, t, spec))
        acc = t
    return gates


def layer_gates(spec: FieldSpec, layer: LayerSpec, xs, ws, scratch, outs) -> list[Gate]:
    """Row i computes o_i = sum_j w_ij x_j; weights are row-major."""
    c = layer.cols
    per = neuron_scratch(c)
    gates = []
    for i in range(layer.rows):
        anc = scratch[i * per:(i + 1) * per]
        gates += neuron_gates(spec, xs, ws[i * c:(i + 1) * c], anc[:c], anc[c:], outs[i])
    return gates


def network_gates(spec: FieldSpec, arch: NetworkArch, xs, ws, scratch, outs) -> list[Gate]:
    """Chain the layers; intermediate outputs occupy the front of ``scratch``."""
    if len(xs) < arch.n_inputs or len(ws) < arch.n_weights or len(scratch) < arch.scratch:
        raise LayoutError(f"registers too small for architecture {arch.to_json()}")
    gates = []
    scratch = list(scratch)
    cur_in = list(xs[:arch.n_inputs])
    w_off = 0
    for li, layer in enumerate(arch.layers):
        last = li == len(arch.layers) - 1
        if last:
            dst = list(outs[:layer.rows])
        else:
            dst, scratch = scratch[:layer.rows], scratch[layer.rows:]
        anc, scratch = scratch[:layer.scratch], scratch[layer.scratch:]
        w = ws[w_off:w_off + layer.n_weights]
        w_off += layer.n_weights
        gates += layer_gates(spec, layer, cur_in, w, anc, dst)
        cur_in = dst
    return gates


# -- circuits --------------------------------------------------------------------

@dataclass(frozen=True)
class Circuit:
    """A gate program together with the layout it acts on.

    ``ancillas`` and ``outputs`` name the registers that must be zero
    before :func:`forward` runs.
    """

    layout: RegisterLayout
    program: Program
    inputs: tuple[str, ...]
    weights: tuple[str, ...]
    ancillas: tuple[str, ...]
    outputs: tuple[str, ...]

    def positions(self, names: Sequence[str]) -> list[int]:
        return [p for n in names for p in self.layout.positions(n)]


def build_neuron(spec: NeuronSpec) -> Circuit:
    """Neuron with one single-digit register per quantity: x_i, w_i, p_i,
    s_2..s_{n-1}, y. For n=1 the product is written straight to y."""
    n, F = spec.n_inputs, spec.spec
    xs = [f"x{i}" for i in range(1, n + 1)]
    ws = [f"w{i}" for i in range(1, n + 1)]
    ps = [f"p{i}" for i in range(1, n + 1)] if n > 1 else []
    ss = [f"s{i}" for i in range(2, n)]
    names = xs + ws + ps + ss + ["y"]
    layout = RegisterLayout([(nm, 1, F) for nm in names])
    pos = {nm: layout.position(nm) for nm in names}
    gates = neuron_gates(F, [pos[x] for x in xs], [pos[w] for w in ws],
                         [pos[p] for p in ps], [pos[s] for s in ss], pos["y"])
    return Circuit(layout, Program(tuple(gates)), tuple(xs), tuple(ws),
                   tuple(ps + ss), ("y",))


def _network_layout(F: FieldSpec, n_in, n_w, n_anc, n_out, prefix=()):
    regs = list(prefix) + [("x", n_in, F), ("w", n_w, F)]
    if n_anc:
        regs.append(("anc", n_anc, F))
    regs.append(("o", n_out, F))
    return RegisterLayout(regs)


def build_network(arch: NetworkArch, spec: FieldSpec) -> Circuit:
    """Registers: x (inputs), w (all weights, layer by layer, row-major),
    anc (intermediate outputs and neuron scratch), o (final outputs)."""
    layout = _network_layout(spec, arch.n_inputs, arch.n_weights, arch.scratch, arch.n_outputs)
    anc = layout.positions("anc") if arch.scratch else ()
    gates = network_gates(spec, arch, layout.positions("x"), layout.positions("w"),
                          anc, layout.positions("o"))
    return Circuit(layout, Program(tuple(gates)), ("x",), ("w",),
                   ("anc",) if arch.scratch else (), ("o",))


def build_layer(layer: LayerSpec, spec: FieldSpec) -> Circuit:
    return build_network(NetworkArch((layer,)), spec)


def _check_clean(circuit: Circuit, state: SparseState):
    pos = circuit.positions(circuit.ancillas + circuit.outputs)
    for lab in state:
        if any(lab[i] for i in pos):
            raise PreconditionError("ancilla and output registers must be zero before forward")


def forward(circuit: Circuit, state: SparseState, telemetry: Telemetry = None) -> SparseState:
    _check_clean(circuit, state)
    return apply_gate(state, circuit.program, telemetry)


def inverse(circuit: Circuit, state: SparseState, telemetry: Telemetry = None) -> SparseState:
    return apply_gate(state, circuit.program.inverse(), telemetry)


# -- architecture selection -------------------------------------------------

@dataclass(frozen=True)
class ArchSelector:
    """Binary register addressing one of ``m`` architectures.

    Selector digits are big-endian so that digit-wise lexicographic order
    coincides with architecture index order.
    """

    m: int
    width: int = -1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one architecture")
        need = math.ceil(math.log2(self.m)) if self.m > 1 else 0
        if self.width == -1:
            object.__setattr__(self, "width", need)
        elif self.width < need:
            raise SelectorWidth(f"{self.width} selector digits cannot address {self.m} architectures")

    def digits_of(self, i: int) -> tuple[int, ...]:
        return tuple((i >> (self.width - 1 - k)) & 1 for k in range(self.width))

    def value_of(self, digits: Sequence[int]) -> int:
        v = 0
        for b in digits:
            v = 2 * v + b
        return v


@dataclass(frozen=True)
class MultiCircuit:
    """All architectures of a search on one shared layout."""

    layout: RegisterLayout
    archs: tuple[NetworkArch, ...]
    selector: ArchSelector
    programs: tuple[Program, ...]
    program: Program
    spec: FieldSpec

    def selector_positions(self) -> tuple[int, ...]:
        return self.layout.positions("a") if self.selector.width else ()

    def control(self, i: int, gate: Gate) -> Gate:
        if not self.selector.width:
            return gate
        return Controlled(self.selector_positions(), self.selector.digits_of(i), gate)


def shared_sizes(archs: Sequence[NetworkArch]) -> dict:
    outs = {a.n_outputs for a in archs}
    if len(outs) != 1:
        raise ValueError(f"architectures disagree on output width: {sorted(outs)}")
    return dict(
        n_in=max(a.n_inputs for a in archs),
        n_w=max(a.n_weights for a in archs),
        n_anc=max(a.scratch for a in archs),
        n_out=outs.pop(),
    )


def controlled_network(archs: Sequence[NetworkArch], selector: ArchSelector,
                       layout: RegisterLayout, spec: FieldSpec) -> tuple[Program, tuple[Program, ...]]:
    """Wrap each architecture's program in a control on selector value i.

    All architectures read a prefix of the shared x and w registers and
    write the shared o register, so branches with different selector values
    never interfere. Returns the combined program and the per-arch ones.
    """
    if selector.m != len(archs):
        raise SelectorWidth(f"selector addresses {selector.m} archs, got {len(archs)}")
    if selector.width:
        if "a" not in layout or len(layout.positions("a")) < selector.width:
            raise SelectorWidth("layout selector register is narrower than required")
        ctrl = layout.positions("a")[:selector.width]
    elif len(archs) != 1:
        raise SelectorWidth("zero-width selector can only address one architecture")
    anc = layout.positions("anc") if "anc" in layout else ()
    per_arch = []
    combined = []
    for i, arch in enumerate(archs):
        gates = network_gates(spec, arch, layout.positions("x"), layout.positions("w"),
                              anc, layout.positions("o"))
        per_arch.append(Program(tuple(gates)))
        if selector.width:
            combined += [Controlled(ctrl, selector.digits_of(i), g) for g in gates]
        else:
            combined += gates
    return Program(tuple(combined)), tuple(per_arch)


def build_multi(archs: Sequence[NetworkArch], spec: FieldSpec, extra=()) -> MultiCircuit:
    """Shared layout a, x, w, [anc], o followed by ``extra`` registers."""
    archs = tuple(archs)
    sel = ArchSelector(len(archs))
    sizes = shared_sizes(archs)
    prefix = [("a", sel.width, FieldSpec(2))] if sel.width else []
    layout = _network_layout(spec, sizes["n_in"], sizes["n_w"], sizes["n_anc"], sizes["n_out"], prefix)
    if extra:
        layout = RegisterLayout(list(layout.registers) + list(extra))
    program, per_arch = controlled_network(archs, sel, layout, spec)
    return MultiCircuit(layout, archs, sel, per_arch, program, spec)


# -- architecture files ----------------------------------------------------------

def load_architectures(source: Union[str, Path, dict]) -> tuple[FieldSpec, list[NetworkArch]]:
    """Parse ``{"field_p": p, "architectures": [[{"rows":..,"cols":..}, ...], ...]}``."""
    if isinstance(source, dict):
        doc = source
    else:
        doc = json.loads(Path(source).read_text())
    if not isinstance(doc, dict) or "field_p" not in doc or "architectures" not in doc:
        raise ValueError("architecture file needs 'field_p' and 'architectures'")
    spec = FieldSpec(int(doc["field_p"]))
    archs = doc["architectures"]
    if not isinstance(archs, list) or not archs:
        raise ValueError("'architectures' must be a non-empty list")
    out = []
    for i, layers in enumerate(archs):
        if not isinstance(layers, list):
            raise ValueError(f"architecture {i} must be a list of layers")
        out.append(NetworkArch(tuple(LayerSpec(int(l["rows"]), int(l["cols"])) for l in layers), i))
    shared_sizes(out)
    return spec, out


def dump_architectures(spec: FieldSpec, archs: Sequence[NetworkArch]) -> str:
    return json.dumps({"field_p": spec.p, "architectures": [a.to_json() for a in archs]})
