"""Superposition-based architecture learning.

Every (architecture, weights) configuration is put in superposition, the
training set is streamed through all of them at once while a per-branch
performance counter accumulates matches, and a nonlinear search then
collapses the state onto one configuration whose performance exceeds a
threshold.
"""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from .errors import BudgetError, PreconditionError
from .field import FieldSpec
from .gates import (
    CompareFlag,
    DigitPermutation,
    IncrementIf,
    LoadConst,
    Program,
    Telemetry,
    ThresholdFlag,
    _value,
    apply_gate,
    counter_width,
    resolve,
)
from .network import MultiCircuit, NetworkArch, build_multi
from .oracle import performance as _classical_performance
from .state import SparseState, basis_state, measure, uniform_superpose

Z2 = FieldSpec(2)
DEFAULT_BUDGET = 2 ** 22
FOUND, NOT_FOUND = "Found", "NotFound"


@dataclass(frozen=True)
class TrainingSet:
    patterns: tuple
    spec: FieldSpec

    def __post_init__(self):
        pats = tuple((tuple(int(v) for v in x), tuple(int(v) for v in d)) for x, d in self.patterns)
        object.__setattr__(self, "patterns", pats)
        if not pats:
            raise ValueError("training set needs at least one pattern")
        n_in, n_out = len(pats[0][0]), len(pats[0][1])
        for x, d in pats:
            if len(x) != n_in or len(d) != n_out:
                raise ValueError("all patterns must share input and output widths")
            if any(not 0 <= v < self.spec.p for v in x + d):
                raise ValueError(f"pattern {(x, d)} has values outside Z{self.spec.p}")

    @property
    def k(self) -> int:
        return len(self.patterns)

    @property
    def n_inputs(self) -> int:
        return len(self.patterns[0][0])

    @property
    def n_outputs(self) -> int:
        return len(self.patterns[0][1])

    def __iter__(self):
        return iter(self.patterns)

    def __len__(self):
        return self.k

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i}" for i in range(1, self.n_inputs + 1)]
                   + [f"d{i}" for i in range(1, self.n_outputs + 1)])
        for x, d in self.patterns:
            w.writerow(list(x) + list(d))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, spec: FieldSpec) -> "TrainingSet":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty dataset")
        header = [h.strip() for h in rows[0]]
        n_in = sum(1 for h in header if h.startswith("x"))
        n_out = sum(1 for h in header if h.startswith("d"))
        expect = [f"x{i}" for i in range(1, n_in + 1)] + [f"d{i}" for i in range(1, n_out + 1)]
        if header != expect or n_in == 0 or n_out == 0:
            raise ValueError(f"dataset header must be x1..xn,d1..dr, got {header}")
        pats = []
        for row in rows[1:]:
            if not row:
                continue
            vals = [int(v) for v in row]
            if len(vals) != n_in + n_out:
                raise ValueError(f"row {row} has {len(vals)} fields, expected {n_in + n_out}")
            pats.append((vals[:n_in], vals[n_in:]))
        return cls(tuple(pats), spec)

    @classmethod
    def load(cls, path, spec: FieldSpec) -> "TrainingSet":
        return cls.from_csv(Path(path).read_text(), spec)


@dataclass
class SalConfig:
    archs: Sequence[NetworkArch]
    theta: int
    spec: FieldSpec = Z2
    seed: int = 0
    max_retries: int = 0
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        self.archs = tuple(self.archs)
        if self.theta < 0:
            raise ValueError("theta must be non-negative")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")


@dataclass
class SalResult:
    status: str
    arch_id: Optional[int]
    weights: Optional[tuple[int, ...]]
    performance: Optional[int]
    theta: int
    seed: int
    trace: list = field(default_factory=list)
    telemetry: Telemetry = field(default_factory=Telemetry)
    state: Optional[SparseState] = None
    pre_search: Optional[SparseState] = None

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "selector": self.arch_id,
            "weights": list(self.weights) if self.weights is not None else None,
            "performance": self.performance,
            "theta": self.theta,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def trace_lines(self, timings: bool = False) -> list[str]:
        out = []
        for ev in self.trace:
            if ev["event"] == "pattern":
                line = f"pattern {ev['index']} terms={ev['terms']}"
                if timings:
                    line += f" time={ev['seconds']:.6f}"
            elif ev["event"] == "digit":
                line = f"digit {ev['name']} {ev['value']}"
            else:
                line = f"search theta={ev['theta']} {ev['status']}"
            out.append(line)
        return out


# -- nonlinear primitives ---------------------------------------------------------

def nq(state: SparseState, flag_slice) -> SparseState:
    """Nonlinear global OR on a binary flag digit.

    If any branch carries flag 1, every branch gets flag 1; otherwise every
    branch gets flag 0. Labels that coincide afterwards are merged by adding
    amplitudes and the result is renormalised.
    """
    f = resolve(state.layout, flag_slice)
    target = 1 if any(lab[f] == 1 for lab in state) else 0
    out = {}
    for lab, amp in state.items():
        new = lab[:f] + (target,) + lab[f + 1:]
        out[new] = out.get(new, 0j) + amp
    return SparseState(state.layout, out).normalized()


def fix_digit(state: SparseState, digit: int, value: int) -> SparseState:
    """Collapse one digit onto ``value``: drop other branches, renormalise."""
    kept = {lab: amp for lab, amp in state.items() if lab[digit] == value}
    return SparseState(state.layout, kept).normalized()


def nonlinear_search(state: SparseState, digits: Sequence[int], theta: int,
                     perf: str = "perf", objective: str = "obj",
                     trace: Optional[list] = None,
                     telemetry: Optional[Telemetry] = None) -> tuple[SparseState, bool]:
    """Walk the search digits in order, fixing each to the smallest value
    that still has a branch with performance > theta.

    Returns the new state and whether a configuration was found. When no
    branch qualifies the input state is returned unchanged.
    """
    layout = state.layout
    perf_pos = layout.positions(perf)
    base = layout.register(perf).spec.d
    obj = layout.position(objective)
    if any(lab[obj] for lab in state):
        raise PreconditionError("objective digit must start at 0")
    flip = DigitPermutation(obj, (1, 0))
    start = state
    fixed_any = False
    for b in digits:
        chosen = None
        for i in range(layout.digit_specs[b].d):
            state = apply_gate(state, ThresholdFlag(perf_pos, base, theta, obj, b, i), telemetry)
            state = nq(state, obj)
            if next(iter(state))[obj] == 1:
                state = fix_digit(state, b, i)
                state = apply_gate(state, flip, telemetry)
                if chosen is None:
                    chosen = i
        if trace is not None:
            trace.append({"event": "digit", "name": layout.digit_name(b),
                          "value": "skip" if chosen is None else chosen})
        fixed_any = fixed_any or chosen is not None
    if not fixed_any:
        return start, False
    return state, True


# -- training --------------------------------------------------------------------

def sal_circuit(archs: Sequence[NetworkArch], spec: FieldSpec, k: int) -> MultiCircuit:
    cw = counter_width(k, spec.d)
    extra = [("flag", 1, Z2), ("perf", cw, spec), ("obj", 1, Z2)]
    return build_multi(archs, spec, extra)


def pattern_program(mc: MultiCircuit, x: Sequence[int], d: Sequence[int]) -> Program:
    """Load, forward, compare-and-count, uncompare, inverse, unload."""
    lay = mc.layout
    xs = lay.positions("x")
    load = LoadConst(xs, tuple(x), mc.spec)
    flag = lay.position("flag")
    compare = [mc.control(i, CompareFlag(lay.positions("o"), tuple(d), flag))
               for i in range(len(mc.archs))]
    count = IncrementIf(flag, lay.positions("perf"), lay.register("perf").spec.d)
    gates = [load, *mc.program, *compare, count, *compare, *mc.program.inverse(), load.inverse()]
    return Program(tuple(gates))


def ancilla_digits(mc: MultiCircuit) -> list[int]:
    names = ["x", "anc", "o", "flag", "obj"]
    return [p for n in names if n in mc.layout for p in mc.layout.positions(n)]


def ancillas_clean(state: SparseState, mc: MultiCircuit) -> bool:
    pos = ancilla_digits(mc)
    return all(not any(lab[i] for i in pos) for lab in state)


def initial_state(mc: MultiCircuit) -> SparseState:
    zero = {r.name: [0] * r.width for r in mc.layout.registers}
    state = basis_state(mc.layout, zero)
    state = uniform_superpose(state, "w")
    if mc.selector.width:
        state = uniform_superpose(state, "a")
    return state


def accumulate(config: SalConfig, training_set: TrainingSet,
               on_pattern: Optional[Callable] = None,
               telemetry: Optional[Telemetry] = None,
               trace: Optional[list] = None) -> tuple[MultiCircuit, SparseState]:
    """Everything before the search: returns the entangled
    configuration/performance state."""
    spec = config.spec
    if training_set.spec != spec:
        raise ValueError("training set and config use different fields")
    if config.theta > training_set.k:
        raise ValueError(f"theta={config.theta} exceeds pattern count {training_set.k}")
    mc = sal_circuit(config.archs, spec, training_set.k)
    if training_set.n_inputs != len(mc.layout.positions("x")):
        raise ValueError(f"patterns have {training_set.n_inputs} inputs, "
                         f"architectures need {len(mc.layout.positions('x'))}")
    if training_set.n_outputs != len(mc.layout.positions("o")):
        raise ValueError("pattern output width does not match the architectures")
    n_terms = 2 ** mc.selector.width * spec.d ** len(mc.layout.positions("w"))
    if n_terms > config.budget:
        raise BudgetError(f"{n_terms} superposed configurations exceed budget {config.budget}")

    state = initial_state(mc)
    if telemetry is not None:
        telemetry.observe(state)
    for idx, (x, d) in enumerate(training_set):
        t0 = time.perf_counter()
        state = apply_gate(state, pattern_program(mc, x, d), telemetry)
        if trace is not None:
            trace.append({"event": "pattern", "index": idx, "terms": len(state),
                          "seconds": time.perf_counter() - t0})
        if on_pattern is not None:
            on_pattern(idx, state, mc)
    return mc, state


def search_digits(mc: MultiCircuit) -> list[int]:
    """Selector digits first, then weights: favours low architecture ids."""
    return list(mc.selector_positions()) + list(mc.layout.positions("w"))


def run_sal(config: SalConfig, training_set: TrainingSet,
            on_pattern: Optional[Callable] = None) -> SalResult:
    telemetry = Telemetry()
    trace: list = []
    mc, state = accumulate(config, training_set, on_pattern, telemetry, trace)
    digits = search_digits(mc)
    pre_search = state

    theta = config.theta
    found = False
    for attempt in range(config.max_retries + 1):
        state, found = nonlinear_search(state, digits, theta, trace=trace, telemetry=telemetry)
        trace.append({"event": "search", "theta": theta, "status": FOUND if found else NOT_FOUND})
        if found or theta == 0 or attempt == config.max_retries:
            break
        theta -= 1

    if not found:
        return SalResult(NOT_FOUND, None, None, None, theta, config.seed, trace, telemetry, state,
                         pre_search)

    label, state = measure(state, config.seed)
    lay = mc.layout
    arch_id = mc.selector.value_of(lay.read(label, "a")) if mc.selector.width else 0
    n_w = mc.archs[arch_id].n_weights
    weights = lay.read(label, "w")[:n_w]
    perf = _value(label, lay.positions("perf"), lay.register("perf").spec.d)
    return SalResult(FOUND, arch_id, weights, perf, theta, config.seed, trace, telemetry,
                     state, pre_search)


def evaluate_classically(arch: NetworkArch, weights: Sequence[int],
                         training_set: TrainingSet) -> int:
    """Number of patterns a basis-weight network reproduces exactly."""
    return _classical_performance(arch, training_set.spec, tuple(weights), training_set.patterns)
