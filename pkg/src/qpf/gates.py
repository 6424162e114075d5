"""Reversible field gates as basis-label rewrites.

Every gate here is a permutation of the computational basis, so applying
it to a sparse state only relabels terms: amplitudes are carried over
untouched. Matrices are never built on the simulation path;
:func:`dense_matrix` exists for inspection and export.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import CounterOverflow, PreconditionError, SliceError, TooLarge
from .field import FieldSpec
from .state import BasisLabel, RegisterLayout, SparseState, _as_digits

DENSE_LIMIT = 2 ** 14
MATRIX_CHECK_LIMIT = 2 ** 10


class Gate:
    """Base class. Subclasses implement ``permute`` and ``inverse``."""

    def permute(self, label: BasisLabel) -> BasisLabel:
        raise NotImplementedError

    def inverse(self) -> "Gate":
        raise NotImplementedError

    def check(self, label: BasisLabel) -> None:
        """Hook for per-term runtime errors (e.g. counter overflow)."""

    def digits(self) -> tuple[int, ...]:
        raise NotImplementedError


def _replace(label, pos, value):
    lab = list(label)
    lab[pos] = value
    return tuple(lab)


def _value(label, positions, base):
    """Little-endian base-``base`` integer held in ``positions``."""
    v = 0
    for i in reversed(positions):
        v = v * base + label[i]
    return v


def _with_value(label, positions, base, value):
    lab = list(label)
    for i in positions:
        lab[i] = value % base
        value //= base
    return tuple(lab)


@dataclass(frozen=True)
class Identity(Gate):
    def permute(self, label):
        return label

    def inverse(self):
        return self

    def digits(self):
        return ()


@dataclass(frozen=True)
class _Ternary(Gate):
    a: int
    b: int
    c: int
    spec: FieldSpec

    def __post_init__(self):
        if len({self.a, self.b, self.c}) != 3:
            raise SliceError(f"operand digits must be disjoint: {(self.a, self.b, self.c)}")

    def digits(self):
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class ProductP(_Ternary):
    """|a>|b>|c> -> |a>|b>|c + a*b>"""

    def permute(self, label):
        p = self.spec.p
        return _replace(label, self.c, (label[self.c] + label[self.a] * label[self.b]) % p)

    def inverse(self):
        return InverseP(self.a, self.b, self.c, self.spec)


@dataclass(frozen=True)
class InverseP(_Ternary):
    def permute(self, label):
        p = self.spec.p
        return _replace(label, self.c, (label[self.c] - label[self.a] * label[self.b]) % p)

    def inverse(self):
        return ProductP(self.a, self.b, self.c, self.spec)


@dataclass(frozen=True)
class SumS(_Ternary):
    """|a>|b>|c> -> |a>|b>|c + (a + b)>"""

    def permute(self, label):
        p = self.spec.p
        return _replace(label, self.c, (label[self.c] + label[self.a] + label[self.b]) % p)

    def inverse(self):
        return InverseS(self.a, self.b, self.c, self.spec)


@dataclass(frozen=True)
class InverseS(_Ternary):
    def permute(self, label):
        p = self.spec.p
        return _replace(label, self.c, (label[self.c] - label[self.a] - label[self.b]) % p)

    def inverse(self):
        return SumS(self.a, self.b, self.c, self.spec)


@dataclass(frozen=True)
class Controlled(Gate):
    """Apply ``inner`` only on terms whose control digits equal ``values``."""

    controls: tuple[int, ...]
    values: tuple[int, ...]
    inner: Gate

    def __post_init__(self):
        if len(self.controls) != len(self.values):
            raise SliceError("one control value per control digit")
        if set(self.controls) & set(self.inner.digits()):
            raise SliceError("control digits overlap the controlled gate's operands")

    def _active(self, label):
        return all(label[c] == v for c, v in zip(self.controls, self.values))

    def permute(self, label):
        return self.inner.permute(label) if self._active(label) else label

    def check(self, label):
        if self._active(label):
            self.inner.check(label)

    def inverse(self):
        return Controlled(self.controls, self.values, self.inner.inverse())

    def digits(self):
        return tuple(self.controls) + self.inner.digits()


@dataclass(frozen=True)
class CompareFlag(Gate):
    """Toggle the binary ``flag`` digit where the register equals ``value``.

    Self-inverse, so running it a second time uncomputes the flag.
    """

    register: tuple[int, ...]
    value: tuple[int, ...]
    flag: int

    def __post_init__(self):
        if len(self.register) != len(self.value):
            raise SliceError("comparison value must match register width")
        if self.flag in self.register:
            raise SliceError("flag digit overlaps compared register")

    def permute(self, label):
        if all(label[i] == v for i, v in zip(self.register, self.value)):
            return _replace(label, self.flag, label[self.flag] ^ 1)
        return label

    def inverse(self):
        return self

    def digits(self):
        return tuple(self.register) + (self.flag,)


@dataclass(frozen=True)
class ThresholdFlag(Gate):
    """Toggle ``flag`` where counter > ``theta`` and, optionally, one extra
    digit equals ``digit_value``. Self-inverse."""

    counter: tuple[int, ...]
    base: int
    theta: int
    flag: int
    digit: Optional[int] = None
    digit_value: int = 0

    def permute(self, label):
        if _value(label, self.counter, self.base) <= self.theta:
            return label
        if self.digit is not None and label[self.digit] != self.digit_value:
            return label
        return _replace(label, self.flag, label[self.flag] ^ 1)

    def inverse(self):
        return self

    def digits(self):
        extra = () if self.digit is None else (self.digit,)
        return tuple(self.counter) + (self.flag,) + extra


@dataclass(frozen=True)
class IncrementIf(Gate):
    """Add ``step`` (mod base^width) to a little-endian base-d counter
    wherever the flag digit is 1.

    As a basis map the counter wraps around, which keeps it a bijection;
    during simulation a wrap raises :class:`CounterOverflow` instead.
    """

    flag: int
    counter: tuple[int, ...]
    base: int
    step: int = 1

    def permute(self, label):
        if label[self.flag] != 1:
            return label
        mod = self.base ** len(self.counter)
        v = (_value(label, self.counter, self.base) + self.step) % mod
        return _with_value(label, self.counter, self.base, v)

    def check(self, label):
        if label[self.flag] != 1:
            return
        v = _value(label, self.counter, self.base) + self.step
        if not 0 <= v < self.base ** len(self.counter):
            raise CounterOverflow(f"counter over digits {self.counter} left its range")

    def inverse(self):
        return IncrementIf(self.flag, self.counter, self.base, -self.step)

    def digits(self):
        return (self.flag,) + tuple(self.counter)


@dataclass(frozen=True)
class LoadConst(Gate):
    """Add classical field constants into a register (x_i <- x_i + v_i)."""

    register: tuple[int, ...]
    values: tuple[int, ...]
    spec: FieldSpec

    def permute(self, label):
        lab = list(label)
        for i, v in zip(self.register, self.values):
            lab[i] = (lab[i] + v) % self.spec.p
        return tuple(lab)

    def inverse(self):
        return LoadConst(self.register, tuple((-v) % self.spec.p for v in self.values), self.spec)

    def digits(self):
        return tuple(self.register)


@dataclass(frozen=True)
class DigitPermutation(Gate):
    """Relabel one digit through an explicit table: v -> table[v]."""

    digit: int
    table: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.table) != list(range(len(self.table))):
            raise ValueError(f"{self.table} is not a permutation table")

    def permute(self, label):
        return _replace(label, self.digit, self.table[label[self.digit]])

    def inverse(self):
        inv = [0] * len(self.table)
        for i, t in enumerate(self.table):
            inv[t] = i
        return DigitPermutation(self.digit, tuple(inv))

    def digits(self):
        return (self.digit,)


@dataclass(frozen=True)
class Program(Gate):
    """An ordered gate sequence; itself a gate."""

    gates: tuple[Gate, ...] = ()

    def __iter__(self):
        return iter(self.gates)

    def __len__(self):
        return len(self.gates)

    def __add__(self, other: "Program") -> "Program":
        return Program(self.gates + tuple(other))

    def permute(self, label):
        for g in self.gates:
            label = g.permute(label)
        return label

    def inverse(self):
        return Program(tuple(g.inverse() for g in reversed(self.gates)))

    def digits(self):
        out = []
        for g in self.gates:
            out.extend(d for d in g.digits() if d not in out)
        return tuple(out)


@dataclass
class Telemetry:
    """Counters updated by :func:`apply_gate`."""

    gate_applications: int = 0
    peak_terms: int = 0
    history: list = field(default_factory=list)

    def observe(self, state: SparseState):
        self.peak_terms = max(self.peak_terms, len(state))


def apply_gate(state: SparseState, gate: Gate, telemetry: Optional[Telemetry] = None) -> SparseState:
    """Relabel every term of ``state`` through ``gate``.

    Programs are unrolled so telemetry counts primitive gates.
    """
    if isinstance(gate, Program):
        for g in gate.gates:
            state = apply_gate(state, g, telemetry)
        return state
    out = {}
    check, permute = gate.check, gate.permute
    for lab, amp in state._terms.items():
        check(lab)
        out[permute(lab)] = amp
    if len(out) != len(state):
        raise AssertionError(f"{gate!r} is not injective on the state's support")
    new = SparseState._trusted(state.layout, out)
    if telemetry is not None:
        telemetry.gate_applications += 1
        telemetry.observe(new)
    return new


# -- slice helpers ----------------------------------------------------------

Slice = Union[int, str, tuple]


def resolve(layout: RegisterLayout, s: Slice) -> int:
    """Map a slice designator to a digit position.

    Accepts a digit index, a single-digit register name, or ``(name, i)``.
    """
    if isinstance(s, (int, np.integer)):
        if not 0 <= s < layout.total_digits:
            raise SliceError(f"digit {s} outside layout")
        return int(s)
    if isinstance(s, str):
        pos = layout.positions(s)
        if len(pos) != 1:
            raise SliceError(f"register {s!r} has {len(pos)} digits; pass (name, index)")
        return pos[0]
    name, idx = s
    return layout.positions(name)[idx]


def _ternary(cls, layout, a, b, c):
    pa, pb, pc = (resolve(layout, s) for s in (a, b, c))
    if len({pa, pb, pc}) != 3:
        raise SliceError(f"operand slices overlap: {a!r}, {b!r}, {c!r}")
    specs = {layout.digit_specs[i] for i in (pa, pb, pc)}
    if len(specs) != 1:
        raise SliceError("operand slices live in different fields")
    return cls(pa, pb, pc, specs.pop())


def P(layout, a, b, c) -> ProductP:
    return _ternary(ProductP, layout, a, b, c)


def S(layout, a, b, c) -> SumS:
    return _ternary(SumS, layout, a, b, c)


def apply_P(state: SparseState, a_slice, b_slice, c_slice) -> SparseState:
    return apply_gate(state, P(state.layout, a_slice, b_slice, c_slice))


def apply_S(state: SparseState, a_slice, b_slice, c_slice) -> SparseState:
    return apply_gate(state, S(state.layout, a_slice, b_slice, c_slice))


def compare_flag(state: SparseState, register: str, classical_value, flag_slice) -> SparseState:
    """Set the flag to 1 on exactly the terms where ``register`` holds
    ``classical_value``. The flag must start at 0 everywhere."""
    layout = state.layout
    flag = resolve(layout, flag_slice)
    if any(lab[flag] != 0 for lab in state):
        raise PreconditionError("flag digit must be 0 in every term")
    pos = layout.positions(register)
    value = tuple(_as_digits(classical_value, len(pos)))
    return apply_gate(state, CompareFlag(pos, value, flag))


def increment_if(state: SparseState, flag_slice, counter_register: str) -> SparseState:
    layout = state.layout
    flag = resolve(layout, flag_slice)
    reg = layout.register(counter_register)
    return apply_gate(state, IncrementIf(flag, layout.positions(counter_register), reg.spec.d))


def counter_width(k: int, d: int) -> int:
    """Digits needed for a base-d counter that must reach ``k``."""
    w = 1
    while d ** w < k + 1:
        w += 1
    return w


# -- dense export -------------------------------------------------------------

def dense_matrix(gate: Gate, layout: RegisterLayout) -> np.ndarray:
    """Full matrix of a permutation gate, columns indexed lexicographically."""
    dim = layout.dimension()
    if dim > DENSE_LIMIT:
        raise TooLarge(f"dimension {dim} exceeds dense export limit {DENSE_LIMIT}")
    labels = list(layout.labels())
    index = {lab: i for i, lab in enumerate(labels)}
    U = np.zeros((dim, dim), dtype=complex)
    for j, lab in enumerate(labels):
        U[index[gate.permute(lab)], j] = 1.0
    return U


def verify_permutation(gate: Gate, layout: RegisterLayout) -> bool:
    """True iff ``gate`` maps the computational basis bijectively onto itself.

    The image set is enumerated directly; for small layouts the exact 0/1
    matrix is also built and U @ U.T == I checked.
    """
    images = set()
    n = 0
    for lab in layout.labels():
        img = gate.permute(lab)
        if len(img) != len(lab) or any(not 0 <= v < s.d for v, s in zip(img, layout.digit_specs)):
            return False
        images.add(img)
        n += 1
    if len(images) != n:
        return False
    if n > MATRIX_CHECK_LIMIT:
        return True
    U = dense_matrix(gate, layout)
    if not np.all((U == 0) | (U == 1)):
        return False
    R = U.real.astype(np.int64)
    return bool(np.array_equal(R @ R.T, np.eye(len(R), dtype=np.int64)))


def format_matrix(U: np.ndarray) -> str:
    """Complex text format: one row per line, entries ``re+imi``."""
    def fmt(z):
        return f"{z.real:g}{z.imag:+g}i"
    return "\n".join(" ".join(fmt(z) for z in row) for row in U) + "\n"


def format_permutation(U: np.ndarray) -> str:
    """Compact 0/1 format for permutation matrices."""
    R = U.real.astype(int)
    return "\n".join(" ".join(str(v) for v in row) for row in R) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    rows = []
    for line in text.strip().splitlines():
        row = []
        for tok in line.split():
            row.append(complex(tok.replace("i", "j")) if "i" in tok else complex(int(tok)))
        rows.append(row)
    return np.array(rows, dtype=complex)
