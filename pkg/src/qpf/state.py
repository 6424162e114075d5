"""Sparse multi-register quantum states over field-digit alphabets.

A state is a map from basis labels (tuples of ints, one per digit of the
layout) to complex amplitudes. Only labels with non-negligible amplitude
are stored, so the cost of every operation scales with the number of
superposed branches rather than with the Hilbert-space dimension.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import LabelError, LayoutError, PreconditionError
from .field import FieldSpec

#: A full computational-basis assignment, one int per digit of a layout.
BasisLabel = tuple

PRUNE_TOL = 1e-12
NORM_TOL = 1e-9


@dataclass(frozen=True)
class Register:
    name: str
    width: int
    spec: FieldSpec


class RegisterLayout:
    """Ordered named registers; each register is a run of field digits.

    >>> z2 = FieldSpec(2)
    >>> lay = RegisterLayout([("x", 2, z2), ("y", 1, z2)])
    >>> lay.positions("y")
    (2,)
    """

    def __init__(self, registers: Iterable[Union[Register, tuple]]):
        regs = []
        for r in registers:
            if not isinstance(r, Register):
                r = Register(*r)
            if r.width < 1:
                raise LayoutError(f"register {r.name!r} must have width >= 1")
            regs.append(r)
        names = [r.name for r in regs]
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")
        self.registers: tuple[Register, ...] = tuple(regs)
        self._offsets = {}
        off = 0
        for r in regs:
            self._offsets[r.name] = off
            off += r.width
        self.total_digits = off
        self.digit_specs: tuple[FieldSpec, ...] = tuple(
            r.spec for r in regs for _ in range(r.width)
        )

    def __contains__(self, name):
        return name in self._offsets

    def __eq__(self, other):
        return isinstance(other, RegisterLayout) and self.registers == other.registers

    def __hash__(self):
        return hash(self.registers)

    def __repr__(self):
        inner = ", ".join(f"{r.name}:{r.width}@Z{r.spec.p}" for r in self.registers)
        return f"RegisterLayout({inner})"

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise LayoutError(f"no register named {name!r}")

    def positions(self, name: str) -> tuple[int, ...]:
        if name not in self._offsets:
            raise LayoutError(f"no register named {name!r}")
        off = self._offsets[name]
        return tuple(range(off, off + self.register(name).width))

    def position(self, name: str, index: int = 0) -> int:
        return self.positions(name)[index]

    def digit_name(self, pos: int) -> str:
        for r in self.registers:
            off = self._offsets[r.name]
            if off <= pos < off + r.width:
                return r.name if r.width == 1 else f"{r.name}[{pos - off}]"
        raise LayoutError(f"digit {pos} out of range")

    def dimension(self) -> int:
        return math.prod(s.d for s in self.digit_specs)

    def labels(self) -> Iterable[BasisLabel]:
        """All basis labels in lexicographic order."""
        return itertools.product(*(range(s.d) for s in self.digit_specs))

    def label(self, assignment: Mapping[str, Union[int, Sequence[int]]]) -> BasisLabel:
        digits = []
        missing = [r.name for r in self.registers if r.name not in assignment]
        if missing:
            raise LabelError(f"assignment is missing registers {missing}")
        extra = set(assignment) - set(self._offsets)
        if extra:
            raise LabelError(f"unknown registers {sorted(extra)}")
        for r in self.registers:
            v = assignment[r.name]
            vals = _as_digits(v, r.width)
            if len(vals) != r.width:
                raise LabelError(f"register {r.name!r} needs {r.width} digits, got {v!r}")
            for x in vals:
                if not 0 <= x < r.spec.p:
                    raise LabelError(f"digit {x} out of range for {r.name!r} over Z{r.spec.p}")
            digits.extend(vals)
        return tuple(digits)

    def read(self, label: BasisLabel, name: str) -> tuple[int, ...]:
        return tuple(label[i] for i in self.positions(name))


def _as_digits(v, width) -> list[int]:
    if isinstance(v, str):
        return [int(c) for c in v]
    if isinstance(v, (int, np.integer)):
        return [int(v)] if width == 1 else [-1]
    return [int(x) for x in v]


class SparseState:
    """Immutable sparse state: ``layout`` plus ``terms`` (label -> amplitude).

    Iteration order over terms is the sorted label order so traces and
    measurement outcomes are reproducible.
    """

    __slots__ = ("layout", "_terms", "_sorted")

    def __init__(self, layout: RegisterLayout, terms: Mapping[BasisLabel, complex]):
        self.layout = layout
        self._terms = {
            tuple(k): complex(v) for k, v in terms.items() if abs(v) >= PRUNE_TOL
        }
        self._sorted = False

    @classmethod
    def _trusted(cls, layout, terms: dict) -> "SparseState":
        """Wrap an already-clean term dict (used by permutation gates)."""
        obj = cls.__new__(cls)
        obj.layout = layout
        obj._terms = terms
        obj._sorted = False
        return obj

    def _ordered(self) -> dict:
        if not self._sorted:
            self._terms = dict(sorted(self._terms.items()))
            self._sorted = True
        return self._terms

    @property
    def terms(self) -> dict[BasisLabel, complex]:
        return dict(self._ordered())

    def items(self):
        return self._ordered().items()

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._ordered())

    def __getitem__(self, label):
        return self._terms.get(tuple(label), 0j)

    def __eq__(self, other):
        return (
            isinstance(other, SparseState)
            and self.layout == other.layout
            and self._terms == other._terms
        )

    def __repr__(self):
        return f"SparseState({len(self)} terms over {self.layout!r})"

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self._terms.values()))

    def is_normalized(self, tol=NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> "SparseState":
        n = self.norm()
        if n == 0:
            raise PreconditionError("cannot normalize the zero vector")
        return SparseState(self.layout, {k: v / n for k, v in self._terms.items()})

    def approx_equal(self, other: "SparseState", tol=1e-12) -> bool:
        if self.layout != other.layout:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def register_values(self, name: str) -> set[tuple[int, ...]]:
        """Set of values the register takes across all branches."""
        pos = self.layout.positions(name)
        return {tuple(lab[i] for i in pos) for lab in self._terms}

    def probabilities(self) -> dict[BasisLabel, float]:
        return {k: abs(v) ** 2 for k, v in self._terms.items()}

    def dump(self) -> str:
        """One term per line: digits, real part, imaginary part."""
        lines = []
        for lab, amp in self.items():
            digits = " ".join(str(d) for d in lab)
            lines.append(f"{digits} {amp.real:.12g} {amp.imag:.12g}")
        return "\n".join(lines) + ("\n" if lines else "")


def basis_state(layout: RegisterLayout, assignment: Mapping) -> SparseState:
    return SparseState(layout, {layout.label(assignment): 1.0})


def uniform_superpose(state: SparseState, register_name: str) -> SparseState:
    """Replace an all-zero register by the uniform superposition of its values.

    Over Z_2 this is H on every digit of the register applied to |0...0>;
    over Z_d each digit becomes (1/sqrt d) * sum_k |k>.
    """
    layout = state.layout
    reg = layout.register(register_name)
    pos = layout.positions(register_name)
    for lab in state:
        if any(lab[i] != 0 for i in pos):
            raise PreconditionError(
                f"register {register_name!r} must be |0...0> in every term"
            )
    d = reg.spec.d
    scale = d ** (-reg.width / 2)
    lo, hi = pos[0], pos[-1] + 1
    out = {}
    for lab, amp in state.items():
        for digits in itertools.product(range(d), repeat=reg.width):
            out[lab[:lo] + digits + lab[hi:]] = amp * scale
    return SparseState(layout, out)


def measure(state: SparseState, rng_seed=None) -> tuple[BasisLabel, SparseState]:
    """Sample a basis label with probability |amplitude|^2 and collapse."""
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    labels = list(state)
    probs = np.array([abs(state[k]) ** 2 for k in labels])
    probs /= probs.sum()
    idx = rng.choice(len(labels), p=probs)
    lab = labels[idx]
    return lab, SparseState(state.layout, {lab: 1.0})


def sample(state: SparseState, shots: int, rng_seed=None) -> list[BasisLabel]:
    """Draw ``shots`` independent measurement outcomes from the same state."""
    rng = np.random.default_rng(rng_seed)
    labels = list(state)
    probs = np.array([abs(state[k]) ** 2 for k in labels])
    probs /= probs.sum()
    return [labels[i] for i in rng.choice(len(labels), size=shots, p=probs)]


def inner_product(a: SparseState, b: SparseState) -> complex:
    if a.layout != b.layout:
        raise LayoutError("inner product of states with different layouts")
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for lab in small:
        if lab in large._terms:
            total += a[lab].conjugate() * b[lab]
    return total


def superposition_norm_check(a: SparseState, b: SparseState) -> tuple[float, bool]:
    """Norm of (a+b)/sqrt(2) and whether a, b are orthogonal.

    The sum of two unit vectors is itself a unit vector exactly when the
    two are orthogonal; the returned pair lets callers check that.
    """
    if a.layout != b.layout:
        raise LayoutError("states have different layouts")
    keys = set(a) | set(b)
    sq = sum(abs((a[k] + b[k]) / math.sqrt(2)) ** 2 for k in keys)
    return math.sqrt(sq), abs(inner_product(a, b)) < NORM_TOL


def from_vector(layout: RegisterLayout, vec: Sequence[complex]) -> SparseState:
    """Build a state from a dense vector in lexicographic label order."""
    vec = np.asarray(vec)
    if vec.shape != (layout.dimension(),):
        raise LayoutError(f"vector of length {len(vec)} for dimension {layout.dimension()}")
    return SparseState(layout, {lab: v for lab, v in zip(layout.labels(), vec)})


def to_vector(state: SparseState) -> np.ndarray:
    labels = list(state.layout.labels())
    return np.array([state[lab] for lab in labels], dtype=complex)
