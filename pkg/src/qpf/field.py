"""Prime-field arithmetic Z_p.

Every quantum operator in the package is built from the two field
operations defined here. Elements are small immutable values; the gate
layer works on raw ints for speed and uses :class:`FieldSpec` helpers
(``add``/``mul``/``sub`` on ints) directly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DivisionByZero, FieldMismatch, NotPrimeError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field Z_p. ``d`` (the number of elements) equals ``p``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise NotPrimeError(f"field modulus must be prime, got {self.p!r}")

    @property
    def d(self) -> int:
        return self.p

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.p)]

    # int-level arithmetic used by the gate layer
    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def __repr__(self):
        return f"Z{self.p}"


@dataclass(frozen=True, order=True)
class FieldElement:
    value: int
    spec: FieldSpec = field(compare=False)

    def __post_init__(self):
        if not 0 <= self.value < self.spec.p:
            raise ValueError(f"{self.value} is not an element of {self.spec!r}")

    def _check(self, other: "FieldElement"):
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            other_spec = getattr(other, "spec", type(other).__name__)
            raise FieldMismatch(f"cannot combine {self.spec!r} with {other_spec!r}")

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.value == other.value

    def __hash__(self):
        return hash((self.spec.p, self.value))

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        return add(self, neg(other))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.spec.p})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement((a.value + b.value) % a.spec.p, a.spec)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement((a.value * b.value) % a.spec.p, a.spec)


def neg(a: FieldElement) -> FieldElement:
    return FieldElement((-a.value) % a.spec.p, a.spec)


def inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise DivisionByZero(f"0 has no inverse in {a.spec!r}")
    return FieldElement(pow(a.value, -1, a.spec.p), a.spec)


@dataclass
class AxiomReport:
    spec: FieldSpec
    checked: list[str]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_field_axioms(spec: FieldSpec) -> AxiomReport:
    """Exhaustively check the field axioms for ``spec`` (d <= 64)."""
    if spec.d > 64:
        raise ValueError("exhaustive axiom check is limited to d <= 64")
    els = spec.elements()
    zero, one = spec(0), spec(1)
    violations = []
    checked = []

    def check(name, ok, *args):
        if name not in checked:
            checked.append(name)
        if not ok:
            violations.append(f"{name}: {args}")

    for a, b in itertools.product(els, repeat=2):
        check("closure(+)", 0 <= add(a, b).value < spec.p, a, b)
        check("closure(*)", 0 <= mul(a, b).value < spec.p, a, b)
        check("commutativity(+)", add(a, b) == add(b, a), a, b)
        check("commutativity(*)", mul(a, b) == mul(b, a), a, b)
    for a, b, c in itertools.product(els, repeat=3):
        check("associativity(+)", add(add(a, b), c) == add(a, add(b, c)), a, b, c)
        check("associativity(*)", mul(mul(a, b), c) == mul(a, mul(b, c)), a, b, c)
        check("distributivity", mul(a, add(b, c)) == add(mul(a, b), mul(a, c)), a, b, c)
    check("distinct identities", zero != one)
    for a in els:
        check("identity(+)", add(a, zero) == a, a)
        check("identity(*)", mul(a, one) == a, a)
        check("inverse(+)", add(a, neg(a)) == zero, a)
        if a != zero:
            check("inverse(*)", mul(a, inv(a)) == one, a)
    return AxiomReport(spec, checked, violations)
