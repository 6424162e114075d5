"""Classical brute-force reference for every quantum-path result.

Nothing in here touches the gate machinery: outputs are computed with
plain nested loops over Z_p so that agreement with the simulator means
something.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetError
from .field import FieldSpec

ORACLE_LIMIT = 2 ** 20


def classical_output(arch, spec: FieldSpec, weights: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    """Evaluate a feed-forward network on a basis input.

    ``weights`` are consumed layer by layer in row-major order; extra
    trailing weights are ignored.
    """
    p = spec.p
    vec = [int(v) % p for v in x[:arch.layers[0].cols]]
    off = 0
    for layer in arch.layers:
        out = []
        for i in range(layer.rows):
            acc = 0
            for j in range(layer.cols):
                acc = (acc + weights[off + i * layer.cols + j] * vec[j]) % p
            out.append(acc)
        off += layer.rows * layer.cols
        vec = out
    return tuple(vec)


def performance(arch, spec, weights, patterns) -> int:
    return sum(
        1 for x, d in patterns if classical_output(arch, spec, weights, x) == tuple(d)
    )


@dataclass
class OracleReport:
    """Performance of every (arch_id, weights) pair on a training set."""

    table: dict
    k: int
    selector_width: int
    weight_width: int

    def max_performance(self) -> int:
        return max(self.table.values())

    def qualifying(self, theta: int) -> list[tuple[int, tuple[int, ...]]]:
        return [key for key, perf in self.table.items() if perf > theta]

    def best(self, theta: int = None) -> list[tuple[int, tuple[int, ...]]]:
        """Configurations with maximal performance (and > theta if given)."""
        top = self.max_performance()
        if theta is not None and top <= theta:
            return []
        return [key for key, perf in self.table.items() if perf == top]

    def digit_string(self, arch_id: int, weights: Sequence[int]) -> tuple[int, ...]:
        """Selector bits (big-endian) followed by the weight register,
        unused trailing weight digits padded with zero."""
        sel = tuple((arch_id >> (self.selector_width - 1 - k)) & 1
                    for k in range(self.selector_width))
        w = tuple(weights) + (0,) * (self.weight_width - len(weights))
        return sel + w

    def lexicographic_winner(self, theta: int):
        """Smallest qualifying digit string, or None when nothing exceeds theta."""
        cands = [self.digit_string(a, w) for a, w in self.qualifying(theta)]
        return min(cands) if cands else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["arch_id", "weights", "performance"])
        sep = "" if all(v < 10 for _, ws in self.table for v in ws) else " "
        for (a, ws), perf in sorted(self.table.items()):
            w.writerow([a, sep.join(map(str, ws)), perf])
        return buf.getvalue()


def enumerate_performance(archs, spec: FieldSpec, training_set) -> OracleReport:
    patterns = list(getattr(training_set, "patterns", training_set))
    total = sum(spec.p ** a.n_weights for a in archs)
    if total > ORACLE_LIMIT:
        raise BudgetError(f"{total} configurations exceed oracle limit {ORACLE_LIMIT}")
    table = {}
    for i, arch in enumerate(archs):
        for ws in itertools.product(range(spec.p), repeat=arch.n_weights):
            table[(i, ws)] = performance(arch, spec, ws, patterns)
    m = len(archs)
    sel_w = math.ceil(math.log2(m)) if m > 1 else 0
    return OracleReport(table, len(patterns), sel_w, max(a.n_weights for a in archs))


def dense_simulation_cost(n_inputs: int) -> int:
    """Bytes for a dense 4-byte-float operator on 8n qubits: 4 * (2^(8n))^2."""
    if n_inputs < 1:
        raise ValueError("n must be >= 1")
    return 4 * (2 ** (8 * n_inputs)) ** 2


def human_bytes(n: int) -> str:
    """Binary-prefixed size, e.g. 2**50 -> '1024 TB'."""
    units = ["B", "KB", "MB", "GB", "TB"]
    i = 0
    while n >= 1024 and i < len(units) - 1 and n % 1024 == 0:
        n //= 1024
        i += 1
    return f"{n} {units[i]}"
