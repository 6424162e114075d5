"""Command-line front end.

    qpf export-gates --field 2 --digits 3 --out gates/
    qpf demo-eq19
    qpf train --arch archs.json --data train.csv --theta 1 --out run/ --verify
    qpf oracle --arch archs.json --data train.csv --out table.csv
    qpf cost --n 3
    qpf verify-axioms --field 7

Exit codes: 0 success (or Found), 2 NotFound, 1 error.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from . import gates as G
from .errors import QPFError
from .field import FieldSpec, verify_field_axioms
from .network import NeuronSpec, NetworkArch, build_neuron, forward, load_architectures
from .oracle import classical_output, dense_simulation_cost, enumerate_performance, human_bytes
from .sal import DEFAULT_BUDGET, SalConfig, TrainingSet, run_sal
from .state import RegisterLayout, SparseState, basis_state, uniform_superpose

EXIT_OK, EXIT_ERROR, EXIT_NOT_FOUND = 0, 1, 2


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_export_gates(args) -> int:
    spec = FieldSpec(args.field)
    out = _out_dir(args)
    layout = RegisterLayout([(f"q{i}", 1, spec) for i in range(args.digits)])
    gates = {"I": G.Identity()}
    if args.digits >= 3:
        gates["S"] = G.SumS(0, 1, 2, spec)
        gates["P"] = G.ProductP(0, 1, 2, spec)
    for name, gate in gates.items():
        U = G.dense_matrix(gate, layout)
        (out / f"{name}.txt").write_text(G.format_matrix(U))
        (out / f"{name}.perm").write_text(G.format_permutation(U))
        ok = G.verify_permutation(gate, layout)
        print(f"{name}: {U.shape[0]}x{U.shape[1]} permutation={'yes' if ok else 'NO'}")
        if not ok:
            return EXIT_ERROR
    return EXIT_OK


def neuron_demo_state(x="01", weights=None) -> tuple[SparseState, SparseState]:
    """Run the two-input Z2 neuron; returns (initial, final) states."""
    z2 = FieldSpec(2)
    circ = build_neuron(NeuronSpec(2, z2))
    assign = {r.name: 0 for r in circ.layout.registers}
    assign.update(x1=int(x[0]), x2=int(x[1]))
    if weights is not None:
        assign.update(w1=int(weights[0]), w2=int(weights[1]))
    state = basis_state(circ.layout, assign)
    if weights is None:
        state = uniform_superpose(uniform_superpose(state, "w1"), "w2")
    return state, forward(circ, state)


def neuron_demo_expected(x="01", weights=None) -> SparseState:
    """Reference final state built from classical arithmetic alone."""
    z2 = FieldSpec(2)
    circ = build_neuron(NeuronSpec(2, z2))
    xs = (int(x[0]), int(x[1]))
    ws_all = [tuple(int(c) for c in weights)] if weights else list(itertools.product(range(2), repeat=2))
    amp = 1 / len(ws_all) ** 0.5
    terms = {}
    for w in ws_all:
        (y,) = classical_output(NetworkArch.neuron(2), z2, w, xs)
        lab = circ.layout.label(dict(x1=xs[0], x2=xs[1], w1=w[0], w2=w[1],
                                     p1=xs[0] * w[0], p2=xs[1] * w[1], y=y))
        terms[lab] = amp
    return SparseState(circ.layout, terms)


def cmd_neuron_demo(args) -> int:
    _, final = neuron_demo_state(args.x, args.weights)
    names = " ".join(r.name for r in final.layout.registers)
    print(f"# {names} re im")
    print(final.dump(), end="")
    ok = final.approx_equal(neuron_demo_expected(args.x, args.weights), tol=1e-12)
    print(f"# terms={len(final)} golden={'match' if ok else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_ERROR


def _load_run(args):
    spec, archs = load_architectures(args.arch)
    if args.field is not None and args.field != spec.p:
        raise ValueError(f"--field {args.field} disagrees with architecture file (p={spec.p})")
    data = TrainingSet.load(args.data, spec)
    return spec, archs, data


def verify_run(result, archs, spec, data, theta) -> list[str]:
    """Cross-check a SAL result against the classical oracle."""
    from .sal import evaluate_classically

    report = enumerate_performance(archs, spec, data)
    problems = []
    winner = report.lexicographic_winner(theta)
    if result.found != (winner is not None):
        problems.append(f"status {result.status} but oracle winner is {winner}")
    if result.found:
        perf = evaluate_classically(archs[result.arch_id], result.weights, data)
        if perf <= theta or perf != result.performance:
            problems.append(f"returned config scores {perf}, register says {result.performance}")
        got = report.digit_string(result.arch_id, result.weights)
        if got != winner:
            problems.append(f"returned {got}, lexicographically smallest is {winner}")
    return problems


def cmd_train(args) -> int:
    spec, archs, data = _load_run(args)
    if args.theta > data.k:
        raise ValueError(f"--theta {args.theta} exceeds dataset size {data.k}")
    config = SalConfig(archs, args.theta, spec, seed=args.seed,
                       max_retries=args.retries, budget=args.budget)
    result = run_sal(config, data)
    out = _out_dir(args)
    (out / "result.json").write_text(result.to_json())
    (out / "trace.txt").write_text("\n".join(result.trace_lines(args.timings)) + "\n")
    print(result.to_json(), end="")
    if args.verify:
        problems = verify_run(result, archs, spec, data, result.theta)
        for p in problems:
            print(f"verify: {p}", file=sys.stderr)
        if problems:
            return EXIT_ERROR
        print("verify: oracle agrees")
    return EXIT_OK if result.found else EXIT_NOT_FOUND


def cmd_oracle(args) -> int:
    spec, archs, data = _load_run(args)
    report = enumerate_performance(archs, spec, data)
    text = report.to_csv()
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    print(f"# max performance {report.max_performance()} of {data.k}", file=sys.stderr)
    if args.theta is not None:
        print(f"# winner at theta={args.theta}: {report.lexicographic_winner(args.theta)}",
              file=sys.stderr)
    return EXIT_OK


def sparse_peak(n_weights: int = 8) -> int:
    """Peak term count of a full SAL run on a Z2 neuron with ``n_weights`` inputs."""
    z2 = FieldSpec(2)
    data = TrainingSet(tuple(((1,) * n_weights, (0,)) for _ in range(2)), z2)
    result = run_sal(SalConfig([NetworkArch.neuron(n_weights)], 0, z2), data)
    return result.telemetry.peak_terms


def cmd_cost(args) -> int:
    dense = dense_simulation_cost(args.n)
    print(f"dense: {human_bytes(dense)} ({dense} bytes) for a {8 * args.n}-qubit operator")
    print(f"sparse peak, Z2 neuron with {args.sparse_weights} superposed weights: "
          f"{sparse_peak(args.sparse_weights)} terms")
    _, final = neuron_demo_state()
    print(f"sparse peak, two-input demo: {len(final)} terms")
    return EXIT_OK


def cmd_verify_axioms(args) -> int:
    report = verify_field_axioms(FieldSpec(args.field))
    for name in report.checked:
        print(f"{name}: ok" if not any(v.startswith(name) for v in report.violations)
              else f"{name}: FAIL")
    return EXIT_OK if report.ok else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpf", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export-gates", help="write dense S and P matrices")
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--digits", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_gates)

    p = sub.add_parser("demo-eq19", help="two-input Z2 neuron on superposed weights")
    p.add_argument("--x", default="01")
    p.add_argument("--weights", default=None, help="fix weights instead of superposing")
    p.set_defaults(func=cmd_neuron_demo)

    for name, func in (("train", cmd_train), ("oracle", cmd_oracle)):
        p = sub.add_parser(name)
        p.add_argument("--arch", required=True)
        p.add_argument("--data", required=True)
        p.add_argument("--field", type=int, default=None)
        p.add_argument("--out")
        p.set_defaults(func=func)
        if name == "train":
            p.add_argument("--theta", type=int, required=True)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
            p.add_argument("--retries", type=int, default=0)
            p.add_argument("--verify", action="store_true")
            p.add_argument("--timings", action="store_true", help="add wall times to the trace")
        else:
            p.add_argument("--theta", type=int, default=None)

    p = sub.add_parser("cost", help="dense memory vs sparse term count")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--sparse-weights", type=int, default=8)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("verify-axioms")
    p.add_argument("--field", type=int, default=2)
    p.set_defaults(func=cmd_verify_axioms)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QPFError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
