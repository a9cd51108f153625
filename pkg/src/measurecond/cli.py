"""Command-line front end.

Exit status: 0 when everything checked passes, 1 on a verification failure,
2 on usage or input errors. JSON goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import correspondence, quantum, scenario
from .errors import ContractViolation
from .linalg import CompositeSpace, Projector, StateVector, schmidt_rank, tensor_state
from .verify import VerificationConfig, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("measurecond")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _dump(obj) -> str:
    return json.dumps(obj, allow_nan=False)


def parse_dims(text: str) -> tuple[tuple[int, int], ...]:
    """``"2x2,3x4"`` -> ``((2, 2), (3, 4))``."""
    out = []
    for chunk in text.split(","):
        parts = chunk.strip().lower().split("x")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"bad dims entry {chunk!r}; expected d1xd2")
        out.append((int(parts[0]), int(parts[1])))
    return tuple(out)


def cmd_verify(args) -> int:
    try:
        config = VerificationConfig(
            seed=args.seed, trials=args.trials, dims=parse_dims(args.dims), tolerance=args.tolerance
        )
    except (ContractViolation, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    def emit(result):
        print(_dump(result.to_json()))

    summary = run_verification(config, sink=emit)
    print(_dump(summary.to_json()))
    if not args.json_only:
        print(f"# {summary.trials} trials, {summary.failures} failed (tolerance {config.tolerance:g})")
        for name, value in summary.max_residuals.items():
            print(f"#   {name:<26} max residual {value:.3e}")
        demo = summary.demo
        print(
            f"#   covariance demo: cov(A, A^2) = {demo['quantum_covariance']:.3e}, "
            f"independence deviation {demo['max_deviation']:.3f}"
        )
    return EXIT_OK if summary.passed else EXIT_FAIL


def cmd_scenario(args) -> int:
    try:
        sc = scenario.load(args.path)
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractViolation as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report, passed = scenario.run(sc)
    report["passed"] = passed
    print(_dump(report))
    return EXIT_OK if passed else EXIT_FAIL


def _entangled_demo() -> tuple[dict, list[str], bool]:
    space = CompositeSpace(2, 2)
    e0, e1 = StateVector.basis(2, 0), StateVector.basis(2, 1)
    amp = 1 / math.sqrt(2)
    eta = quantum.build_entangled_state(quantum.EntangledPairSpec(amp, amp, e0, e1), space)
    p = q = Projector.rank1(e0)
    ev = quantum.EventPair(p, q, space)
    rep = correspondence.verify_correspondence(eta, ev)
    given_q = quantum.conditional_probability(eta, ev)
    given_qc = quantum.conditional_probability(eta, ev.with_complements(second=True))
    data = {
        "demo": "entangled",
        **rep.to_dict(),
        "schmidt_rank": schmidt_rank(eta, space),
        "p_given_q": given_q,
        "p_given_qc": given_qc,
    }
    prose = [
        "State (e0⊗e1 + e1⊗e0)/√2 with P = Q = |e0⟩⟨e0|.",
        f"Joint table over (P, P^c) × (Q, Q^c): {rep.induced_table.mass.tolist()} (probabilities ⟨η, P⊗Q η⟩).",
        f"P(P | Q) = P(P,Q)/P(Q) = {given_q:.3g}; P(P | Q^c) = {given_qc:.3g}.",
        "The same numbers come out as ⟨η_Q, P η_Q⟩ in the state updated after seeing Q:",
        f"  largest gap between the two routes = {rep.max_discrepancy:.2e}.",
        f"Schmidt rank {data['schmidt_rank']}: the state is entangled and the table is dependent "
        f"(deviation {rep.independence_deviation:.3g}).",
    ]
    ok = abs(given_q) <= 1e-14 and abs(given_qc - 1) <= 1e-14 and rep.max_discrepancy <= 1e-11
    return data, prose, ok


def _product_demo() -> tuple[dict, list[str], bool]:
    space = CompositeSpace(2, 2)
    u = StateVector(np.array([math.cos(0.3), math.sin(0.3)], dtype=complex))
    v = StateVector(np.array([math.cos(1.1), 1j * math.sin(1.1)], dtype=complex))
    eta = tensor_state(u, v, space)
    p = q = Projector.rank1(StateVector.basis(2, 0))
    ev = quantum.EventPair(p, q, space)
    rep = correspondence.verify_correspondence(eta, ev)
    m_p = quantum.marginal_probability(eta, p, "first", space)
    m_q = quantum.marginal_probability(eta, q, "second", space)
    after_q = rep.quantum_conditionals[("Y", 0, 0)]
    after_qc = rep.quantum_conditionals[("Y", 1, 0)]
    shift = max(abs(after_q - m_p), abs(after_qc - m_p))
    data = {
        "demo": "product",
        **rep.to_dict(),
        "marginal_p": m_p,
        "marginal_q": m_q,
        "p_after_q": after_q,
        "p_after_qc": after_qc,
        "max_marginal_shift": shift,
    }
    prose = [
        "Product state u⊗v with P = Q = |e0⟩⟨e0|.",
        f"P(P) = {m_p:.6f}, P(Q) = {m_q:.6f}, P(P,Q) = {rep.induced_table.mass[0, 0]:.6f} = P(P)·P(Q).",
        f"After observing Q the probability of P is {after_q:.6f}; after Q^c it is {after_qc:.6f}.",
        f"Observation of the second component leaves the first unchanged (shift {shift:.1e}).",
        f"Induced table independent: {rep.independent}.",
    ]
    ok = rep.independent and shift <= 1e-11 and rep.max_discrepancy <= 1e-11
    return data, prose, ok


def _uncorrelated_demo() -> tuple[dict, list[str], bool]:
    demo = correspondence.uncorrelated_dependent_demo()
    data = {"demo": "uncorrelated_dependent", **demo.to_dict()}
    prose = [
        "A = diag(2, -2, 1, -1), f(x) = x², uniform ψ: eigenvalues of opposite sign, equal probability.",
        f"cov(f(A), A) = ⟨ψ, (f(A) − ⟨f(A)⟩)(A − ⟨A⟩) ψ⟩ = {demo.quantum_covariance:.3g}",
        f"  (outcome-table route gives {demo.classical_covariance:.3g}).",
        f"Yet the joint outcome table is not a product: max |p(a,f) − p(a)p(f)| = {demo.max_deviation:.3f}.",
        "Uncorrelated does not imply independent.",
    ]
    ok = abs(demo.quantum_covariance) <= 1e-12 and not demo.independent and abs(demo.max_deviation - 0.125) <= 1e-12
    return data, prose, ok


DEMOS = {
    "entangled": _entangled_demo,
    "product": _product_demo,
    "uncorrelated_dependent": _uncorrelated_demo,
}


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        print(f"unknown demo {args.name!r}; choose from {', '.join(DEMOS)}", file=sys.stderr)
        return EXIT_USAGE
    data, prose, ok = DEMOS[args.name]()
    data["passed"] = ok
    print(_dump(data))
    if not args.json_only:
        for line in prose:
            print(f"# {line}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="measurecond", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="run the seeded randomized suites")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dims", default="2x2,3x3,4x4", help="comma-separated d1xd2 list")
    p.add_argument("--tolerance", type=float, default=1e-11)
    p.add_argument("--json-only", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scenario", help="run a JSON scenario file")
    p.add_argument("path")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("demo", help="run a built-in example")
    p.add_argument("name", help=", ".join(DEMOS))
    p.add_argument("--json-only", action="store_true")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
