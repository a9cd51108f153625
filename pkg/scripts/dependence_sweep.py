"""Independence deviation of the induced table across the entangled-pair family.

For η = aψ⊗φ + bφ⊗ψ and P = Q = |ψ⟩⟨ψ| the deviation is |a|²|b|²: zero only at the
product endpoints, largest (1/4) at equal weights.
"""

import argparse

import numpy as np

from measurecond import correspondence, quantum
from measurecond.linalg import CompositeSpace, Projector, StateVector


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--steps", type=int, default=9)
    args = ap.parse_args()

    space = CompositeSpace(args.dim, args.dim)
    psi, phi = StateVector.basis(args.dim, 0), StateVector.basis(args.dim, 1)
    p = Projector.rank1(psi)
    print(f"{'|a|^2':>8} {'deviation':>12} {'|a|^2|b|^2':>12} {'P(P|Q)':>8} {'P(P|Q^c)':>9}")
    for w in np.linspace(0.05, 0.95, args.steps):
        spec = quantum.EntangledPairSpec(np.sqrt(w), np.sqrt(1 - w), psi, phi)
        eta = quantum.build_entangled_state(spec, space)
        rep = correspondence.verify_correspondence(eta, quantum.EventPair(p, p, space))
        cond = rep.quantum_conditionals
        print(
            f"{w:8.3f} {rep.independence_deviation:12.6f} {w * (1 - w):12.6f} "
            f"{cond[('Y', 0, 0)]:8.3f} {cond[('Y', 1, 0)]:9.3f}"
        )


if __name__ == "__main__":
    main()
