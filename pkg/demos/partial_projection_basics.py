"""Tour of the standardized partial projection.

A two-outcome generalized qubit measurement with fidelities (p, q) acts
through the diagonal operator pair

    D0 = diag(sqrt(p), sqrt(1 - q)),   D1 = diag(sqrt(1 - p), sqrt(q)).

This script builds the pair for a few parameter choices, checks the
completeness relation, and shows how the post-measurement state moves as
the measurement strength |p + q - 1| sweeps from 0 (no measurement) to 1
(projective).
"""

import numpy as np

from genmeas import (
    PartialProjParams,
    apply_outcome,
    dops,
    outcome_probabilities,
    pure_state,
    strength,
)

plus = pure_state(np.array([1.0, 1.0]) / np.sqrt(2))

print("partial projections for a few (p, q)")
print("=" * 60)
for p, q in [(1.0, 1.0), (0.8, 0.6), (0.5, 0.5), (1.0, 0.3)]:
    params = PartialProjParams(p, q)
    d0, d1 = dops(params)
    total = d0.conj().T @ d0 + d1.conj().T @ d1
    print(f"(p, q) = ({p}, {q})   strength = {strength(params):.2f}")
    print(f"  D0 diagonal: {np.diag(d0).real.round(5)}")
    print(f"  D1 diagonal: {np.diag(d1).real.round(5)}")
    print(f"  completeness deviation: {np.linalg.norm(total - np.eye(2)):.1e}")
    p0, p1 = outcome_probabilities(params, plus)
    print(f"  P(0), P(1) on |+>: {p0:.4f}, {p1:.4f}")
    print()

print("state collapse under repeated outcome-0 results, (p, q) = (0.8, 0.6)")
print("=" * 60)
params = PartialProjParams(0.8, 0.6)
rho = plus
for step in range(6):
    print(f"  after {step} measurements: rho_00 = {rho[0, 0].real:.5f}, "
          f"purity = {np.trace(rho @ rho).real:.6f}")
    rho = apply_outcome(params, 0, rho)
print("  repeated weak 0-results converge to full collapse onto |0>")
