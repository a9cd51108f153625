"""Numerical thresholds used across the package."""

# |‖v‖² − 1| allowed for a state vector, and total-mass slack for tables.
TAU_NORM = 1e-10
# Max-norm residual for Hermiticity / idempotency / orthogonality checks.
TAU_STRUCT = 1e-10
# Singular values above this count toward the Schmidt rank.
TAU_RANK = 1e-8
# Probabilities at or below this are null events; conditioning on them raises.
EPS_ZERO = 1e-12
# Max cell deviation |p(i,j) − p(i)p(j)| still counted as independent.
TAU_INDEP = 1e-10
# Input tables within this of unit mass are renormalized, beyond it rejected.
TABLE_RENORM_SLACK = 1e-6
# Phase-insensitive state equality: |⟨u,v⟩| ≥ 1 − RAY_TOL.
RAY_TOL = 1e-10
