"""Numerical tolerances shared by every module.

Three tiers: exact construction of representation matrices, verification of
derived identities, and iterative solver output.
"""

CONSTRUCTION_TOL = 1e-12
VERIFY_TOL = 1e-10
SOLVER_TOL = 1e-9

# Hermiticity accepted on input to the eigen kernel.
HERMITIAN_TOL = 1e-10

# Positive semi-definiteness threshold for moment / Schrodinger matrices.
PSD_TOL = 1e-9

DEFAULT_SEED = 42
