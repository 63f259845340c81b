# Minkowski form on R^n: evaluation, boosts, orthonormalization, orbit labels.
