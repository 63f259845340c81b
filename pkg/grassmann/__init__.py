# Invariant Klain-section weights on Gr(n, k) and light-cone angles.
