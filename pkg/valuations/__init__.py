# The invariant valuations f_T, f_S and the hyperboloid cone-area identity.
