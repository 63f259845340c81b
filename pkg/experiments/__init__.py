# Divergence experiments on stretched double cones.
