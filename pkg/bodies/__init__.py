# Convex bodies: polytopes, rotation bodies, stretched double cones.
