# Zonal cosine and Radon transforms.
