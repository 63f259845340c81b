"""
lorval: numerics for Lorentz-invariant valuations.
"""

__version__ = '0.1.0'
