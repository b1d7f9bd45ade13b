"""fuplab: numerics for fractal uncertainty bounds and chaotic torus quantizations."""

__version__ = "0.1.0"
