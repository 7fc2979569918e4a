"""GMRES stagnation diagnostics.

Instrumented GMRES with per-iteration harmonic Ritz pairs, the
residual-gap identity and the four-way stagnation equivalence, plus the
problem generators used to exercise them.
"""

try:
    # Installed layout: the extension lives inside the package.
    from ._staglab import *  # noqa: F401,F403
    from ._staglab import __version__  # noqa: F401
except ImportError:
    # Build-tree layout: the extension sits on sys.path by itself.
    from _staglab import *  # noqa: F401,F403
    from _staglab import __version__  # noqa: F401

__all__ = [
    "back_substitute",
    "cyclic_shift_instance",
    "harmonic_ritz",
    "paper_example",
    "planted_singular_hessenberg",
    "qr_hessenberg_ls",
    "random_instance",
    "read_matrix_market",
    "residual_polynomial_roots",
    "smallest_singular_triplet",
    "solve",
    "solve_pencil",
    "step_one_stagnation",
    "verify",
    "DimensionError",
    "StepIndexError",
    "SingularTriangularError",
    "DegeneratePencilError",
    "InfinitePairError",
    "GeneratorError",
    "MatrixMarketParseError",
]
