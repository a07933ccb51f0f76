"""harperlab: numerical workbench for quasi-periodic Jacobi operators with
nearest and next-nearest neighbor hopping (the extended Harper family).

Submodules:
    contfrac    continued fractions, convergents, special frequencies
    esproducts  trigonometric sums S(q, z), circle sups, ergodic bounds
    model       coupling-space regions, duality, zeros of c, I(lambda)
    cocycles    transfer/Jacobi cocycles, Lyapunov profiles, rotation number
    spectra     truncations, Sturm eigenvalues, density of states
    fourier     determinant sequences, boundary Fourier coefficients
    verify      the acceptance criteria suite
"""

__version__ = "0.1.0"

from . import contfrac, esproducts, model, cocycles, spectra, fourier  # noqa: F401,E402
