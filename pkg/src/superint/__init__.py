"""Spectra of quantum superintegrable potentials from their cubic algebras.

Modules
-------
algebra_core         cubic algebra, structure functions, matrix representations
potential_catalog    the catalogued potentials and their closed-form families
spectrum_solver      unitary finite-dimensional representations -> spectra
schrodinger_oracle   finite-difference eigenvalues used as an independent check
susy_factorization   partner Hamiltonians, raising, ladder operators
pt_complexification  the x -> x - i eps regularized Hamiltonian
"""
from .errors import SuperintError
from .spectra import Level, Spectrum, SpectrumEntry

__version__ = "0.1.0"

__all__ = ["SuperintError", "Level", "Spectrum", "SpectrumEntry", "__version__"]
