"""Error types raised across the package.

Every domain error derives from :class:`SuperintError`, so callers (and the
CLI, which maps them to exit code 1) can catch a single base class.
"""


class SuperintError(Exception):
    """Base class for all domain errors."""


# algebra_core
class RealizationUndefined(SuperintError):
    """The deformed-oscillator realization does not exist (e.g. delta(E) <= 0)."""


class RhoPole(SuperintError):
    """The Case 1 gauge function rho(N) has a pole inside the working range."""


class RecurrenceSingular(SuperintError):
    """The leading factor of the structure-function recurrence vanished."""


class NonUnitary(SuperintError):
    """Phi(x) <= 0 somewhere in 1..p, so no unitary representation exists."""


# spectrum_solver
class RootFindFailure(SuperintError):
    """Polynomial root finding returned non-finite values."""


class UnknownPotential(SuperintError):
    """The requested potential id is not in the catalog."""


# potential_catalog
class SingularPoint(SuperintError):
    """A potential was evaluated on one of its poles."""


class NoFiniteCubicAlgebra(SuperintError):
    """The potential's integrals do not close in a finite cubic algebra."""


class NotCatalogued(SuperintError):
    """The requested data is outside what the catalog carries."""


# schrodinger_oracle
class GridNotConverged(SuperintError):
    """Grid refinement did not reach the requested eigenvalue tolerance."""


class SingularPotential(SuperintError):
    """The potential has poles on the real line, so the grid problem is ill posed."""


class GridTooLarge(SuperintError):
    """A 2D grid request exceeds the configured memory cap."""


# susy_factorization
class RaisingUndefined(SuperintError):
    """Raising needs a strictly positive partner energy."""


class NotSusyCatalogued(SuperintError):
    """No SUSY spectrum is catalogued for this potential."""


class BasisTooSmall(SuperintError):
    """The projected basis is too small for the requested commutator checks."""


# pt_complexification
class SelfOrthogonal(SuperintError):
    """The PT pseudo-norm vanishes (exceptional point or broken PT symmetry)."""
