"""Discrete operators for the simply supported beam problem.

The second-difference operator A encodes -u'' with u(0) = u(1) = 0 on
interior nodes.  The fourth-order stiffness operator is its square
K = A o A, which imposes u''(0) = u''(1) = 0 exactly: the intermediate
field w = -u'' is itself a Dirichlet solution, so its endpoint values
vanish by construction and no ghost points are needed.

Solving -u'' = e is written Lam(e) (one tridiagonal elimination, O(n));
Lam2 = Lam o Lam inverts the fourth-order operator.  All operators are
immutable and every operation is pure.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, solve_banded

from .errors import GridMismatch, OnEigenvalue
from .grid import Grid, SampledFn, from_interior, same_grid

# Relative pivot size below which an LU factorization is treated as singular.
PIVOT_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class SecondDiffOperator:
    """(1/h^2) tridiag(-1, 2, -1) on interior values: -u'' with Dirichlet ends."""

    grid: Grid
    _band: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, h = self.grid.n_interior, self.grid.h
        ab = np.zeros((3, n))
        ab[0, 1:] = -1.0 / h**2
        ab[1, :] = 2.0 / h**2
        ab[2, :-1] = -1.0 / h**2
        object.__setattr__(self, "_band", ab)

    def apply(self, x):
        """Second difference of an interior vector, Dirichlet zeros outside."""
        h = self.grid.h
        out = np.empty_like(x)
        out[0] = (2.0 * x[0] - x[1]) / h**2
        out[-1] = (2.0 * x[-1] - x[-2]) / h**2
        out[1:-1] = (2.0 * x[1:-1] - x[:-2] - x[2:]) / h**2
        return out

    def solve(self, rhs):
        """Tridiagonal elimination for A x = rhs (rhs may be a matrix of columns)."""
        return solve_banded((1, 1), self._band, rhs)

    def eigenvalue(self, k):
        """k-th exact eigenvalue (2/h^2)(1 - cos(k pi h))."""
        h = self.grid.h
        return 2.0 * (1.0 - np.cos(k * np.pi * h)) / h**2


@dataclass(frozen=True, eq=False)
class StiffnessOperator:
    """Fourth-order operator K = A o A for u'''' with all four boundary conditions."""

    grid: Grid
    _a: SecondDiffOperator = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_a", SecondDiffOperator(self.grid))

    def apply(self, x):
        # two-stage application: each stage cancels only O(h^2), which keeps
        # the float noise far below a direct 5-point h^-4 stencil
        return self._a.apply(self._a.apply(x))

    def solve(self, rhs):
        return self._a.solve(self._a.solve(rhs))

    def eigenvalue(self, k):
        return self._a.eigenvalue(k) ** 2


@dataclass(frozen=True, eq=False)
class MassOperator:
    """Pointwise multiplication by the weight at interior nodes."""

    grid: Grid
    weight: SampledFn

    def __post_init__(self):
        if not same_grid(self.grid, self.weight.grid):
            raise GridMismatch("weight sampled on a different grid")

    def apply(self, x):
        return self.weight.interior * x


def lambda_solve(e):
    """Unique solution u of -u'' = e with u(0) = u(1) = 0.

    Endpoint values are exactly zero; the interior values come from one
    tridiagonal elimination.
    """
    a = SecondDiffOperator(e.grid)
    return from_interior(e.grid, a.solve(e.interior))


def lambda2(e):
    """Lam applied twice: solves u'''' = e with all four boundary conditions."""
    return lambda_solve(lambda_solve(e))


def t_mu(u, mu, m):
    """mu * Lam2(m * u), the compact fixed-point operator of the eigenproblem."""
    if not same_grid(u.grid, m.grid):
        raise GridMismatch("u and m sampled on different grids")
    return mu * lambda2(SampledFn(u.grid, m.values * u.values))


def inverse_mass_matrix(grid, m):
    """Dense matrix of K^-1 M on interior nodes, via two banded solve passes."""
    a = SecondDiffOperator(grid)
    return a.solve(a.solve(np.diag(m.interior)))


def det_sign_psi(mu, m, eigenvalues=None):
    """Sign of det(I - mu K^-1 M), the discrete degree surrogate for I - T_mu.

    Computed by dense LU with partial pivoting.  When the known pencil
    eigenvalues are supplied, mu must keep a relative distance of 1e-8 from
    each; independently, a pivot smaller than PIVOT_TOL times the matrix
    magnitude raises OnEigenvalue rather than returning a garbage sign.
    """
    if eigenvalues is not None:
        for ev in eigenvalues:
            if abs(mu - ev) <= 1e-8 * abs(mu):
                raise OnEigenvalue(f"mu={mu} is within 1e-8 of eigenvalue {ev}")
    n = m.grid.n_interior
    c = np.eye(n) - mu * inverse_mass_matrix(m.grid, m)
    scale = np.max(np.abs(c))
    lu, piv = lu_factor(c)
    diag = np.diag(lu)
    if np.min(np.abs(diag)) < PIVOT_TOL * scale:
        raise OnEigenvalue(f"LU pivot underflow at mu={mu}: shift is numerically singular")
    sign = 1 if np.count_nonzero(piv != np.arange(n)) % 2 == 0 else -1
    sign *= int(np.prod(np.sign(diag)))
    return sign
