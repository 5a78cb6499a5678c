"""Initial-value shooting oracles, independent of the grid discretization.

Everything here integrates the beam ODE as a first-order 4-system with
classical fourth-order Runge-Kutta at a fixed step (<= 1e-4) and never
touches the finite-difference operators, so it can serve as an
independent cross-check for them.

For the linear pencil u'''' = mu m(t) u the two IVP columns with
u(0) = u''(0) = 0 and (u', u''')(0) in {(1,0), (0,1)} span all admissible
solutions; mu is an eigenvalue exactly when the boundary determinant

    d(mu) = u_a(1) u_b''(1) - u_b(1) u_a''(1)

vanishes.  Roots of d are found by bisection on a sign-changing bracket.
"""

import numpy as np

from .errors import NoConvergence, NoSignChange
from .grid import SampledFn

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

DEFAULT_STEPS = 10000  # step 1e-4 over [0, 1]


def _weight_on_half_grid(m, n_steps):
    """Weight values at t_j = j/(2 n_steps), j = 0..2n (nodes and midpoints)."""
    tt = np.linspace(0.0, 1.0, 2 * n_steps + 1)
    if callable(m):
        return np.asarray(m(tt), dtype=float)
    if isinstance(m, SampledFn):
        from scipy.interpolate import CubicSpline
        return CubicSpline(m.grid.nodes, m.values)(tt)
    raise TypeError("weight must be a callable or a SampledFn")


@njit(cache=True)
def _boundary_determinant(mu, m_half):
    n = (len(m_half) - 1) // 2
    h = 1.0 / n
    ya1, ya2, ya3, ya4 = 0.0, 1.0, 0.0, 0.0
    yb1, yb2, yb3, yb4 = 0.0, 0.0, 0.0, 1.0
    for j in range(n):
        m0 = m_half[2 * j]
        mh = m_half[2 * j + 1]
        m1 = m_half[2 * j + 2]

        k11, k12, k13, k14 = ya2, ya3, ya4, mu * m0 * ya1
        k21 = ya2 + 0.5 * h * k12
        k22 = ya3 + 0.5 * h * k13
        k23 = ya4 + 0.5 * h * k14
        k24 = mu * mh * (ya1 + 0.5 * h * k11)
        k31 = ya2 + 0.5 * h * k22
        k32 = ya3 + 0.5 * h * k23
        k33 = ya4 + 0.5 * h * k24
        k34 = mu * mh * (ya1 + 0.5 * h * k21)
        k41 = ya2 + h * k32
        k42 = ya3 + h * k33
        k43 = ya4 + h * k34
        k44 = mu * m1 * (ya1 + h * k31)
        ya1 += h * (k11 + 2.0 * k21 + 2.0 * k31 + k41) / 6.0
        ya2 += h * (k12 + 2.0 * k22 + 2.0 * k32 + k42) / 6.0
        ya3 += h * (k13 + 2.0 * k23 + 2.0 * k33 + k43) / 6.0
        ya4 += h * (k14 + 2.0 * k24 + 2.0 * k34 + k44) / 6.0

        k11, k12, k13, k14 = yb2, yb3, yb4, mu * m0 * yb1
        k21 = yb2 + 0.5 * h * k12
        k22 = yb3 + 0.5 * h * k13
        k23 = yb4 + 0.5 * h * k14
        k24 = mu * mh * (yb1 + 0.5 * h * k11)
        k31 = yb2 + 0.5 * h * k22
        k32 = yb3 + 0.5 * h * k23
        k33 = yb4 + 0.5 * h * k24
        k34 = mu * mh * (yb1 + 0.5 * h * k21)
        k41 = yb2 + h * k32
        k42 = yb3 + h * k33
        k43 = yb4 + h * k34
        k44 = mu * m1 * (yb1 + h * k31)
        yb1 += h * (k11 + 2.0 * k21 + 2.0 * k31 + k41) / 6.0
        yb2 += h * (k12 + 2.0 * k22 + 2.0 * k32 + k42) / 6.0
        yb3 += h * (k13 + 2.0 * k23 + 2.0 * k33 + k43) / 6.0
        yb4 += h * (k14 + 2.0 * k24 + 2.0 * k34 + k44) / 6.0

        # rescaling by positive factors guards against overflow without
        # touching the sign of the determinant
        sa = abs(ya1) + abs(ya2) + abs(ya3) + abs(ya4)
        if sa > 1e120:
            ya1 /= sa; ya2 /= sa; ya3 /= sa; ya4 /= sa
        sb = abs(yb1) + abs(yb2) + abs(yb3) + abs(yb4)
        if sb > 1e120:
            yb1 /= sb; yb2 /= sb; yb3 /= sb; yb4 /= sb
    return ya1 * yb3 - yb1 * ya3


def boundary_determinant(mu, m, n_steps=DEFAULT_STEPS):
    """d(mu) for the weight m (callable or SampledFn)."""
    return float(_boundary_determinant(float(mu), _weight_on_half_grid(m, n_steps)))


def shoot_eigenvalue(m, mu_bracket, n_steps=DEFAULT_STEPS, rtol=1e-10):
    """Eigenvalue of u'''' = mu m u inside the bracket, by RK4 shooting.

    The bracket endpoints must give opposite signs of the boundary
    determinant; bisection shrinks it to a relative width of rtol.
    """
    lo, hi = float(mu_bracket[0]), float(mu_bracket[1])
    if lo > hi:
        lo, hi = hi, lo
    m_half = _weight_on_half_grid(m, n_steps)
    dlo = _boundary_determinant(lo, m_half)
    dhi = _boundary_determinant(hi, m_half)
    if dlo == 0.0:
        return lo
    if dhi == 0.0:
        return hi
    if dlo * dhi > 0.0:
        raise NoSignChange(
            f"d({lo}) = {dlo:.3e} and d({hi}) = {dhi:.3e} have the same sign")
    while hi - lo > rtol * (1.0 + 0.5 * (abs(lo) + abs(hi))):
        mid = 0.5 * (lo + hi)
        dm = _boundary_determinant(mid, m_half)
        if dm == 0.0:
            return mid
        if dlo * dm < 0.0:
            hi = mid
        else:
            lo, dlo = mid, dm
    return 0.5 * (lo + hi)


def _integrate_nonlinear(a, b, gamma, m_half, f):
    """RK4 for u'''' = gamma m(t) f(u) from u(0)=u''(0)=0, (u',u''')(0)=(a,b).

    Returns (trajectory of u at the integration nodes, u(1), u''(1)).
    """
    n = (len(m_half) - 1) // 2
    h = 1.0 / n
    y1, y2, y3, y4 = 0.0, a, 0.0, b
    traj = np.empty(n + 1)
    traj[0] = 0.0
    for j in range(n):
        m0 = m_half[2 * j]
        mh = m_half[2 * j + 1]
        m1 = m_half[2 * j + 2]
        k11, k12, k13, k14 = y2, y3, y4, gamma * m0 * f(y1)
        k21 = y2 + 0.5 * h * k12
        k22 = y3 + 0.5 * h * k13
        k23 = y4 + 0.5 * h * k14
        k24 = gamma * mh * f(y1 + 0.5 * h * k11)
        k31 = y2 + 0.5 * h * k22
        k32 = y3 + 0.5 * h * k23
        k33 = y4 + 0.5 * h * k24
        k34 = gamma * mh * f(y1 + 0.5 * h * k21)
        k41 = y2 + h * k32
        k42 = y3 + h * k33
        k43 = y4 + h * k34
        k44 = gamma * m1 * f(y1 + h * k31)
        y1 += h * (k11 + 2.0 * k21 + 2.0 * k31 + k41) / 6.0
        y2 += h * (k12 + 2.0 * k22 + 2.0 * k32 + k42) / 6.0
        y3 += h * (k13 + 2.0 * k23 + 2.0 * k33 + k43) / 6.0
        y4 += h * (k14 + 2.0 * k24 + 2.0 * k34 + k44) / 6.0
        traj[j + 1] = y1
    return traj, y1, y3


def shoot_nodal_solution(gamma, m, f, slope0, jerk0, grid, max_iter=30,
                         tol=1e-10):
    """Solve u'''' = gamma m(t) f(u) with the four boundary conditions.

    2-by-2 Newton on the terminal map (u'(0), u'''(0)) -> (u(1), u''(1)),
    seeded with the supplied initial slopes, with a finite-difference
    Jacobian.  The integration step divides the grid spacing so the
    trajectory can be read off exactly at the grid nodes.  Returns the
    solution as a SampledFn.
    """
    per_cell = int(np.ceil(1.0 / (1e-4 * (grid.n_interior + 1))))
    n_steps = per_cell * (grid.n_interior + 1)
    m_half = _weight_on_half_grid(m, n_steps)
    a, b = float(slope0), float(jerk0)
    scale = max(1.0, abs(a), abs(b))
    for _ in range(max_iter):
        traj, r1, r2 = _integrate_nonlinear(a, b, gamma, m_half, f)
        if max(abs(r1), abs(r2)) <= tol * scale:
            return SampledFn(grid, traj[::per_cell].copy())
        da = 1e-7 * (1.0 + abs(a))
        db = 1e-7 * (1.0 + abs(b))
        _, r1a, r2a = _integrate_nonlinear(a + da, b, gamma, m_half, f)
        _, r1b, r2b = _integrate_nonlinear(a, b + db, gamma, m_half, f)
        j11, j21 = (r1a - r1) / da, (r2a - r2) / da
        j12, j22 = (r1b - r1) / db, (r2b - r2) / db
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            raise NoConvergence("singular shooting Jacobian")
        a -= (j22 * r1 - j12 * r2) / det
        b -= (-j21 * r1 + j11 * r2) / det
    raise NoConvergence(f"shooting Newton did not meet {tol} in {max_iter} iterations")
