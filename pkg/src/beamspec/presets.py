"""Built-in weights and nonlinearities.

Weights cover the cases the verification battery needs: strictly
positive, sign-changing odd, sign-changing even, and a single crossing.
Nonlinearities come as perturbation terms g(t, s, mu) for the perturbed
problem and asymptotically linear f(s) for the autonomous one; arbitrary
user code is out of scope, but piecewise-linear f tables can be loaded
from CSV.
"""

import numpy as np

from .errors import ValidationError
from .nonlinear import AsymptoticF, PerturbationG

WEIGHTS = {
    "one": lambda t: np.ones_like(np.asarray(t, dtype=float)),
    "sin3pi": lambda t: np.sin(3.0 * np.pi * np.asarray(t, dtype=float)),
    "cos2pi": lambda t: np.cos(2.0 * np.pi * np.asarray(t, dtype=float)),
    "linear_ramp": lambda t: 1.0 - 2.0 * np.asarray(t, dtype=float),
}


def weight(name):
    try:
        return WEIGHTS[name]
    except KeyError:
        raise ValidationError(
            f"unknown weight '{name}'; built-ins: {sorted(WEIGHTS)}") from None


def _as_s(t, s):
    return np.broadcast_arrays(np.asarray(t, dtype=float),
                               np.asarray(s, dtype=float))[1]


def cubic_perturbation():
    """g(t, s, mu) = s^3, the standard odd superlinear perturbation."""
    return PerturbationG(
        evaluate=lambda t, s, mu: _as_s(t, s) ** 3,
        partial=lambda t, s, mu: 3.0 * _as_s(t, s) ** 2,
        name="cubic")


def zero_perturbation():
    """g = 0: the purely linear problem (vertical branches)."""
    return PerturbationG(
        evaluate=lambda t, s, mu: np.zeros_like(_as_s(t, s)),
        partial=lambda t, s, mu: np.zeros_like(_as_s(t, s)),
        name="zero")


def manufactured_perturbation(weight_fn):
    """g chosen so that u*(t) = sin(pi t) solves the perturbed problem
    for every mu: g(t, s, mu) = pi^4 sin(pi t) - mu m(t) s.

    Violates g(t, 0, mu) = 0 by design; it exists to exercise residual
    and Newton machinery, not branch tracing.
    """
    def ev(t, s, mu):
        t = np.asarray(t, dtype=float)
        return np.pi**4 * np.sin(np.pi * t) - mu * weight_fn(t) * np.asarray(s, dtype=float)

    def pd(t, s, mu):
        t = np.asarray(t, dtype=float)
        return -mu * weight_fn(t) * np.ones_like(_as_s(t, s))

    return PerturbationG(evaluate=ev, partial=pd, name="manufactured")


def linear_f():
    """f(s) = s with slopes (1, 1)."""
    return AsymptoticF(f=lambda s: np.asarray(s, dtype=float), f0=1.0, finf=1.0,
                       derivative=lambda s: np.ones_like(np.asarray(s, dtype=float)),
                       name="linear")


def saturating_f(gain=2.0):
    """f(s) = s (gain - (gain-1)/(1+s^2)): slope 1 at zero, gain at infinity."""
    c = gain - 1.0

    def f(s):
        s = np.asarray(s, dtype=float)
        return s * (gain - c / (1.0 + s * s))

    def df(s):
        s = np.asarray(s, dtype=float)
        return gain - c / (1.0 + s * s) + 2.0 * c * s * s / (1.0 + s * s) ** 2

    return AsymptoticF(f=f, f0=1.0, finf=float(gain), derivative=df,
                       name=f"saturating(gain={gain:g})")


def atan_shift_f():
    """f(s) = s + atan(s): slope 2 at zero, 1 at infinity."""
    return AsymptoticF(
        f=lambda s: np.asarray(s, dtype=float) + np.arctan(np.asarray(s, dtype=float)),
        f0=2.0, finf=1.0,
        derivative=lambda s: 1.0 + 1.0 / (1.0 + np.asarray(s, dtype=float) ** 2),
        name="atan_shift")


PERTURBATIONS = {
    "cubic": cubic_perturbation,
    "zero": zero_perturbation,
}

ASYMPTOTIC_FS = {
    "linear": linear_f,
    "saturating": saturating_f,
    "atan_shift": atan_shift_f,
}


def perturbation(name):
    try:
        return PERTURBATIONS[name]()
    except KeyError:
        raise ValidationError(
            f"unknown perturbation '{name}'; built-ins: {sorted(PERTURBATIONS)}") from None


def asymptotic_f(name, **params):
    try:
        factory = ASYMPTOTIC_FS[name]
    except KeyError:
        raise ValidationError(
            f"unknown nonlinearity '{name}'; built-ins: {sorted(ASYMPTOTIC_FS)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise ValidationError(f"bad params for '{name}': {exc}") from None


def table_f(path, f0, finf):
    """Piecewise-linear f from a two-column CSV (s, f(s)).

    The declared slopes f0, finf are the caller's claim; outside the
    tabulated range f extrapolates linearly with slope finf.
    """
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    s_tab, f_tab = data[:, 0], data[:, 1]
    order = np.argsort(s_tab)
    s_tab, f_tab = s_tab[order], f_tab[order]

    def f(s):
        s = np.asarray(s, dtype=float)
        inside = np.interp(s, s_tab, f_tab)
        lo = f_tab[0] + (s - s_tab[0]) * finf
        hi = f_tab[-1] + (s - s_tab[-1]) * finf
        return np.where(s < s_tab[0], lo, np.where(s > s_tab[-1], hi, inside))

    return AsymptoticF(f=f, f0=float(f0), finf=float(finf), name=f"table({path})")
