"""Closed-form s-wave layer: resonance, effective 1D coupling, confined bound state.

Lengths are reduced by d_perp where noted (x = a / d_perp, s = kappa d_perp).
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import InvalidArgument, NotBracketed, PoleEncountered, ThresholdDegeneracy, UnsupportedGuide
from .guide import cir_constant
from .interaction import NON_INTERACTING, k_cot_delta


def single_mode_f0(a, ch, k_0=None):
    """Leading s-wave amplitude of the single-mode regime.

    f_0 = -1 / (1 + i [-(d^2 / 2a)(1 - a p_c)] k_0), written multiplied through
    by ``a`` so that a -> 0 is regular (f_0 -> 0).
    """
    if ch.n_E != 0:
        raise InvalidArgument(f"single-mode amplitude needs n_E = 0, got n_E = {ch.n_E}")
    k_0 = ch.k_open[0] if k_0 is None else k_0
    d = ch.d_perp
    return complex(-a / (a - 0.5j * d * d * (1.0 - a * ch.p_c) * k_0))


def g1d(a, spec):
    """Effective 1D contact coupling, reduced units: g = (4a/d^2) / (1 - C' a/d)."""
    d = spec.d_perp
    denom = 1.0 - cir_constant(spec) * a / d
    if denom == 0.0:
        raise PoleEncountered(f"g_1D diverges at a / d_perp = {a / d}")
    return 4.0 * a / (d * d) / denom


@dataclass(frozen=True)
class CIRReport:
    grid: np.ndarray
    g1d: np.ndarray
    resonance_location: float
    c_prime: float


def find_cir(spec, scan=(0.0, 1.0), points=101):
    """Locate the pole of g_1D in a/d_perp by root finding on 1 - C' x.

    ``g1d`` on the report is tabulated in units of 1/d_perp (i.e. g_1D d_perp);
    an exact pole on the grid is reported as NaN.
    """
    lo, hi = map(float, scan)
    if not hi > lo:
        raise InvalidArgument(f"scan range must be increasing, got {scan}")
    c = cir_constant(spec)

    def den(x):
        return 1.0 - c * x

    if den(lo) * den(hi) > 0:
        raise NotBracketed(f"[{lo}, {hi}] does not bracket the resonance at a/d_perp = {1 / c}")
    x0 = brentq(den, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    grid = np.linspace(lo, hi, points)
    vals = np.array([4.0 * x / den(x) if den(x) != 0 else np.nan for x in grid])
    return CIRReport(grid=grid, g1d=vals, resonance_location=x0, c_prime=c)


@dataclass(frozen=True)
class BoundStateResult:
    kappa: float
    E_abs: float
    binding: float
    converged: bool
    iterations: int
    eps0: float = float("nan")

    @property
    def binding_over_eps0(self):
        return self.binding / self.eps0


def _p_c_of_kappa(spec, kappa):
    # first closed channel at the bound-state energy E = q_0^2 - kappa^2
    return math.sqrt(spec.gap + kappa * kappa)


def pole_condition(a, spec, kappa):
    """2a + d^2 kappa (1 - a p_c(kappa)); zero at a bound state with k_0 = i kappa."""
    d = spec.d_perp
    return 2.0 * a + d * d * kappa * (1.0 - a * _p_c_of_kappa(spec, kappa))


def a_over_d_for_kappa(spec, kappa):
    """Inverse of the pole condition: the a/d_perp that binds at decay constant ``kappa``."""
    d = spec.d_perp
    s = kappa * d
    P = d * _p_c_of_kappa(spec, kappa)
    denom = s * P - 2.0
    if denom == 0.0:
        raise PoleEncountered("this kappa is the |a| -> infinity limit")
    return s / denom


def bound_state(a, spec, kappa_max=None, rtol=1e-12, max_expand=60):
    """Confinement-modified s-wave bound state of a contact interaction.

    Solves the pole condition in kappa on (0, kappa_max). The default ceiling
    is max(10 q_1, 10/|a|), doubled until the bracket closes.

    Returns
    -------
    BoundStateResult or None
        None when no bound state exists in the bracket.
    """
    if a == 0:
        raise InvalidArgument("bound state needs a nonzero scattering length")
    q1 = spec.mode_wavenumber(1)
    eps0 = spec.ground_energy
    if kappa_max is None:
        kappa_max = max(10.0 * q1, 10.0 / abs(a))

    def F(kap):
        return pole_condition(a, spec, kap)

    f_lo = F(0.0)
    for _ in range(max_expand):
        if f_lo * F(kappa_max) < 0:
            break
        kappa_max *= 2.0
    else:
        return None

    kap, info = brentq(F, 0.0, kappa_max, xtol=1e-300, rtol=4 * np.finfo(float).eps, full_output=True)
    iterations = info.iterations
    # Newton polish
    d = spec.d_perp
    step = 0.0
    for _ in range(3):
        pc = _p_c_of_kappa(spec, kap)
        dF = d * d * (1.0 - a * pc) - d * d * a * kap * kap / pc
        if dF == 0:
            break
        step = F(kap) / dF
        trial = kap - step
        if not 0 < trial < kappa_max or abs(F(trial)) > abs(F(kap)):
            step = 0.0
            break
        kap = trial
        iterations += 1
        if abs(step) <= rtol * kap:
            break
    converged = bool(info.converged and abs(step) <= rtol * kap)
    return BoundStateResult(kappa=kap, E_abs=eps0 - kap * kap, binding=kap * kap,
                            converged=converged, iterations=iterations, eps0=eps0)


class Landmarks(NamedTuple):
    cir: float
    zero_energy: float
    coincidence: float


def bound_state_landmarks(spec):
    """Three a/d_perp markers along the a > 0 bound-state branch.

    cir: the resonance 1/C'; zero_energy: the bound state reaches E = 0
    (kappa = q_0); coincidence: E + (eps_1 - eps_0) = eps_0
    (kappa = sqrt(q_1^2 - q_0^2)).
    """
    if not spec.is_disc:
        raise UnsupportedGuide("landmarks are defined for the square-well disc")
    return Landmarks(
        cir=1.0 / cir_constant(spec),
        zero_energy=a_over_d_for_kappa(spec, spec.mode_wavenumber(0)),
        coincidence=a_over_d_for_kappa(spec, math.sqrt(spec.gap)),
    )


def excited_channel_f(ch, model, inc, n):
    """s-wave amplitude of open channel ``n`` for a general incident state.

    f_n = -(sum_m b_m N_m / N_n) / (1 + sigma_n + i [-(l^2 / 2 N_n^2)(-k cot d_0 - p_c)] k_n)
    with sigma_n = sum_{m != n} N_m^2 k_n / (N_n^2 k_m). For n = 0 the length
    l/N_0 is d_perp.
    """
    inc.check(ch)
    if not 0 <= n <= ch.n_E:
        raise InvalidArgument(f"channel {n} is not open (n_E = {ch.n_E})")
    if np.any(ch.k_open == 0):
        raise ThresholdDegeneracy("an open channel has zero longitudinal momentum")
    kc = k_cot_delta(model, 0, ch.k)
    if kc is NON_INTERACTING:
        return 0j
    N, kk, b = ch.N, ch.k_open, inc.array
    sigma = sum(N[m] ** 2 * kk[n] / (N[n] ** 2 * kk[m]) for m in range(ch.n_E + 1) if m != n)
    dn = ch.l_perp / N[n]
    num = sum(b[m] * N[m] for m in range(ch.n_E + 1)) / N[n]
    return complex(-num / (1.0 + sigma + 1j * (-0.5 * dn * dn * (-kc - ch.p_c)) * kk[n]))


def olshanii_constant(s_max=10**6, tail_correction=True):
    """lim_{s->inf} (int_0^s ds'/sqrt(s') - sum_{s'=1}^s 1/sqrt(s')) from a partial sum.

    With ``tail_correction`` the leading Euler-Maclaurin remainder
    1/(2 sqrt(s)) - s^{-3/2}/24 is added back.
    """
    n = np.arange(1, int(s_max) + 1, dtype=float)
    partial = 2.0 * math.sqrt(s_max) - math.fsum(1.0 / np.sqrt(n))
    if tail_correction:
        partial += 0.5 / math.sqrt(s_max) - s_max**-1.5 / 24.0
    return partial


def continuum_constant():
    """Continuum replacement of the same limit: int_0^1 ds'/sqrt(s') = 2."""
    val, _ = quad(lambda s: s**-0.5, 0.0, 1.0, epsabs=1e-14, epsrel=1e-14)
    return val
