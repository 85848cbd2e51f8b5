"""Partial-wave T-matrix of a central scatterer inside the guide.

The amplitudes T_l solve

    (i gamma k - k cot delta_l) T_l = alpha_l + sum_{l'[l]} (2l'+1) P_ll' T_l'

where l'[l] runs over partial waves of the same parity as l. Even and odd
waves are therefore two independent linear systems. The effective 1D
amplitudes of the open channels follow from T_l by re-expanding the
outgoing guide modes in partial waves.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import InvalidArgument, OutsideGuide, PoleEncountered, UnsupportedGuide
from .interaction import NON_INTERACTING, k_cot_delta

DEFAULT_LMAX = 8
UNITARITY_TOL = 1e-8
# condition number beyond which a parity block counts as singular
_COND_LIMIT = 1e14


@dataclass(frozen=True)
class IncidentState:
    """Amplitudes b_n of the incoming guided waves, n = 0..n_E."""

    b: tuple

    def __post_init__(self):
        b = tuple(complex(x) for x in self.b)
        if not b:
            raise InvalidArgument("incident state needs at least one amplitude")
        if all(x == 0 for x in b):
            raise InvalidArgument("incident amplitudes are all zero")
        object.__setattr__(self, "b", b)

    @classmethod
    def single(cls, n, n_E):
        """Unit flux in channel ``n`` only."""
        if not 0 <= n <= n_E:
            raise InvalidArgument(f"channel {n} is not open (n_E = {n_E})")
        return cls(tuple(1.0 if m == n else 0.0 for m in range(n_E + 1)))

    @property
    def array(self):
        return np.array(self.b, dtype=complex)

    def check(self, ch):
        if len(self.b) != ch.n_E + 1:
            raise InvalidArgument(f"incident state has {len(self.b)} amplitudes but n_E + 1 = {ch.n_E + 1}")


@dataclass(frozen=True)
class TMatrixSolution:
    L_max: int
    T: np.ndarray
    alpha: np.ndarray
    gamma_l: np.ndarray
    parity_blocks: dict
    k_cot_delta: tuple = field(repr=False)

    @property
    def interacting(self):
        return tuple(l for l, v in enumerate(self.k_cot_delta) if v is not NON_INTERACTING)


@dataclass(frozen=True)
class AmplitudeSet:
    f_plus: np.ndarray
    f_minus: np.ndarray
    f_g: np.ndarray
    f_u: np.ndarray
    conservation_residual: float
    delta_g: float = None
    delta_u: float = None
    c_l_prime: np.ndarray = field(default=None, repr=False)


def mode_alpha(ch, L_max):
    """alpha_nl = N_n P_l(k_n / k) / (sqrt(pi) l_perp) for open channels, shape (n_E+1, L_max+1)."""
    if not ch.spec.is_disc:
        raise UnsupportedGuide("partial-wave coefficients are only available for disc modes")
    out = np.empty((ch.n_E + 1, L_max + 1))
    pref = 1.0 / (math.sqrt(math.pi) * ch.l_perp)
    for n in range(ch.n_E + 1):
        c = ch.k_open[n] / ch.k
        for l in range(L_max + 1):
            out[n, l] = pref * ch.N[n] * specfun.legendre_p(l, c)
    return out


def alpha_coefficients(ch, inc, L_max):
    """alpha_l = sum_n b_n alpha_nl."""
    inc.check(ch)
    return inc.array @ mode_alpha(ch, L_max)


def coupling_P(ch, l, lp):
    """P_ll' = k * integral_0^{p_c/k} P_l(iu) P_l'(iu) du by exact Gauss-Legendre quadrature."""
    upper = ch.p_c / ch.k
    nodes, weights = np.polynomial.legendre.leggauss((l + lp + 1) // 2 + 1)
    u = 0.5 * upper * (nodes + 1.0)
    vals = [specfun.legendre_pair_imag(l, lp, ui) for ui in u]
    return float(ch.k * 0.5 * upper * np.dot(weights, vals))


def coupling_matrix(ch, L_max):
    """Full (L_max+1)^2 matrix of P_ll', zero where l + l' is odd."""
    P = np.zeros((L_max + 1, L_max + 1))
    for l in range(L_max + 1):
        for lp in range(l % 2, l + 1, 2):
            P[l, lp] = P[lp, l] = coupling_P(ch, l, lp)
    return P


def solve_T(ch, model, inc, L_max=DEFAULT_LMAX):
    """Solve the parity-blocked linear systems for T_0..T_{L_max}."""
    if int(L_max) != L_max or L_max < 0:
        raise InvalidArgument(f"L_max must be a non-negative integer, got {L_max!r}")
    L_max = int(L_max)
    alpha = alpha_coefficients(ch, inc, L_max)
    P = coupling_matrix(ch, L_max)
    kcot = tuple(k_cot_delta(model, l, ch.k) for l in range(L_max + 1))
    igk = 1j * ch.gamma * ch.k

    T = np.zeros(L_max + 1, dtype=complex)
    blocks = {}
    for name, parity in (("even", 0), ("odd", 1)):
        ls = [l for l in range(parity, L_max + 1, 2) if kcot[l] is not NON_INTERACTING]
        blocks[name] = tuple(ls)
        if not ls:
            continue
        idx = np.array(ls)
        M = -P[np.ix_(idx, idx)] * (2 * idx + 1)[None, :]
        M = M.astype(complex)
        M[np.diag_indices_from(M)] += igk - np.array([kcot[l] for l in ls])
        if not np.all(np.isfinite(M)):
            raise PoleEncountered(f"{name}-l block is not finite", block=name, ls=ls)
        # row equilibration: weak partial waves have |k cot delta| >> 1
        scale = np.abs(M).max(axis=1)[:, None]
        if np.any(scale == 0) or np.linalg.cond(M / np.where(scale == 0, 1.0, scale)) > _COND_LIMIT:
            raise PoleEncountered(f"{name}-l block is singular", block=name, ls=ls)
        Ms = M / scale
        T[idx] = np.linalg.solve(Ms, alpha[idx] / scale[:, 0])

    gamma_l = np.zeros(L_max + 1, dtype=complex)
    weighted = (2 * np.arange(L_max + 1) + 1) * T
    for l in range(L_max + 1):
        same = slice(l % 2, L_max + 1, 2)
        gamma_l[l] = np.dot(P[l, same], weighted[same])
    for arr in (T, alpha, gamma_l):
        arr.flags.writeable = False
    return TMatrixSolution(L_max=L_max, T=T, alpha=alpha, gamma_l=gamma_l,
                           parity_blocks=blocks, k_cot_delta=kcot)


def _residual(k_open, b, f_g, f_u):
    terms = (np.abs(f_g) ** 2 + (np.conj(b) * f_g).real + np.abs(f_u) ** 2 + (np.conj(b) * f_u).real) * k_open
    return float(abs(np.sum(terms)))


def conservation_residual(ch, amp, inc):
    """|sum_n (|f_ng|^2 + Re b_n* f_ng + |f_nu|^2 + Re b_n* f_nu) k_n|; zero for a flux-conserving solution."""
    return _residual(ch.k_open, inc.array, amp.f_g, amp.f_u)


def one_d_phase_shift(f):
    """Real 1D phase shift with f = -1 / (1 + i cot delta), i.e. 1 + 2f = exp(2 i delta)."""
    d = 0.5 * float(np.angle(1.0 + 2.0 * f))
    return d + math.pi if d <= -0.5 * math.pi else d


def _c_l_prime(ch, sol):
    out = np.empty(sol.L_max + 1, dtype=complex)
    for l, kc in enumerate(sol.k_cot_delta):
        d = 0.0 if kc is NON_INTERACTING else math.atan2(ch.k, kc)
        out[l] = (2 * l + 1) * (sol.alpha[l] + sol.gamma_l[l]) * 1j**l / (math.cos(d) - 1j * ch.gamma * math.sin(d))
    return out


def amplitudes(ch, sol, inc, unitarity_tol=UNITARITY_TOL):
    """Effective 1D amplitudes f_n^+- of every open channel from a T-matrix solution."""
    inc.check(ch)
    a_nl = mode_alpha(ch, sol.L_max)
    ls = np.arange(sol.L_max + 1)
    terms = (2 * ls + 1) * 4.0 * math.pi * a_nl * sol.T[None, :] / (2j * ch.k_open[:, None])
    f_g = terms[:, 0::2].sum(axis=1)
    f_u = terms[:, 1::2].sum(axis=1)
    residual = _residual(ch.k_open, inc.array, f_g, f_u)

    delta_g = delta_u = None
    if ch.n_E == 0:
        if abs(abs(1 + 2 * f_g[0]) - 1) < unitarity_tol:
            delta_g = one_d_phase_shift(f_g[0])
        if abs(abs(1 + 2 * f_u[0]) - 1) < unitarity_tol:
            delta_u = one_d_phase_shift(f_u[0])
    return AmplitudeSet(
        f_plus=f_g + f_u,
        f_minus=f_g - f_u,
        f_g=f_g,
        f_u=f_u,
        conservation_residual=residual,
        delta_g=delta_g,
        delta_u=delta_u,
        c_l_prime=_c_l_prime(ch, sol),
    )


def solve(ch, model, inc=None, L_max=DEFAULT_LMAX):
    """solve_T followed by amplitudes; ``inc`` defaults to unit flux in channel 0."""
    if inc is None:
        inc = IncidentState.single(0, ch.n_E)
    sol = solve_T(ch, model, inc, L_max)
    return sol, amplitudes(ch, sol, inc)


def guide_mode(ch, n, rho):
    """Disc mode phi_n(rho) = N_n J_0(q_n rho) / (sqrt(pi) l_perp)."""
    return ch.N[n] * specfun.bessel_j0(ch.q[n] * rho) / (math.sqrt(math.pi) * ch.l_perp)


def evaluate_asymptotic_psi(ch, amp, inc, z, rho):
    """Far-field wavefunction sum_n [b_n e^{i k_n z} + f_n^{sign z} e^{i k_n |z|}] phi_n(rho)."""
    if not ch.spec.is_disc:
        raise UnsupportedGuide("transverse modes are only available for the disc")
    if not 0 <= rho < ch.l_perp:
        raise OutsideGuide(f"rho = {rho} is not inside the guide of radius {ch.l_perp}")
    if abs(z) < 5.0 / ch.p_c:
        warnings.warn(f"|z| = {abs(z)} is not far outside the evanescent range 1/p_c = {1 / ch.p_c}",
                      stacklevel=2)
    f = amp.f_plus if z >= 0 else amp.f_minus
    b = inc.array
    psi = 0j
    for n in range(ch.n_E + 1):
        kn = ch.k_open[n]
        psi += (b[n] * np.exp(1j * kn * z) + f[n] * np.exp(1j * kn * abs(z))) * guide_mode(ch, n, rho)
    return complex(psi)
