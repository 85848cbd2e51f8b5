"""Transverse confinement: guide modes and open/closed channel kinematics.

Units are reduced throughout (hbar^2 / 2 mu = 1), so an energy is a squared
wavenumber, E = k^2.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import specfun
from .errors import InvalidArgument, NoOpenChannel, ThresholdDegeneracy, UnsupportedGuide


class GuideKind(str, Enum):
    SQUARE_WELL_DISC = "square_well"
    HARMONIC_EQUIVALENT = "harmonic"


class RootMode(str, Enum):
    EXACT = "exact"
    COSINE = "cosine"


@dataclass(frozen=True)
class GuideSpec:
    """Geometry and mode model of the confinement.

    ``transverse_scale`` is the disc radius l_perp for a square-well disc and
    the oscillator length a_perp for the harmonic-equivalent guide.
    """

    kind: GuideKind = GuideKind.SQUARE_WELL_DISC
    transverse_scale: float = 1.0
    root_mode: RootMode = RootMode.EXACT

    def __post_init__(self):
        object.__setattr__(self, "kind", GuideKind(self.kind))
        object.__setattr__(self, "root_mode", RootMode(self.root_mode))
        if not self.transverse_scale > 0:
            raise InvalidArgument(f"transverse_scale must be > 0, got {self.transverse_scale}")
        if self.root_mode is RootMode.COSINE and self.kind is not GuideKind.SQUARE_WELL_DISC:
            raise InvalidArgument("the cosine root approximation only applies to a square-well disc")

    @property
    def is_disc(self):
        return self.kind is GuideKind.SQUARE_WELL_DISC

    def mode_root(self, n):
        """Dimensionless transverse wavenumber q_n * l_perp of mode n (disc only)."""
        if self.root_mode is RootMode.COSINE:
            # zeros of cos(x - pi/4): 3pi/4, 7pi/4, ...
            return (n + 0.75) * math.pi
        return specfun.bessel_j0_root(n + 1)

    def mode_wavenumber(self, n):
        if n < 0:
            raise InvalidArgument(f"mode index must be >= 0, got {n}")
        if self.is_disc:
            return self.mode_root(n) / self.transverse_scale
        # m = 0 radial oscillator levels: q_n^2 = hbar w (2n + 1), hbar w = 2 / a_perp^2
        return math.sqrt(2.0 * (2 * n + 1)) / self.transverse_scale

    def mode_norm(self, n):
        """N_n such that phi_n(0) = N_n / (sqrt(pi) l_perp)."""
        if not self.is_disc:
            return 1.0
        x = self.mode_root(n)
        if self.root_mode is RootMode.COSINE:
            # |J_1| ~ sqrt(2 / (pi x)) at the approximate roots
            return math.sqrt(0.5 * math.pi * x)
        return 1.0 / abs(specfun.bessel_j1(x))

    @property
    def d_perp(self):
        return self.transverse_scale / self.mode_norm(0)

    @property
    def ground_energy(self):
        return self.mode_wavenumber(0) ** 2

    @property
    def gap(self):
        """q_1^2 - q_0^2, the first transverse excitation energy."""
        return self.mode_wavenumber(1) ** 2 - self.mode_wavenumber(0) ** 2


def _frozen(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ChannelSet:
    """Channel kinematics of a guide at total wavenumber k.

    ``q`` and ``N`` cover modes 0..n_E+1+n_closed; ``k_open`` the open
    channels n <= n_E and ``p_closed`` the retained closed ones beyond the
    first closed mode, whose decay rate is ``p_c``.
    """

    spec: GuideSpec
    k: float
    n_E: int
    q: np.ndarray
    k_open: np.ndarray
    p_closed: np.ndarray
    N: np.ndarray
    p_c: float
    gamma: float = field(default=float("nan"))

    @property
    def l_perp(self):
        return self.spec.transverse_scale

    @property
    def d_perp(self):
        return self.spec.d_perp

    @property
    def n_open(self):
        return self.n_E + 1


def _assemble(spec, k, n_E, q, k_open, p_all):
    N = [spec.mode_norm(n) for n in range(len(q))]
    ch = ChannelSet(
        spec=spec,
        k=k,
        n_E=n_E,
        q=_frozen(q),
        k_open=_frozen(k_open),
        p_closed=_frozen(p_all[1:]),
        N=_frozen(N),
        p_c=p_all[0],
    )
    object.__setattr__(ch, "gamma", gamma_factor(ch))
    return ch


def _modes_up_to(spec, k, n_closed):
    """Mode wavenumbers through the first closed mode plus ``n_closed`` more."""
    q = [spec.mode_wavenumber(0)]
    while q[-1] <= k:
        q.append(spec.mode_wavenumber(len(q)))
    n_E = len(q) - 2
    if not spec.is_disc and n_E > 0:
        raise UnsupportedGuide("the harmonic-equivalent guide supports the single-mode regime only")
    for n in range(n_closed):
        q.append(spec.mode_wavenumber(n_E + 2 + n))
    return n_E, q


def build_channels(spec, k, n_closed=0):
    """Channel decomposition of the guide at total wavenumber ``k``."""
    k = float(k)
    q0 = spec.mode_wavenumber(0)
    if not k > q0:
        raise NoOpenChannel(f"k = {k} does not exceed the lowest threshold q_0 = {q0}")
    n_E, q = _modes_up_to(spec, k, n_closed)
    if k in q:
        raise ThresholdDegeneracy(f"k = {k} sits exactly on threshold q_{q.index(k)}")
    k_open = [math.sqrt((k - qn) * (k + qn)) for qn in q[: n_E + 1]]
    p_all = [math.sqrt((qn - k) * (qn + k)) for qn in q[n_E + 1 :]]
    return _assemble(spec, k, n_E, q, k_open, p_all)


def channels_from_kn(spec, n, kn, n_closed=0):
    """Channels at the energy where open channel ``n`` has longitudinal momentum ``kn``.

    All kinematics are taken relative to channel n, so ``kn`` may lie far
    below the float resolution of the total wavenumber near threshold.
    """
    kn = float(kn)
    if not kn > 0:
        raise ThresholdDegeneracy(f"channel {n} needs a positive longitudinal momentum, got {kn}")
    qn = spec.mode_wavenumber(n)
    k = math.sqrt(qn * qn + kn * kn)

    # k_m^2 = kn^2 + q_n^2 - q_m^2, evaluated without forming k^2
    def shift(m):
        qm = spec.mode_wavenumber(m)
        return qm, kn * kn + (qn - qm) * (qn + qm)

    q, sh = [], []
    while not sh or sh[-1] > 0:
        qm, s = shift(len(q))
        q.append(qm)
        sh.append(s)
    if 0.0 in sh:
        raise ThresholdDegeneracy("energy sits exactly on a transverse threshold")
    n_E = len(q) - 2
    if not spec.is_disc and n_E > 0:
        raise UnsupportedGuide("the harmonic-equivalent guide supports the single-mode regime only")
    for _ in range(n_closed):
        qm, s = shift(len(q))
        q.append(qm)
        sh.append(s)
    k_open = [math.sqrt(s) for s in sh[: n_E + 1]]
    p_all = [math.sqrt(-s) for s in sh[n_E + 1 :]]
    return _assemble(spec, k, n_E, q, k_open, p_all)


def channels_from_k0(spec, k0, n_closed=0):
    """Channels at the energy where the ground channel has momentum ``k0``."""
    return channels_from_kn(spec, 0, k0, n_closed=n_closed)


def gamma_factor(ch):
    """gamma = sum_{n <= n_E} 2 N_n^2 / (k k_n l_perp^2)."""
    if np.any(ch.k_open == 0.0):
        raise ThresholdDegeneracy("an open channel has zero longitudinal momentum")
    N_open = ch.N[: ch.n_E + 1]
    return float(np.sum(2.0 * N_open**2 / (ch.k * ch.k_open * ch.l_perp**2)))


def cir_constant(spec):
    """C' = d_perp sqrt(q_1^2 - q_0^2), the guide constant locating the resonance."""
    if spec.kind is GuideKind.HARMONIC_EQUIVALENT:
        return 2.0
    return spec.d_perp * math.sqrt(spec.gap)
