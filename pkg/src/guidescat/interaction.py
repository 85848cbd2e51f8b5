"""Free-space phase shifts of the central potential.

Models return k cot(delta_l(k)). A partial wave that does not scatter at all
returns the ``NON_INTERACTING`` marker instead of an infinity so the solver
can drop it exactly.
"""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import spherical_in

from . import specfun
from .errors import AccuracyError, DomainError, ExtrapolationError, InvalidArgument, NoLimitError


class _NonInteracting:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NON_INTERACTING"

    def __reduce__(self):
        return (_NonInteracting, ())


NON_INTERACTING = _NonInteracting()


def _check_k(k):
    if not k > 0:
        raise DomainError(f"wavenumber must be > 0, got {k}")


@dataclass(frozen=True)
class ZeroRange:
    """Contact interaction with scattering length ``a``; s-wave only."""

    a: float

    range_R_V = 0.0

    def k_cot_delta(self, l, k):
        _check_k(k)
        if l > 0 or self.a == 0:
            return NON_INTERACTING
        return -1.0 / self.a

    def scattering_length(self):
        return self.a


@dataclass(frozen=True)
class HardSphere:
    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise InvalidArgument(f"hard-sphere radius must be > 0, got {self.R}")

    @property
    def range_R_V(self):
        return self.R

    def k_cot_delta(self, l, k):
        # tan delta_l = j_l(kR) / n_l(kR)
        _check_k(k)
        x = k * self.R
        return k * specfun.spherical_neumann_n(l, x) / specfun.spherical_bessel_j(l, x)

    def scattering_length(self):
        return self.R


@dataclass(frozen=True)
class SquareWellPotential:
    """Potential v(r) = -depth for r < R (attractive for depth > 0), in reduced units."""

    depth: float
    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise InvalidArgument(f"well radius must be > 0, got {self.R}")

    @property
    def range_R_V(self):
        return self.R

    def potential(self, r):
        r = np.asarray(r, dtype=float)
        # half value on the edge keeps Numerov symmetric across the jump
        return np.where(r < self.R, -self.depth, np.where(r == self.R, -0.5 * self.depth, 0.0))

    def _inner_log_derivative(self, l, k):
        """K j_l'(KR) / j_l(KR) with K^2 = k^2 + depth (continued to imaginary K)."""
        K2 = k * k + self.depth
        R = self.R
        if K2 > 0:
            K = math.sqrt(K2)
            x = K * R
            jl = specfun.spherical_bessel_j(l, x)
            # j_l' = j_{l-1} - (l+1)/x j_l, with j_{-1}' handled through j_1 for l = 0
            if l == 0:
                djl = -specfun.spherical_bessel_j(1, x)
            else:
                djl = specfun.spherical_bessel_j(l - 1, x) - (l + 1) / x * jl
            return K * djl / jl
        if K2 == 0:
            # regular solution r^l
            return l / R
        kap = math.sqrt(-K2)
        x = kap * R
        il = spherical_in(l, x)
        dil = spherical_in(l, x, derivative=True)
        return kap * dil / il

    def k_cot_delta(self, l, k):
        _check_k(k)
        if self.depth == 0:
            return NON_INTERACTING
        x = k * self.R
        beta = self._inner_log_derivative(l, k)
        jl = specfun.spherical_bessel_j(l, x)
        nl = specfun.spherical_neumann_n(l, x)
        if l == 0:
            djl = -specfun.spherical_bessel_j(1, x)
            dnl = -specfun.spherical_neumann_n(1, x)
        else:
            djl = specfun.spherical_bessel_j(l - 1, x) - (l + 1) / x * jl
            dnl = specfun.spherical_neumann_n(l - 1, x) - (l + 1) / x * nl
        # tan delta = (k j' - beta j) / (k n' - beta n)
        num = k * djl - beta * jl
        den = k * dnl - beta * nl
        return k * den / num

    def scattering_length(self):
        if self.depth == 0:
            return 0.0
        if self.depth > 0:
            K = math.sqrt(self.depth)
            c = math.cos(K * self.R)
            if abs(c) < 1e-14:
                raise NoLimitError("zero-energy resonance: the scattering length diverges")
            return self.R - math.tan(K * self.R) / K
        kap = math.sqrt(-self.depth)
        return self.R - math.tanh(kap * self.R) / kap


class Tabulated:
    """k cot(delta_l) sampled on a grid, interpolated by a monotone cubic in k.

    Partial waves absent from the table are treated as non-interacting.
    """

    def __init__(self, rows, range_R_V=float("nan")):
        by_l = {}
        for l, k, kcot in rows:
            if int(l) != l or l < 0:
                raise InvalidArgument(f"bad partial wave {l!r} in table")
            by_l.setdefault(int(l), []).append((float(k), float(kcot)))
        if not by_l:
            raise InvalidArgument("empty phase-shift table")
        self._grid = {}
        self._interp = {}
        for l, pts in sorted(by_l.items()):
            pts.sort()
            ks = np.array([p[0] for p in pts])
            vals = np.array([p[1] for p in pts])
            if len(ks) < 2:
                raise InvalidArgument(f"l={l}: at least two grid points are needed")
            if np.any(np.diff(ks) <= 0):
                raise InvalidArgument(f"l={l}: k grid must be strictly monotone")
            if ks[0] <= 0:
                raise InvalidArgument(f"l={l}: k grid must be positive")
            self._grid[l] = (ks, vals)
            self._interp[l] = PchipInterpolator(ks, vals, extrapolate=False)
        self.range_R_V = range_R_V

    @classmethod
    def from_file(cls, path, range_R_V=float("nan")):
        """Load a comma-separated table with header ``l,k,kcotdelta``."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            if header != ["l", "k", "kcotdelta"]:
                raise InvalidArgument(f"{path}: expected header 'l,k,kcotdelta', got {','.join(header)!r}")
            rows = []
            for lineno, rec in enumerate(reader, start=2):
                if not rec or not "".join(rec).strip():
                    continue
                try:
                    l, k, v = (x.strip() for x in rec)
                    rows.append((int(l), float(k), float(v)))
                except ValueError as exc:
                    raise InvalidArgument(f"{path}:{lineno}: {exc}") from None
        return cls(rows, range_R_V=range_R_V)

    @property
    def partial_waves(self):
        return tuple(self._grid)

    def k_cot_delta(self, l, k):
        _check_k(k)
        if l not in self._interp:
            return NON_INTERACTING
        ks, _ = self._grid[l]
        if not ks[0] <= k <= ks[-1]:
            raise ExtrapolationError(f"k = {k} outside the tabulated range [{ks[0]}, {ks[-1]}] for l={l}")
        return float(self._interp[l](k))

    def scattering_length(self, rtol=1e-3):
        # effective-range fit k cot delta = -1/a + r k^2/2 on the lowest grid points
        if 0 not in self._grid:
            return 0.0
        ks, vals = self._grid[0]
        if len(ks) < 3:
            raise NoLimitError("need at least three s-wave points to extrapolate to k = 0")
        lin = np.polyfit(ks[:2] ** 2, vals[:2], 1)[-1]
        quad = np.polyfit(ks[:3] ** 2, vals[:3], 2)[-1]
        if abs(lin - quad) > rtol * max(abs(quad), 1e-300) or quad == 0:
            raise NoLimitError("k cot delta_0 does not settle towards k = 0 on the tabulated grid")
        return -1.0 / quad

    def __repr__(self):
        return f"Tabulated(l={list(self._grid)})"


def k_cot_delta(model, l, k):
    """k cot(delta_l(k)) of ``model``, or ``NON_INTERACTING``."""
    if int(l) != l or l < 0:
        raise InvalidArgument(f"partial wave must be a non-negative integer, got {l!r}")
    return model.k_cot_delta(int(l), float(k))


def scattering_length(model):
    """a = -lim_{k -> 0} tan(delta_0) / k."""
    return model.scattering_length()


def phase_shift(model, l, k):
    """delta_l in (-pi/2, pi/2]."""
    kc = k_cot_delta(model, l, k)
    if kc is NON_INTERACTING:
        return 0.0
    d = math.atan2(k, kc)
    return d - math.pi if d > 0.5 * math.pi else d


def _numerov_radial(v, l, k, r_match, r_core, n):
    """Integrate u'' = [l(l+1)/r^2 + v(r) - k^2] u on a uniform grid.

    ``n`` steps reach ``r_match``; the grid continues to a second match radius.
    Returns (r1, u1, r2, u2).
    """
    h = (r_match - r_core) / n
    extra = max(1, int(round(min(0.5 * math.pi / k, r_match - r_core) / h)))
    r = r_core + h * np.arange(n + extra + 1)
    with np.errstate(divide="ignore"):
        cent = np.where(r > 0, l * (l + 1) / np.where(r > 0, r, 1.0) ** 2, 0.0)
    vv = np.asarray(v(r), dtype=float)
    if vv.shape != r.shape:
        vv = np.array([float(v(x)) for x in r])
    f = (cent + vv - k * k).tolist()
    c = h * h / 12.0
    u_prev, u_cur = 0.0, h ** (l + 1) if r_core == 0 else h
    # w = (1 - h^2 f / 12) u; at r = 0 the product f u has a finite limit
    if r_core == 0 and l == 1:
        fu0 = 2.0 * u_cur / (h * h)
    elif r_core == 0:
        fu0 = 0.0
    else:
        fu0 = f[0] * u_prev
    w_prev = u_prev - c * fu0
    w_cur = (1.0 - c * f[1]) * u_cur
    fu_cur = f[1] * u_cur
    h2 = h * h
    us = [u_prev, u_cur]
    for i in range(1, len(f) - 1):
        w_next = 2.0 * w_cur - w_prev + h2 * fu_cur
        u_next = w_next / (1.0 - c * f[i + 1])
        w_prev, w_cur = w_cur, w_next
        fu_cur = f[i + 1] * u_next
        us.append(u_next)
    return r[n], us[n], r[-1], us[-1]


def numerov_phase_shift(v, l, k, r_match, r_core=0.0, n_steps=None, tol=1e-9, max_halvings=10):
    """delta_l from direct integration of the radial equation.

    The regular solution (or the one vanishing on a hard core at ``r_core``)
    is matched to cos(d) j_l(kr) - sin(d) n_l(kr) at two radii beyond
    ``r_match``; the step is halved until successive Richardson-extrapolated
    values agree to ``tol``.

    Parameters
    ----------
    v : callable
        Reduced potential 2 mu V(r) / hbar^2, preferably vectorised.
        It must vanish beyond ``r_match``. Put any jump of v on a grid node
        (a dyadic fraction of ``r_match - r_core``).
    l : int
    k : float
    r_match : float
    r_core : float, optional
        Hard-core radius where u(r_core) = 0.

    Returns
    -------
    float
        delta_l in (-pi/2, pi/2].
    """
    _check_k(k)
    if not r_match > r_core >= 0:
        raise InvalidArgument("need r_match > r_core >= 0")
    if n_steps is None:
        scale = min(r_match - r_core, 1.0 / k)
        n_steps = max(64, int(2 ** math.ceil(math.log2(200.0 * (r_match - r_core) / scale))))

    def one(n):
        r1, u1, r2, u2 = _numerov_radial(v, l, k, r_match, r_core, n)
        F1 = r1 * specfun.spherical_bessel_j(l, k * r1)
        F2 = r2 * specfun.spherical_bessel_j(l, k * r2)
        G1 = r1 * specfun.spherical_neumann_n(l, k * r1)
        G2 = r2 * specfun.spherical_neumann_n(l, k * r2)
        # u_i = A (cos d F_i - sin d G_i)
        num = u1 * F2 - u2 * F1
        den = u1 * G2 - u2 * G1
        return math.atan(num / den) if den != 0 else 0.5 * math.pi

    def wrap(d):
        return (d + 0.5 * math.pi) % math.pi - 0.5 * math.pi

    # a jump in v makes the error O(h^2); remove that term by Richardson
    prev = one(n_steps)
    est_prev = None
    diff = math.inf
    for _ in range(max_halvings):
        n_steps *= 2
        cur = one(n_steps)
        est = cur + wrap(cur - prev) / 3.0
        if est_prev is not None:
            diff = abs(wrap(est - est_prev))
            if diff < tol:
                d = wrap(est)
                return d if d > -0.5 * math.pi else d + math.pi
        prev, est_prev = cur, est
    raise AccuracyError(f"Numerov phase shift did not converge to {tol} (last change {diff:.3e})")
