"""Special functions on real arguments.

Spherical Bessel/Neumann functions, the cylindrical J_0/J_1 pair and the
zeros of J_0, and Legendre polynomials at real and purely imaginary
arguments. Everything here is scalar and pure.
"""

import math
from functools import lru_cache

import scipy.special as sc

from .errors import DomainError, InvalidArgument, ParityViolation

L_CAP = 32

# Below this argument the power series for j_l is used outright.
_SERIES_X = 1.0
_RESCALE = 1e250


def _check_order(l, cap=None):
    cap = L_CAP if cap is None else cap
    if int(l) != l or l < 0:
        raise InvalidArgument(f"order must be a non-negative integer, got {l!r}")
    if l > cap:
        raise InvalidArgument(f"order l={l} exceeds the cap {cap}")
    return int(l)


def _j_series(l, x):
    # x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    lead = 1.0
    for m in range(1, l + 1):
        lead *= x / (2 * m + 1)
    term = 1.0
    total = 1.0
    h = -0.5 * x * x
    for k in range(1, 60):
        term *= h / (k * (2 * l + 2 * k + 1))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return lead * total


def _j_miller(l, x):
    """Downward recurrence normalised against j_0 or j_1 (whichever is larger)."""
    start = l + 16 + int(math.sqrt(40.0 * (l + x + 1)))
    j_next, j_cur = 0.0, 1e-300
    at_l = 0.0
    for n in range(start, 0, -1):
        j_prev = (2 * n + 1) / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if n - 1 == l:
            at_l = j_cur
        if abs(j_cur) > _RESCALE:
            j_cur /= _RESCALE
            j_next /= _RESCALE
            at_l /= _RESCALE
    # j_cur now holds the unnormalised j_0, j_next the unnormalised j_1
    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    if abs(j0) >= abs(j1):
        return at_l * (j0 / j_cur)
    return at_l * (j1 / j_next)


def spherical_bessel_j(l, x):
    """Spherical Bessel function of the first kind j_l(x) for x >= 0.

    Uses the power series for small x, Miller's downward recurrence when
    x < l and upward recurrence otherwise.
    """
    l = _check_order(l)
    x = float(x)
    if x < 0.0:
        raise DomainError(f"spherical_bessel_j needs x >= 0, got {x}")
    if x == 0.0:
        return 1.0 if l == 0 else 0.0
    if x <= _SERIES_X:
        return _j_series(l, x)
    if l == 0:
        return math.sin(x) / x
    if x < l:
        return _j_miller(l, x)
    s, c = math.sin(x), math.cos(x)
    j_prev = s / x
    j_cur = s / (x * x) - c / x
    for n in range(1, l):
        j_prev, j_cur = j_cur, (2 * n + 1) / x * j_cur - j_prev
    return j_cur


def spherical_neumann_n(l, x):
    """Spherical Neumann function n_l(x) with n_0(x) = -cos(x)/x, for x > 0."""
    l = _check_order(l)
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"spherical_neumann_n is singular at x <= 0, got {x}")
    s, c = math.sin(x), math.cos(x)
    n_prev = -c / x
    if l == 0:
        return n_prev
    n_cur = -c / (x * x) - s / x
    for n in range(1, l):
        n_prev, n_cur = n_cur, (2 * n + 1) / x * n_cur - n_prev
    return n_cur


def bessel_j0(x):
    return float(sc.j0(x))


def bessel_j1(x):
    return float(sc.j1(x))


@lru_cache(maxsize=256)
def bessel_j0_root(n):
    """n-th positive zero of J_0 (n >= 1), McMahon guess polished by Newton."""
    if int(n) != n or n < 1:
        raise InvalidArgument(f"root index must be a positive integer, got {n!r}")
    beta = (n - 0.25) * math.pi
    b8 = 8.0 * beta
    x = beta + 1.0 / b8 - 124.0 / (3.0 * b8**3) + 120928.0 / (15.0 * b8**5)
    for _ in range(50):
        # J_0' = -J_1
        step = bessel_j0(x) / bessel_j1(x)
        x += step
        if abs(step) <= 1e-16 * x:
            break
    return x


def legendre_p(l, x):
    """Legendre polynomial P_l(x) at real x via the three-term recurrence."""
    l = _check_order(l)
    p_prev, p_cur = 1.0, float(x)
    if l == 0:
        return 1.0
    for n in range(1, l):
        p_prev, p_cur = p_cur, ((2 * n + 1) * x * p_cur - n * p_prev) / (n + 1)
    return p_cur


def legendre_imag_real_part(l, u):
    """Real q_l(u) with P_l(iu) = i^l q_l(u).

    Satisfies (l+1) q_{l+1} = (2l+1) u q_l + l q_{l-1}, q_0 = 1, q_1 = u.
    """
    l = _check_order(l)
    q_prev, q_cur = 1.0, float(u)
    if l == 0:
        return 1.0
    for n in range(1, l):
        q_prev, q_cur = q_cur, ((2 * n + 1) * u * q_cur + n * q_prev) / (n + 1)
    return q_cur


def legendre_pair_imag(l, lp, u):
    """Real product P_l(iu) P_lp(iu) for a parity-allowed pair (l + lp even)."""
    if (l + lp) % 2:
        raise ParityViolation(f"P_{l}(iu) P_{lp}(iu) is not real: l + l' = {l + lp} is odd")
    if u < 0:
        raise DomainError(f"u must be >= 0, got {u}")
    sign = -1.0 if ((l + lp) // 2) % 2 else 1.0
    return sign * legendre_imag_real_part(l, u) * legendre_imag_real_part(lp, u)
