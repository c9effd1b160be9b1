"""Amplitude integrals over products of Slater orbitals.

The object of study is

    S1(eta1, eta2, x2, k) = 2 pi int_0^1 e^{-i (k.x2) tau} e^{-x2 L}/L dtau,
    L = sqrt((1 - tau)(k^2 tau + eta2^2) + eta1^2 tau),

the general-k overlap of two Slater orbitals with one shifted centre and a
plane wave.  This module provides its exact closed forms at k = 0, the
adaptive-quadrature oracle for general k, the Macdonald-series terms in the
variable s = sqrt((eta1^2-eta2^2) tau + eta2^2) together with their erf and
incomplete-gamma closed forms, the Kummer-series specialisation at
eta1 = eta2, one angular integral with a split real/imaginary branch, and
the double-series reconstructions of the k = 0 closed forms.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, RangeError, TruncationError
from .quadrature import QuadratureResult, integrate_finite
from .specfun import (
    bessel_k_half,
    binomial,
    binomial_general,
    double_factorial,
    factorial,
    kummer_1f1,
    upper_incomplete_gamma,
)
from .theorems import (
    SeriesEvaluation,
    TruncationPolicy,
    accumulate_series,
    default_policy,
)

__all__ = [
    "SlaterPair",
    "SeriesIndexBounds",
    "s1_coulomb_closed",
    "s1_two_slater_closed",
    "s1_equal_eta_closed",
    "s1_tau_oracle",
    "s1_series_n_term",
    "s1_n0_erf_closed",
    "s1_general_term_gamma",
    "cheshire_series",
    "theorem2_angular",
    "theorem3_block_k_terms",
    "theorem3_series",
    "theorem4_block",
    "theorem4_series",
    "corollary6_n0_closed",
]

_SQRT_PI = math.sqrt(math.pi)
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SlaterPair:
    """(eta1, eta2, x2, k) configuration with the phase scalar k.x2.

    k_dot_x2 is the dot product of the momentum with the shift vector; it
    defaults to k*x2 (parallel geometry) and must satisfy |k_dot_x2| <= k*x2.
    """

    eta1: float
    eta2: float
    x2: float
    k: float = 0.0
    k_dot_x2: float | None = None

    def __post_init__(self):
        if self.eta1 <= 0 or self.eta2 <= 0 or self.x2 <= 0:
            raise DomainError("SlaterPair: eta1, eta2, x2 must be positive")
        if self.k < 0:
            raise DomainError("SlaterPair: k must be nonnegative")
        if self.k_dot_x2 is None:
            object.__setattr__(self, "k_dot_x2", self.k * self.x2)
        elif abs(self.k_dot_x2) > self.k * self.x2 * (1 + 1e-12):
            raise DomainError("SlaterPair: |k_dot_x2| exceeds k*x2")


@dataclass(frozen=True)
class SeriesIndexBounds:
    """Caps for the doubly-infinite reconstruction series.

    n_max bounds the outer index value (even values only when even_only is
    set, as required for the k = 0 reconstructions); k_max bounds the inner
    geometric-correction series.
    """

    n_max: int = 40
    k_max: int = 80
    even_only: bool = True

    def __post_init__(self):
        if self.n_max < 0 or self.k_max < 1:
            raise DomainError("SeriesIndexBounds: need n_max >= 0, k_max >= 1")


# ---------------------------------------------------------------------------
# exact closed forms
# ---------------------------------------------------------------------------

def s1_coulomb_closed(eta1: float, x2: float) -> float:
    """S1 against the bare Coulomb tail: 4 pi (1 - e^{-eta1 x2}) / (x2 eta1^2)."""
    if eta1 <= 0 or x2 <= 0:
        raise DomainError("s1_coulomb_closed: eta1, x2 must be positive")
    return 4.0 * math.pi * (1.0 - math.exp(-eta1 * x2)) / (x2 * eta1**2)


def s1_two_slater_closed(p: SlaterPair) -> float:
    """k = 0 closed form: 4 pi (e^{-eta2 x2} - e^{-eta1 x2}) / (x2 (eta1^2 - eta2^2))."""
    if p.eta1 == p.eta2:
        raise DomainError(
            "s1_two_slater_closed is singular at eta1 = eta2; use s1_equal_eta_closed"
        )
    return (
        4.0
        * math.pi
        * (math.exp(-p.eta2 * p.x2) - math.exp(-p.eta1 * p.x2))
        / (p.x2 * (p.eta1**2 - p.eta2**2))
    )


def s1_equal_eta_closed(eta2: float, x2: float) -> float:
    """Equal-exponent limit of the k = 0 closed form: 2 pi e^{-x2 eta2} / eta2."""
    if eta2 <= 0 or x2 <= 0:
        raise DomainError("s1_equal_eta_closed: eta2, x2 must be positive")
    return TWO_PI * math.exp(-x2 * eta2) / eta2


# ---------------------------------------------------------------------------
# the general-k amplitude: oracle and series terms
# ---------------------------------------------------------------------------

def s1_tau_oracle(p: SlaterPair, tol: float = 1e-10) -> QuadratureResult:
    """2 pi int_0^1 e^{-i (k.x2) tau} e^{-x2 L}/L dtau by adaptive quadrature."""
    k2, e1sq, e2sq = p.k**2, p.eta1**2, p.eta2**2
    kx2 = p.k_dot_x2

    def integrand(tau: float) -> complex:
        ell = math.sqrt((1.0 - tau) * (k2 * tau + e2sq) + e1sq * tau)
        return cmath.exp(complex(-p.x2 * ell, -kx2 * tau)) / ell

    res = integrate_finite(integrand, 0.0, 1.0, tol)
    return QuadratureResult(TWO_PI * res.value, TWO_PI * res.error_estimate,
                            res.evaluations, res.converged)


def _series_prefactor(n: int, p: SlaterPair) -> complex:
    d = p.eta1**2 - p.eta2**2
    return (
        TWO_PI
        * 2.0 ** (1.5 - n)
        * p.k ** (2 * n)
        / (_SQRT_PI * factorial(n))
        * d ** (-2 * n - 1)
        * p.x2 ** (n + 0.5)
        * cmath.exp(1j * p.eta2**2 * p.k_dot_x2 / d)
    )


def s1_series_n_term(n: int, p: SlaterPair, tol: float = 1e-11) -> complex:
    """Term n of the Macdonald series in s = sqrt((eta1^2-eta2^2) tau + eta2^2):

        pref(n) int_{eta2}^{eta1} s^{1/2-n} (s^2-eta1^2)^n (s^2-eta2^2)^n
                K_{n+1/2}(s x2) e^{-i s^2 (k.x2)/(eta1^2-eta2^2)} ds,

    evaluated by quadrature; the orientation of the s interval (and the sign
    of the prefactor's odd power of eta1^2-eta2^2) handles eta1 < eta2.
    """
    if p.eta1 == p.eta2:
        raise DomainError("s1_series_n_term: degenerate s interval; use cheshire_series")
    d = p.eta1**2 - p.eta2**2
    e1sq, e2sq = p.eta1**2, p.eta2**2
    phase = -p.k_dot_x2 / d

    def integrand(s: float) -> complex:
        s2 = s * s
        return (
            s ** (0.5 - n)
            * (s2 - e1sq) ** n
            * (s2 - e2sq) ** n
            * bessel_k_half(n, s * p.x2).real
            * cmath.exp(1j * phase * s2)
        )

    lo, hi, sgn = ((p.eta2, p.eta1, 1.0) if p.eta1 > p.eta2 else (p.eta1, p.eta2, -1.0))
    res = integrate_finite(integrand, lo, hi, tol)
    res.raise_if_not_converged("s1_series_n_term")
    return _series_prefactor(n, p) * sgn * res.value


def s1_n0_erf_closed(p: SlaterPair) -> complex:
    """The n = 0 term in closed form as a difference of complex error functions.

    Completing the square in exp(-s x2 - i s^2 (k.x2)/(eta1^2-eta2^2)) gives

        (4 pi / d) e^{beta eta2^2 + x2^2/(4 beta)} sqrt(pi)/(2 sqrt(beta))
            [ erf(w(eta1)) - erf(w(eta2)) ],
        beta = i (k.x2)/d,  w(s) = sqrt(beta) s + x2/(2 sqrt(beta)),  d = eta1^2 - eta2^2,

    which for d > 0 matches the erf-difference form whose arguments carry
    the phase (-1)^{3/4}.
    One principal sqrt(beta) is used throughout, keeping the identity valid
    for either sign of d or of the phase scalar.
    """
    from .specfun import erf_complex

    if p.eta1 == p.eta2:
        raise DomainError("s1_n0_erf_closed: eta1 = eta2; use cheshire_series")
    if p.k == 0 or p.k_dot_x2 == 0:
        raise DomainError("s1_n0_erf_closed needs a nonzero phase; use s1_two_slater_closed")
    d = p.eta1**2 - p.eta2**2
    beta = 1j * p.k_dot_x2 / d
    rb = cmath.sqrt(beta)
    try:
        pref = (4.0 * math.pi / d) * cmath.exp(beta * p.eta2**2 + p.x2**2 / (4.0 * beta))
    except OverflowError as exc:
        raise RangeError(f"s1_n0_erf_closed: exponential prefactor overflows at {p}") from exc
    pref *= _SQRT_PI / (2.0 * rb)

    def w(s: float) -> complex:
        return rb * s + p.x2 / (2.0 * rb)

    return pref * (erf_complex(w(p.eta1)) - erf_complex(w(p.eta2)))


def s1_general_term_gamma(n: int, p: SlaterPair, rel_tol: float = 1e-15) -> complex:
    """Term n of the series as a sum of incomplete gamma functions.

    Expanding the binomials and the finite Macdonald series turns term n into
    channels int s^{q} e^{-s x2 - i s^2 (k.x2)/d} ds with q = 3n-2m-2j-J.
    Each channel is shifted to a pure Gaussian (s = s' + D) and written as a
    difference of Gamma((q-K+1)/2, .) values.  For q >= 0 the binomial K-sum
    is finite; channels with q < 0 are completed with the convergent
    generalised-binomial series in D/s', whose ratio is below 1 for every
    admissible geometry since D is purely imaginary and s real.
    """
    if p.eta1 == p.eta2:
        raise DomainError("s1_general_term_gamma: eta1 = eta2; use cheshire_series")
    if p.k == 0 or p.k_dot_x2 == 0:
        raise DomainError("s1_general_term_gamma needs a nonzero phase scalar")
    d = p.eta1**2 - p.eta2**2
    kx2 = p.k_dot_x2
    x2 = p.x2
    a = 1j * kx2 / d              # gaussian coefficient after the shift
    big_d = 1j * x2 * d / (2.0 * kx2)
    t1 = p.eta2 - big_d
    t2 = p.eta1 - big_d
    phase = cmath.exp(-1j * x2 * x2 * d / (4.0 * kx2))
    pref = (
        TWO_PI
        * 2.0 ** (1 - n)
        * p.k ** (2 * n)
        * x2**n
        / factorial(n)
        * d ** (-2 * n - 1)
        * cmath.exp(1j * p.eta2**2 * kx2 / d)
    )

    gauss_cache: dict[int, complex] = {}

    def gauss(q: int) -> complex:
        # int_{t1}^{t2} t^q e^{-a t^2} dt along the shifted segment
        if q not in gauss_cache:
            alpha = (q + 1) / 2.0
            g = upper_incomplete_gamma(alpha, a * t1 * t1) - upper_incomplete_gamma(
                alpha, a * t2 * t2
            )
            gauss_cache[q] = 0.5 * a ** (-alpha) * g
        return gauss_cache[q]

    def s_power_channel(q: int) -> complex:
        # int_{eta2}^{eta1} s^q e^{-s x2} e^{-i s^2 (k.x2)/d} ds / phase
        total = 0.0 + 0.0j
        kk = 0
        while True:
            coeff = binomial_general(q, kk)
            if coeff == 0.0:
                break
            piece = coeff * big_d**kk * gauss(q - kk)
            total += piece
            kk += 1
            if kk > 8 and abs(piece) <= rel_tol * max(abs(total), 1e-300):
                break
            if kk > 600:
                raise TruncationError("s1_general_term_gamma: shift series stalled")
        return total

    total = 0.0 + 0.0j
    for m in range(n + 1):
        cm = (-1.0) ** m * p.eta1 ** (2 * m) * binomial(n, m)
        for j in range(n + 1):
            cj = (-1.0) ** j * p.eta2 ** (2 * j) * binomial(n, j)
            for cap_j in range(n + 1):
                ck = (
                    factorial(cap_j + n)
                    / (factorial(cap_j) * factorial(n - cap_j))
                    * 2.0 ** (-cap_j)
                    * x2 ** (-cap_j)
                )
                total += cm * cj * ck * s_power_channel(3 * n - 2 * m - 2 * j - cap_j)
    return pref * phase * total


def cheshire_series(eta1: float, x2: float, k: float, k_dot_x2: float | None = None,
                    policy: TruncationPolicy | None = None,
                    allow_k_gt_1: bool = False) -> SeriesEvaluation:
    """Equal-exponent amplitude as a Kummer-function series:

        2 pi sum_n (-1)^n 2^{-3n-1/2} k^{2n} x2^{n+1/2} eta1^{-n-1/2} / Gamma(n+3/2)
              K_{n+1/2}(x2 eta1) 1F1(n+1; 2n+2; -i k.x2).
    """
    if eta1 <= 0 or x2 <= 0 or k < 0:
        raise DomainError("cheshire_series: eta1, x2 must be positive and k >= 0")
    if k > 1 and not allow_k_gt_1:
        raise DomainError("cheshire_series: k > 1; pass allow_k_gt_1=True to override")
    if k_dot_x2 is None:
        k_dot_x2 = k * x2
    policy = policy or default_policy()

    def term(n: int) -> complex:
        gamma_n32 = double_factorial(2 * n + 1) * _SQRT_PI / 2.0 ** (n + 1)
        return (
            TWO_PI
            * (-1.0) ** n
            * 2.0 ** (-3 * n - 0.5)
            * k ** (2 * n)
            * x2 ** (n + 0.5)
            * eta1 ** (-n - 0.5)
            / gamma_n32
            * bessel_k_half(n, x2 * eta1).real
            * kummer_1f1(n + 1, 2 * n + 2, -1j * k_dot_x2)
        )

    if k == 0:
        return accumulate_series(iter([term(0)]), policy)
    return accumulate_series((term(n) for n in range(policy.max_terms)), policy)


def theorem2_angular(eta2: float, x1: float, x2: float) -> complex:
    """int_{-1}^{1} e^{-sqrt(2) eta2 sqrt(-u x1 x2)} / sqrt(-u x1 x2) du
    = sqrt(2) (-e^{-sqrt(2) sqrt(x1 x2) eta2} + e^{-i sqrt(2) sqrt(x1 x2) eta2}) / (x1 x2 eta2),
    with the principal branch sqrt(-u) = i sqrt(u) on the u > 0 half.
    """
    if eta2 <= 0 or x1 <= 0 or x2 <= 0:
        raise DomainError("theorem2_angular: eta2, x1, x2 must be positive")
    c = math.sqrt(2.0) * math.sqrt(x1 * x2) * eta2
    return math.sqrt(2.0) * (-math.exp(-c) + cmath.exp(-1j * c)) / (x1 * x2 * eta2)


# ---------------------------------------------------------------------------
# double-series reconstructions of the k = 0 closed forms
# ---------------------------------------------------------------------------

def _poch(a: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def _gamma_half_odd(n: int) -> float:
    # Gamma((n+3)/2) for even n: (n+1)!! sqrt(pi) / 2^{(n+2)/2}
    return double_factorial(n + 1) * _SQRT_PI / 2.0 ** ((n + 2) // 2)


def _theorem3_term(n: int, k: int, i: int, j: int, eta1: float, eta2: float,
                   x2: float, gamma_at) -> float:
    sign = (-1.0) ** (n // 2) * (-1.0) ** (k - i)
    num = (
        _SQRT_PI
        * sign
        * eta1
        * 2.0 ** (-j + n / 2.0 + 3.0)
        * _gamma_half_odd(n)
        * binomial(n // 2, i)
        * eta2 ** (n - 2 * i)
        * _poch((n + 3) / 2.0, k)
        * factorial((abs(n - 1) + 2 * j - 1) // 2)
    )
    den = (
        factorial(j)
        * factorial(k)
        * factorial(n + 1)
        * factorial((abs(n - 1) - 2 * j - 1) // 2)
    )
    return (
        num
        / den
        * x2 ** (n + 2 * k + 2 - 2 * i)
        * (eta1**2 - eta2**2) ** k
        * gamma_at(2 * i - j - 2 * k - n // 2 - 2)
    )


def _make_gamma_cache(z: float):
    cache: dict[float, float] = {}

    def gamma_at(arg: float) -> float:
        if arg not in cache:
            cache[arg] = upper_incomplete_gamma(arg, z).real
        return cache[arg]

    return gamma_at


def theorem3_block_k_terms(n: int, p: SlaterPair, k_max: int,
                           policy: TruncationPolicy | None = None) -> list[float]:
    """The k-series of block n (each entry already summed over the finite i, j
    sums), truncated by the policy tail rule against the block's running sum."""
    if n % 2 != 0 or n < 0:
        raise DomainError("theorem3 blocks exist for even n >= 0 only")
    policy = policy or default_policy()
    gamma_at = _make_gamma_cache(p.x2 * p.eta2)
    j_top = 0 if n == 0 else n // 2 - 1
    out: list[float] = []
    run = 0.0
    small = 0
    for k in range(k_max):
        t = math.fsum(
            _theorem3_term(n, k, i, j, p.eta1, p.eta2, p.x2, gamma_at)
            for i in range(n // 2 + 1)
            for j in range(j_top + 1)
        )
        out.append(t)
        run += t
        if abs(t) <= policy.rel_tol * abs(run) + policy.abs_tol:
            small += 1
            if small >= policy.tail_window:
                break
        else:
            small = 0
    return out


def theorem3_series(p: SlaterPair, bounds: SeriesIndexBounds | None = None,
                    policy: TruncationPolicy | None = None) -> SeriesEvaluation:
    """k = 0 reconstruction of s1_two_slater_closed as a double series.

    Terms of the returned evaluation are the per-n blocks (n even, ascending),
    each an inner k-series over incomplete gammas accumulated k-minor with
    compensated summation.  The expansion is organised around eta2; the
    |eta1^2 - eta2^2| < eta2^2 validity heuristic is surfaced as a warning,
    not a rejection.
    """
    bounds = bounds or SeriesIndexBounds()
    policy = policy or default_policy()
    if not bounds.even_only:
        raise DomainError(
            "theorem3_series: odd-n terms vanish identically (angular parity); "
            "only even_only bounds are meaningful"
        )
    if p.eta1 == p.eta2:
        raise DomainError("theorem3_series: eta1 = eta2; use theorem4_series")
    ratio = abs(p.eta1**2 - p.eta2**2) / p.eta2**2
    if ratio >= 1.0:
        warnings.warn(
            f"theorem3_series: |eta1^2-eta2^2|/eta2^2 = {ratio:.3g} >= 1; the "
            "inner geometric-correction series may diverge",
            stacklevel=2,
        )

    def blocks():
        for n in range(0, bounds.n_max + 1, 2):
            yield math.fsum(theorem3_block_k_terms(n, p, bounds.k_max, policy))

    return accumulate_series(blocks(), policy)


def _theorem4_term(n: int, i: int, j: int, eta2: float, x2: float, gamma_at) -> float:
    sign = (-1.0) ** (n // 2) * (-1.0) ** i
    num = (
        _SQRT_PI
        * sign
        * 2.0 ** (-j + n / 2.0 + 3.0)
        * _gamma_half_odd(n)
        * binomial(n // 2, i)
        * factorial((abs(n - 1) + 2 * j - 1) // 2)
    )
    den = factorial(j) * factorial(n + 1) * factorial((abs(n - 1) - 2 * j - 1) // 2)
    return (
        num
        / den
        * x2 ** (n + 2 - 2 * i)
        * eta2 ** (n + 1 - 2 * i)
        * gamma_at(2 * i - j - n // 2 - 2)
    )


def theorem4_block(n: int, eta2: float, x2: float) -> float:
    """Block n (even) of the equal-exponent reconstruction: the finite (i, j) sum."""
    if n % 2 != 0 or n < 0:
        raise DomainError("theorem4 blocks exist for even n >= 0 only")
    gamma_at = _make_gamma_cache(x2 * eta2)
    j_top = 0 if n == 0 else n // 2 - 1
    return math.fsum(
        _theorem4_term(n, i, j, eta2, x2, gamma_at)
        for i in range(n // 2 + 1)
        for j in range(j_top + 1)
    )


def theorem4_series(eta2: float, x2: float, bounds: SeriesIndexBounds | None = None,
                    policy: TruncationPolicy | None = None) -> SeriesEvaluation:
    """Equal-exponent reconstruction of s1_equal_eta_closed.

    No inner geometric-correction series is needed; every block is a finite
    (i, j) sum and all blocks are positive at real parameters.
    """
    if eta2 <= 0 or x2 <= 0:
        raise DomainError("theorem4_series: eta2, x2 must be positive")
    bounds = bounds or SeriesIndexBounds()
    policy = policy or default_policy()

    def blocks():
        for n in range(0, bounds.n_max + 1, 2):
            yield theorem4_block(n, eta2, x2)

    return accumulate_series(blocks(), policy)


def corollary6_n0_closed(eta1: float, eta2: float) -> float:
    """Closed form of the leading Cartesian-grouping amplitude term:
    4 pi asinh(sqrt(eta2^2/eta1^2 - 1)) / sqrt(eta2^2 - eta1^2), for eta2 > eta1 > 0.
    """
    if not eta2 > eta1 > 0:
        raise DomainError("corollary6_n0_closed requires eta2 > eta1 > 0")
    return (
        4.0
        * math.pi
        / math.sqrt(eta2**2 - eta1**2)
        * math.asinh(math.sqrt(eta2**2 / eta1**2 - 1.0))
    )
