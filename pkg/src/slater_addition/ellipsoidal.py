"""Two-centre test integral in prolate spheroidal coordinates.

T(a,bc) couples three exponential centres on a line with separation R:

    T(a,bc) = 2 R^3 int_1^inf dlam int_{-1}^{1} dmu
              ((lam - mu)/R + (lam^2 - mu^2)) e^{-3R lam - R mu}
              e^{-R sqrt(lam^2 + mu^2 - 1)}.

Three routes are provided: the 2-D quadrature oracle, the exact
Ei/exponential closed form, and the single-series expansion obtained by
inserting the derivative-form addition theorem (the exponential carries no
1/L denominator here, so the series of Macdonald order n - 1/2 applies with
C = lam^2 and B = mu^2 - 1).  The series decays algebraically after a few
terms; stall_detector quantifies the plateau the way the convergence study
reports it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .quadrature import QuadratureResult, integrate_2d
from .specfun import bessel_i_half, factorial, upper_incomplete_gamma
from .theorems import SeriesEvaluation, TruncationPolicy, accumulate_series, default_policy

__all__ = [
    "EllipsoidalParams",
    "StallReport",
    "t_abc_integrand",
    "t_abc_oracle",
    "t_abc_exact",
    "t_abc_term",
    "t_abc_series",
    "stall_detector",
]

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class EllipsoidalParams:
    """A point (lam, mu) of the integration domain at separation R."""

    R: float
    lam: float
    mu: float

    def __post_init__(self):
        if self.R <= 0:
            raise DomainError("EllipsoidalParams: R must be positive")
        if self.lam < 1.0 or abs(self.mu) > 1.0:
            raise DomainError("EllipsoidalParams: need lam >= 1 and |mu| <= 1")


def t_abc_integrand(pt: EllipsoidalParams) -> float:
    """Integrand of T(a,bc) including the 2 R^3 measure factor."""
    R, lam, mu = pt.R, pt.lam, pt.mu
    root = math.sqrt(lam * lam + mu * mu - 1.0)
    poly = (lam - mu) / R + (lam * lam - mu * mu)
    return 2.0 * R**3 * poly * math.exp(-3.0 * R * lam - R * mu - R * root)


def t_abc_oracle(R: float, tol: float = 1e-9) -> QuadratureResult:
    """T(a,bc) by nested adaptive quadrature over [1, inf) x [-1, 1]."""
    if R <= 0:
        raise DomainError("t_abc_oracle: R must be positive")

    def f(lam: float, mu: float) -> float:
        return t_abc_integrand(EllipsoidalParams(R, lam, min(1.0, max(-1.0, mu))))

    return integrate_2d(f, (1.0, math.inf, -1.0, 1.0), tol)


def t_abc_exact(R: float) -> float:
    """The exact closed form in Ei and exponentials.

    The second group carries a single overall minus sign; this reading
    matches the quadrature oracle to eight digits over R in [0.011, 1.1].
    """
    if R <= 0:
        raise DomainError("t_abc_exact: R must be positive")
    from .specfun import exp_integral_ei

    ei8 = exp_integral_ei(-8.0 * R)
    ei2 = exp_integral_ei(-2.0 * R)
    t1 = math.exp(3.0 * R) * (-16.0 * R**2 + 44.0 * R + 116.0 / (9.0 * R) - 116.0 / 3.0) * ei8
    t2 = -math.exp(-3.0 * R) * (16.0 * R**2 + 44.0 * R + 116.0 / (9.0 * R) + 116.0 / 3.0) * (
        ei2 + 2.0 * math.log(2.0)
    )
    t3 = math.exp(-3.0 * R) * (624.0 * R**2 + 2256.0 * R + 131.0 / (3.0 * R) + 1670.0) / 16.0
    t4 = -math.exp(-5.0 * R) * (160.0 * R + 131.0 / (3.0 * R) + 34.0) / 16.0
    return (t1 + t2 + t3 + t4) / 81.0


def _j_top(n: int) -> int:
    # floor(|n - 1/2| - 1/2): 0 at n = 0, n - 1 for n >= 1
    return 0 if n == 0 else n - 1


def t_abc_term(n: int, big_j: int, R: float, gamma_at=None) -> float:
    """The (n, J) contribution after both angular moments are expressed in
    modified Bessel I and the lam integral in incomplete gammas."""
    nt = _j_top(n)
    if not 0 <= big_j <= nt:
        raise DomainError(f"t_abc_term: J = {big_j} outside 0..{nt}")
    if gamma_at is None:
        z = 4.0 * R
        gamma_at = lambda a: upper_incomplete_gamma(a, z).real
    g1 = gamma_at(-big_j - n + 1)
    g2 = gamma_at(-big_j - n + 2)
    g3 = gamma_at(-big_j - n + 3)
    # the Gamma(n+1) of the assembled line cancels the 1/n! of the source series
    pref = (
        _SQRT_PI
        * 2.0 ** (big_j + 2 * n - 4.5)
        * R ** (2 * n)
        * factorial(nt + big_j)
        / (factorial(big_j) * factorial(nt - big_j))
    )
    combo = 4.0 * g2 + g3
    bracket = (
        bessel_i_half(n + 2, R) * (combo - 16.0 * R * R * g1) * R ** (-n - 0.5)
        + (2 * n + 3) * bessel_i_half(n + 1, R) * combo * R ** (-n - 1.5)
    )
    return pref * bracket


def t_abc_series(R: float, n_max: int = 20,
                 policy: TruncationPolicy | None = None) -> SeriesEvaluation:
    """Series for T(a,bc): increment n is the finite J-sum of t_abc_term.

    Convergence plateaus (dominated by the J = n-1 term) rather than failing
    outright; run stall_detector on the result to size the plateau.
    """
    if R <= 0:
        raise DomainError("t_abc_series: R must be positive")
    policy = policy or default_policy()
    z = 4.0 * R
    cache: dict[int, float] = {}

    def gamma_at(a: int) -> float:
        if a not in cache:
            cache[a] = upper_incomplete_gamma(a, z).real
        return cache[a]

    def increments():
        for n in range(n_max + 1):
            yield math.fsum(t_abc_term(n, big_j, R, gamma_at) for big_j in range(_j_top(n) + 1))

    return accumulate_series(increments(), policy)


@dataclass(frozen=True)
class StallReport:
    """Plateau diagnostics for a slowly-converging series."""

    stalled: bool
    index: int | None
    magnitude: float | None


def stall_detector(evaluation: SeriesEvaluation, window: int = 4) -> StallReport:
    """Flag a plateau: |term| failed to halve across ``window`` terms.

    Scans for the first index i >= window with |t_i| > |t_{i-window}| / 2 and
    reports |t_i| as the plateau magnitude.  A geometric tail with ratio
    below 2^{-1/window} never trips the detector.
    """
    if window < 1:
        raise DomainError("stall_detector: window must be >= 1")
    mags = [abs(t) for t in evaluation.terms]
    if len(mags) <= window:
        raise DomainError("stall_detector: evaluation has fewer terms than the window")
    for i in range(window, len(mags)):
        if mags[i] > 0.5 * mags[i - window] and mags[i] > 0.0:
            return StallReport(stalled=True, index=i, magnitude=mags[i])
    return StallReport(stalled=False, index=None, magnitude=None)
