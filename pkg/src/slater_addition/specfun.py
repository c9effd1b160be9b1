"""Special-function kernel over complex arguments.

Self-contained double-precision routines for the half-integer Bessel
functions, Legendre/Hermite polynomials, the upper incomplete gamma
function at integer and half-integer first argument, the complex error
function, the Kummer confluent hypergeometric series, the exponential
integral, and the one Meijer-G special case that is defined operationally
through an inverse-Gaussian-transform quadrature.

Everything here is a pure function of its arguments.  The factorial and
double-factorial caches are filled lazily with exact integers and are
immutable once written, so concurrent use is safe.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import CapacityError, DomainError, RangeError, TruncationError

__all__ = [
    "LegendreCoeffSet",
    "factorial",
    "double_factorial",
    "bessel_k_half",
    "bessel_i_half",
    "legendre_p",
    "cos_power_to_legendre",
    "upper_incomplete_gamma",
    "erf_complex",
    "kummer_1f1",
    "hermite_h",
    "exp_integral_ei",
    "meijer_g_0313",
]

# Largest n with n! representable in double precision (170! ~ 7.3e306).
FACTORIAL_LIMIT = 170
# Recurrence depth bound for the incomplete gamma chains.
GAMMA_RECURRENCE_LIMIT = 400

_SQRT_PI = math.sqrt(math.pi)
_FACT: list[int] = [1, 1]
_DFACT: list[int] = [1, 1]


def factorial(n: int) -> int:
    """n! as an exact integer, bounded by FACTORIAL_LIMIT."""
    if n < 0:
        raise DomainError(f"factorial of negative integer {n}")
    if n > FACTORIAL_LIMIT:
        raise CapacityError(f"factorial({n}) exceeds the double-precision cache bound")
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


def double_factorial(n: int) -> int:
    """n!! (with (-1)!! = 0!! = 1), bounded by FACTORIAL_LIMIT."""
    if n < -1:
        raise DomainError(f"double factorial of {n}")
    if n > FACTORIAL_LIMIT:
        raise CapacityError(f"double_factorial({n}) exceeds the cache bound")
    if n == -1:
        return 1
    while len(_DFACT) <= n:
        m = len(_DFACT)
        _DFACT.append(_DFACT[m - 2] * m)
    return _DFACT[n]


def binomial(n: int, k: int) -> int:
    """Binomial coefficient for nonnegative integer n."""
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


def binomial_general(p: int, k: int) -> float:
    """Generalised binomial coefficient p(p-1)...(p-k+1)/k! for integer p of any sign."""
    num = 1.0
    for i in range(k):
        num *= p - i
    return num / factorial(k)


# ---------------------------------------------------------------------------
# half-integer Bessel functions
# ---------------------------------------------------------------------------

def bessel_k_half(n: int, z: complex | float, scaled: bool = False) -> complex:
    """Macdonald function of half-integer order, K_{n+1/2}(z), as a finite series.

        K_{n+1/2}(z) = sqrt(pi/(2z)) e^{-z} sum_{J=0}^{n} (J+n)!/(J!(n-J)!) (2z)^{-J}

    Negative n is routed through K_{-nu} = K_nu (order -(n+1/2) = (-n-1)+1/2),
    so e.g. n = -1 evaluates K_{-1/2} = K_{1/2}.  All complex powers take the
    principal branch.  With ``scaled=True`` the factor e^{-z} is omitted.
    """
    if n < 0:
        n = -n - 1
    z = complex(z)
    if z == 0:
        raise DomainError("bessel_k_half: z = 0")
    if 2 * n > FACTORIAL_LIMIT:
        raise CapacityError(f"bessel_k_half: order {n}+1/2 exceeds the factorial cache")
    s = 0.0 + 0.0j
    for J in range(n, -1, -1):
        s += factorial(J + n) / (factorial(J) * factorial(n - J)) * (2 * z) ** (-J)
    pref = cmath.sqrt(math.pi / (2 * z))
    if scaled:
        return pref * s
    return pref * cmath.exp(-z) * s


def bessel_i_half(n: int, x: float) -> float:
    """Modified Bessel function I_{n+1/2}(x) for x > 0.

    Evaluated by the ascending series (x/2)^{n+1/2}/Gamma(n+3/2) * sum_k
    (x^2/4)^k / (k! (n+3/2)_k), which is uniformly accurate; the familiar
    sinh/cosh closed forms cancel catastrophically once x << n.
    """
    if x <= 0:
        raise DomainError("bessel_i_half: x must be positive")
    if n < 0:
        raise DomainError("bessel_i_half: order index n must be >= 0")
    # Gamma(n+3/2) = (2n+1)!! sqrt(pi) / 2^{n+1}
    g = double_factorial(2 * n + 1) * _SQRT_PI / 2.0 ** (n + 1)
    term = (x / 2.0) ** (n + 0.5) / g
    total = term
    q = x * x / 4.0
    k = 1
    while True:
        term *= q / (k * (n + 0.5 + k))
        total += term
        if term < 1e-17 * total:
            return total
        k += 1
        if k > 500:
            raise TruncationError("bessel_i_half series did not converge")


# ---------------------------------------------------------------------------
# orthogonal polynomials
# ---------------------------------------------------------------------------

def legendre_p(n: int, u: float) -> float:
    """Legendre polynomial P_n(u) on [-1, 1] by the three-term recurrence."""
    if abs(u) > 1.0:
        raise DomainError(f"legendre_p: |u| = {abs(u)} > 1")
    if n < 0:
        raise DomainError("legendre_p: negative degree")
    p0, p1 = 1.0, u
    if n == 0:
        return p0
    for m in range(1, n):
        p0, p1 = p1, ((2 * m + 1) * u * p1 - m * p0) / (m + 1)
    return p1


def hermite_h(j: int, x: float) -> float:
    """Physicists' Hermite polynomial H_j(x) by recurrence."""
    if j < 0:
        raise DomainError("hermite_h: negative degree")
    h0, h1 = 1.0, 2.0 * x
    if j == 0:
        return h0
    for m in range(1, j):
        h0, h1 = h1, 2.0 * x * h1 - 2.0 * m * h0
    return h1


@dataclass(frozen=True)
class LegendreCoeffSet:
    """Coefficients c_m with cos^j(theta) = sum_m c_m P_m(cos theta).

    Only m of the same parity as j appear; the smallest m is 0 or 1
    according to whether j is even or odd.
    """

    power: int
    coeffs: dict[int, float] = field(default_factory=dict)

    def evaluate(self, u: float) -> float:
        return sum(c * legendre_p(m, u) for m, c in self.coeffs.items())


def cos_power_to_legendre(j: int) -> LegendreCoeffSet:
    """Expansion of cos^j(theta) in Legendre polynomials.

    c_m = (2m+1) j! 2^{(m-j)/2} / ( ((j-m)/2)! (j+m+1)!! ),  m = j, j-2, ..., (0 or 1).
    """
    if j < 0:
        raise DomainError("cos_power_to_legendre: negative power")
    coeffs: dict[int, float] = {}
    m = j
    while m >= 0:
        coeffs[m] = (
            (2 * m + 1)
            * factorial(j)
            * 2.0 ** ((m - j) / 2)
            / (factorial((j - m) // 2) * double_factorial(j + m + 1))
        )
        m -= 2
    return LegendreCoeffSet(power=j, coeffs=coeffs)


# ---------------------------------------------------------------------------
# upper incomplete gamma, integer and half-integer first argument
# ---------------------------------------------------------------------------

def _exp1_small(z: complex) -> complex:
    """E_1(z) = Gamma(0, z) by the ascending series, |z| small, z off (-inf, 0]."""
    total = -0.5772156649015328606 - cmath.log(z)
    term = 1.0 + 0.0j
    for k in range(1, 200):
        term *= -z / k
        total -= term / k
        if abs(term) < 1e-18 * k:
            return total
    raise TruncationError("E1 small-z series did not converge")


def _gamma_series_small(a: float, z: complex) -> complex:
    """Gamma(a, z) = Gamma(a) - z^a sum_k (-z)^k / (k! (a+k)), a not a nonpositive integer."""
    s = 1.0 / a + 0.0j
    term = 1.0 + 0.0j
    for k in range(1, 300):
        term *= -z / k
        s += term / (a + k)
        if abs(term) < 1e-18 * max(1.0, abs(s)):
            break
    else:
        raise TruncationError("incomplete gamma small-z series did not converge")
    return math.gamma(a) - z**a * s


def _gamma_cf(a: float, z: complex) -> complex:
    """Gamma(a, z) ~ e^{-z} z^a / (z+1-a - 1(1-a)/(z+3-a - ...)) by modified Lentz."""
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, 600):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return cmath.exp(-z) * z**a * h
    raise TruncationError("incomplete gamma continued fraction did not converge")


def _gamma_anchor(a0: float, z: complex) -> complex:
    """Gamma(a0, z) at the chain anchors a0 in {0, 1/2, 1}.

    The continued fraction converges well only with z away from the branch
    cut; at steep arguments the (entire) ascending series is used instead,
    up to the modulus where its e^{|z|} cancellation still leaves ~11
    digits.  Beyond that wedge the fraction is attempted and a failure
    surfaces as TruncationError rather than a wrong value.
    """
    if a0 == 1.0:
        return cmath.exp(-z)
    steep = z.real < 0.35 * abs(z)  # |arg z| beyond ~70 degrees
    small = abs(z) < 2.0 or (steep and abs(z) <= 9.0)
    if a0 == 0.0:
        return _exp1_small(z) if small else _gamma_cf(0.0, z)
    # a0 == 1/2
    return _gamma_series_small(0.5, z) if small else _gamma_cf(0.5, z)


def upper_incomplete_gamma(a: float, z: complex | float) -> complex:
    """Upper incomplete gamma Gamma(a, z) for integer or half-integer a.

    Anchored at Gamma(1, z) = e^{-z}, Gamma(0, z) = E_1(z) and Gamma(1/2, z),
    then moved to the requested a with the recurrence
    Gamma(a+1, z) = a Gamma(a, z) + z^a e^{-z}  (upward for a above the anchor,
    downward for a below, including nonpositive integers).  z may be complex
    but must stay off the negative real axis, where the principal branch of
    z^a has its cut.
    """
    two_a = round(2 * a)
    if abs(2 * a - two_a) > 1e-12:
        raise DomainError(f"upper_incomplete_gamma: a = {a} is not integer or half-integer")
    a = two_a / 2.0
    z = complex(z)
    if z == 0:
        if a > 0:
            return complex(math.gamma(a))
        raise DomainError("upper_incomplete_gamma diverges at z = 0 for a <= 0")
    if z.imag == 0 and z.real < 0:
        raise DomainError("upper_incomplete_gamma: z on the negative real axis")

    if two_a % 2 == 0:
        anchor = 1.0 if a >= 1 else 0.0
    else:
        anchor = 0.5
    steps = int(round(abs(a - anchor)))
    if steps > GAMMA_RECURRENCE_LIMIT:
        raise CapacityError(
            f"upper_incomplete_gamma: recurrence depth {steps} exceeds bound {GAMMA_RECURRENCE_LIMIT}"
        )

    g = _gamma_anchor(anchor, z)
    emz = cmath.exp(-z)
    if a >= anchor:
        b = anchor
        while b < a:  # Gamma(b+1) = b Gamma(b) + z^b e^{-z}
            g = b * g + z**b * emz
            b += 1.0
    else:
        b = anchor
        while b > a:  # Gamma(b-1) = (Gamma(b) - z^{b-1} e^{-z}) / (b-1)
            g = (g - z ** (b - 1.0) * emz) / (b - 1.0)
            b -= 1.0
    if cmath.isinf(g) or cmath.isnan(g):
        raise CapacityError("upper_incomplete_gamma overflowed double precision")
    return g


# ---------------------------------------------------------------------------
# error function and Kummer 1F1
# ---------------------------------------------------------------------------

def erf_complex(z: complex | float) -> complex:
    """Error function of a complex argument; odd in z.

    Real arguments delegate to math.erf.  After the odd reduction to
    Re z >= 0, arguments with Re z <= 2 go through the entire Taylor series
    (whose e^{2 Re(z)^2} cancellation then costs at most ~3 digits, at any
    height short of overflow) and the rest through
    erf(z) = 1 - Gamma(1/2, z^2)/sqrt(pi), whose continued fraction holds
    full precision once Re z >= 2.  Where e^{-z^2} itself overflows double
    precision, RangeError is raised.
    """
    z = complex(z)
    if z.imag == 0.0:
        return complex(math.erf(z.real))
    if z.real < 0.0 or (z.real == 0.0 and z.imag < 0.0):
        return -erf_complex(-z)
    z2 = z * z
    if -z2.real > 700.0:
        raise RangeError(f"erf_complex: e^(-z^2) overflows for z = {z}")
    if z.real <= 2.0:
        # 2/sqrt(pi) sum_k (-1)^k z^{2k+1} / (k! (2k+1))
        term = z
        total = z
        for k in range(1, 1200):
            term *= -z2 / k
            total += term / (2 * k + 1)
            if abs(term) < 1e-18 * (2 * k + 1) * max(abs(total), 1e-30):
                return 2.0 / _SQRT_PI * total
        raise TruncationError("erf Taylor series did not converge")
    return 1.0 - _gamma_cf(0.5, z2) / _SQRT_PI


def kummer_1f1(a: int, b: int, z: complex | float, rel_tol: float = 1e-15,
               max_terms: int = 500) -> complex:
    """Confluent hypergeometric 1F1(a; b; z) by its Taylor series.

    Intended for integer b >= a >= 1, where every series coefficient is
    positive and the sum is cancellation-free for the small |z| used here.
    """
    if not (isinstance(a, int) and isinstance(b, int) and b >= a >= 1):
        raise DomainError("kummer_1f1 requires integers b >= a >= 1")
    z = complex(z)
    term = 1.0 + 0.0j
    total = term
    small = 0
    for k in range(max_terms):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
        if abs(term) <= rel_tol * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise TruncationError(f"kummer_1f1 did not converge in {max_terms} terms")


# ---------------------------------------------------------------------------
# exponential integral and the quadrature-defined Meijer G
# ---------------------------------------------------------------------------

def exp_integral_ei(x: float) -> float:
    """Exponential integral Ei(x) for x < 0, via Ei(x) = -E_1(-x)."""
    if x >= 0:
        raise DomainError("exp_integral_ei is defined here for x < 0 only")
    return -upper_incomplete_gamma(0.0, -x).real


def meijer_g_0313(j: int, mu: float, arg: float, tol: float = 1e-12) -> float:
    """The G^{0,3}_{3,1} value fixed by the inverse Gaussian transform

        int_0^inf rho^mu e^{-a^2/rho - p rho} H_j(a/sqrt(rho)) drho
            = 2^j p^{-mu-1} G^{0,3}_{3,1}( 1/(a^2 p) | (1/2, 1, -mu); (j+1)/2 ),

    evaluated by performing the left-hand quadrature (with t = p rho, so the
    result depends on a, p only through arg = 1/(a^2 p)) and rescaling by
    2^{-j}.  No free-standing Meijer-G algorithm is used.
    """
    if arg <= 0:
        raise DomainError("meijer_g_0313: arg must be positive")
    if j < 0:
        raise DomainError("meijer_g_0313: j must be >= 0")
    from .quadrature import integrate_semi_infinite

    inv = 1.0 / arg

    def integrand(t: float) -> float:
        if t <= 0.0:
            return 0.0
        w = mu * math.log(t) - t - inv / t
        if w < -745.0:
            return 0.0
        return math.exp(w) * hermite_h(j, 1.0 / math.sqrt(arg * t))

    res = integrate_semi_infinite(integrand, 0.0, tol)
    res.raise_if_not_converged("meijer_g_0313")
    return 2.0 ** (-j) * res.value.real
