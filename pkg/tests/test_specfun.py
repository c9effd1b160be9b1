"""Special-function kernel: frozen values, independent oracles, properties."""

import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from slater_addition import specfun as sf
from slater_addition.errors import CapacityError, DomainError, RangeError
from slater_addition.quadrature import integrate_finite, integrate_semi_infinite

SQRT_PI = math.sqrt(math.pi)


def k_half_integral_oracle(n, z):
    """K_{n+1/2}(z) = int_0^inf e^{-z cosh t} cosh((n+1/2) t) dt, Re z > 0."""
    nu = n + 0.5
    res = integrate_semi_infinite(
        lambda t: cmath.exp(-z * math.cosh(t)) * math.cosh(nu * t), 0.0, 1e-12
    )
    assert res.converged
    return res.value


class TestFactorials:
    def test_exact_values(self):
        assert sf.factorial(0) == 1
        assert sf.factorial(10) == 3628800
        assert sf.double_factorial(-1) == 1
        assert sf.double_factorial(7) == 105
        assert sf.double_factorial(8) == 384

    def test_capacity(self):
        with pytest.raises(CapacityError):
            sf.factorial(171)
        with pytest.raises(DomainError):
            sf.factorial(-1)

    def test_binomial(self):
        assert sf.binomial(6, 2) == 15
        assert sf.binomial(6, 7) == 0
        assert sf.binomial_general(-2, 3) == pytest.approx(-4.0)


class TestBesselKHalf:
    def test_k_half_closed_form(self):
        # K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}, exactly as built
        assert sf.bessel_k_half(0, 1.0).real == pytest.approx(
            math.sqrt(math.pi / 2.0) * math.exp(-1.0), rel=1e-15
        )
        assert sf.bessel_k_half(0, 1.0).real == pytest.approx(0.4610685044478945, rel=1e-14)

    def test_order_three_halves_vs_integral_oracle(self):
        got = sf.bessel_k_half(1, 2.0).real
        assert got == pytest.approx(0.17990665795209218, rel=1e-13)
        assert got == pytest.approx(k_half_integral_oracle(1, 2.0).real, rel=1e-9)

    def test_leading_theorem_argument(self):
        z = 0.17 * math.sqrt(0.11)
        want = math.sqrt(math.pi / (2 * z)) * math.exp(-z)
        assert sf.bessel_k_half(0, z).real == pytest.approx(want, rel=1e-15)

    @pytest.mark.parametrize("n", range(9))
    @pytest.mark.parametrize("z", [0.1, 0.7, 2.0, 5.0])
    def test_real_grid_vs_oracle(self, n, z):
        assert sf.bessel_k_half(n, z).real == pytest.approx(
            k_half_integral_oracle(n, z).real, rel=1e-9
        )

    # small Re(z) is paired with low orders only: the oracle integrand peaks
    # near e^{nu*t - Re(z) cosh t} and becomes ill-conditioned for large nu
    @pytest.mark.parametrize(
        "n, z",
        [(n, z) for n in (0, 2, 5, 8) for z in (2.0 - 1.0j, 3.0 + 2.0j, 4.0 - 1.8j)]
        + [(n, z) for n in (0, 1, 2) for z in (0.5 + 1.5j, 1.0 + 2.0j)],
    )
    def test_complex_grid_vs_oracle(self, n, z):
        got = sf.bessel_k_half(n, z)
        want = k_half_integral_oracle(n, z)
        assert abs(got - want) <= 1e-7 * abs(want)

    def test_negative_order_routing(self):
        # K_{-nu} = K_nu: order -(n+1/2) routes to (-n-1)+1/2
        for z in (0.3, 2.0, 1.0 + 1.0j):
            assert sf.bessel_k_half(-1, z) == sf.bessel_k_half(0, z)
            assert sf.bessel_k_half(-4, z) == sf.bessel_k_half(3, z)

    @given(n=st.integers(min_value=-9, max_value=8),
           re=st.floats(0.1, 5.0), im=st.floats(-2.0, 2.0))
    @settings(max_examples=60, deadline=None)
    def test_symmetry_by_construction(self, n, re, im):
        z = complex(re, im)
        assert sf.bessel_k_half(n, z) == sf.bessel_k_half(-n - 1, z)

    def test_scaled_variant(self):
        z = 9.0
        assert sf.bessel_k_half(2, z, scaled=True).real == pytest.approx(
            sf.bessel_k_half(2, z).real * math.exp(z), rel=1e-12
        )

    def test_errors(self):
        with pytest.raises(DomainError):
            sf.bessel_k_half(0, 0.0)
        with pytest.raises(CapacityError):
            sf.bessel_k_half(90, 1.0)


class TestBesselIHalf:
    def test_i_half_closed_form(self):
        assert sf.bessel_i_half(0, 1.0) == pytest.approx(
            math.sqrt(2.0 / math.pi) * math.sinh(1.0), rel=1e-14
        )

    def test_i_three_halves_closed_form(self):
        x = 2.0
        want = math.sqrt(2.0 / (math.pi * x)) * (math.cosh(x) - math.sinh(x) / x)
        assert sf.bessel_i_half(1, x) == pytest.approx(want, rel=1e-13)

    def test_small_argument_vs_power_series_oracle(self):
        # 20-term ascending series written out independently
        n, x = 2, 0.11
        nu = n + 0.5
        total = 0.0
        for k in range(20):
            total += (x / 2.0) ** (2 * k + nu) / (math.factorial(k) * math.gamma(k + nu + 1.0))
        assert sf.bessel_i_half(n, x) == pytest.approx(total, rel=1e-14)

    def test_errors(self):
        with pytest.raises(DomainError):
            sf.bessel_i_half(0, 0.0)
        with pytest.raises(DomainError):
            sf.bessel_i_half(-1, 1.0)


class TestLegendre:
    def test_low_orders(self):
        assert sf.legendre_p(0, 0.3) == 1.0
        assert sf.legendre_p(1, 0.3) == 0.3

    def test_degree_four_explicit(self):
        u = -0.6
        want = (35 * u**4 - 30 * u**2 + 3) / 8.0
        assert sf.legendre_p(4, u) == pytest.approx(want, rel=1e-14)
        assert sf.legendre_p(4, u) == pytest.approx(-0.408, abs=1e-12)

    @given(n=st.integers(0, 10), u=st.floats(-1.0, 1.0))
    @settings(max_examples=80, deadline=None)
    def test_vs_binomial_sum(self, n, u):
        want = 2.0 ** (-n) * math.fsum(
            sf.binomial(n, k) ** 2 * (u - 1.0) ** (n - k) * (u + 1.0) ** k
            for k in range(n + 1)
        )
        assert sf.legendre_p(n, u) == pytest.approx(want, abs=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.legendre_p(2, 1.0001)


class TestCosPowerToLegendre:
    def test_trivial_powers(self):
        assert sf.cos_power_to_legendre(0).coeffs == {0: 1.0}
        assert sf.cos_power_to_legendre(1).coeffs == {1: 1.0}

    def test_square_via_projection_oracle(self):
        # c_m = (2m+1)/2 int_{-1}^{1} u^2 P_m(u) du
        cs = sf.cos_power_to_legendre(2).coeffs
        for m in (0, 2):
            proj = integrate_finite(
                lambda u: u**2 * sf.legendre_p(m, u), -1.0, 1.0, 1e-13
            ).value.real * (2 * m + 1) / 2.0
            assert cs[m] == pytest.approx(proj, abs=1e-12)
        assert cs[0] == pytest.approx(1.0 / 3.0, rel=1e-14)
        assert cs[2] == pytest.approx(2.0 / 3.0, rel=1e-14)

    @pytest.mark.parametrize("j", range(13))
    def test_pointwise_reconstruction(self, j):
        cs = sf.cos_power_to_legendre(j)
        for i in range(50):
            u = math.cos(math.pi * (i + 0.5) / 50.0)
            assert abs(cs.evaluate(u) - u**j) < 1e-12

    def test_parity_structure(self):
        for j in (4, 7):
            ms = sorted(sf.cos_power_to_legendre(j).coeffs)
            assert all(m % 2 == j % 2 for m in ms)
            assert ms[0] == (0 if j % 2 == 0 else 1)


class TestUpperIncompleteGamma:
    def test_exponential_anchor(self):
        assert sf.upper_incomplete_gamma(1.0, 2.0).real == pytest.approx(math.exp(-2.0), rel=1e-15)

    def test_small_real_z_negative_a(self):
        # the value that drives the leading reconstruction-series term
        got = sf.upper_incomplete_gamma(-2.0, 0.0221).real
        e1 = sf.upper_incomplete_gamma(0.0, 0.0221).real
        z = 0.0221
        want = 0.5 * (e1 + math.exp(-z) * (1.0 / z**2 - 1.0 / z))
        assert got == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("a, z", [(-3.0, 1.5 + 0.5j), (-2.5, -2.1 - 0.5j),
                                      (1.5, -1.0 + 2.0j)])
    def test_complex_z_vs_ray_quadrature(self, a, z):
        # the ray z + u stays off the cut and reaches the right half-plane
        got = sf.upper_incomplete_gamma(a, z)
        res = integrate_semi_infinite(
            lambda u: (z + u) ** (a - 1.0) * cmath.exp(-(z + u)), 0.0, 1e-13
        )
        assert res.converged
        assert abs(got - res.value) <= 1e-9 * abs(res.value)

    @given(
        two_a=st.integers(-12, 12),
        z=st.sampled_from([0.0221, 0.5, 2.3, 5.0, 1.5 + 0.5j, 0.3 - 0.8j, 4.0 + 3.0j,
                           -2.1 - 0.5j, -4.0 + 1.5j, 0.1 + 3.0j]),
    )
    @settings(max_examples=150, deadline=None)
    def test_recurrence_identity(self, two_a, z):
        a = two_a / 2.0
        lhs = sf.upper_incomplete_gamma(a + 1.0, z)
        rhs = a * sf.upper_incomplete_gamma(a, z) + complex(z) ** a * cmath.exp(-complex(z))
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)

    def test_positive_half_integer_vs_erfc_form(self):
        # Gamma(1/2, z) = sqrt(pi) (1 - erf(sqrt(z))) on the real axis
        for z in (0.2, 1.0, 4.0):
            want = SQRT_PI * (1.0 - math.erf(math.sqrt(z)))
            assert sf.upper_incomplete_gamma(0.5, z).real == pytest.approx(want, rel=1e-12)

    def test_errors(self):
        with pytest.raises(DomainError):
            sf.upper_incomplete_gamma(-1.0, 0.0)
        with pytest.raises(DomainError):
            sf.upper_incomplete_gamma(0.25, 1.0)
        with pytest.raises(DomainError):
            sf.upper_incomplete_gamma(1.0, -3.0)
        with pytest.raises(CapacityError):
            sf.upper_incomplete_gamma(-500.0, 0.5)
        assert sf.upper_incomplete_gamma(2.0, 0.0).real == pytest.approx(1.0)


class TestErfComplex:
    def test_zero_and_real_axis(self):
        assert sf.erf_complex(0.0) == 0.0
        assert sf.erf_complex(1.0).real == pytest.approx(0.8427007929497149, rel=1e-15)

    def test_real_axis_series_oracle(self):
        # independent Taylor sum on the real axis
        z = 1.0
        total = 0.0
        for k in range(60):
            total += (-1.0) ** k * z ** (2 * k + 1) / (math.factorial(k) * (2 * k + 1))
        total *= 2.0 / SQRT_PI
        assert sf.erf_complex(z).real == pytest.approx(total, rel=1e-14)

    @pytest.mark.parametrize("z", [0.5 + 0.5j, 2.0 - 1.0j, 0.3 + 2.0j, 4.2 + 0.4j,
                                   1.2 + 4.0j, 0.4 - 6.0j, 3.0 + 3.0j])
    def test_complex_vs_ray_quadrature(self, z):
        res = integrate_finite(lambda u: cmath.exp(-((z * u) ** 2)), 0.0, 1.0, 1e-13)
        want = 2.0 * z / SQRT_PI * res.value
        assert abs(sf.erf_complex(z) - want) <= 1e-10 * max(1.0, abs(want))

    @given(re=st.floats(-3.0, 3.0), im=st.floats(-3.0, 3.0))
    @settings(max_examples=80, deadline=None)
    def test_odd(self, re, im):
        z = complex(re, im)
        assert sf.erf_complex(-z) == -sf.erf_complex(z)

    def test_overflow_region(self):
        with pytest.raises(RangeError):
            sf.erf_complex(1.0 + 40.0j)

    def test_tall_imaginary_arguments_supported(self):
        # large e^{-z^2} growth short of overflow stays accurate
        got = sf.erf_complex(1.5 + 10.0j)
        assert got == got  # finite, no NaN
        assert abs(got) > 1e38  # |erf| ~ e^{y^2-x^2} scale


class TestKummer1F1:
    def test_at_zero(self):
        assert sf.kummer_1f1(1, 2, 0.0) == 1.0

    def test_two_term_expansion(self):
        got = sf.kummer_1f1(1, 2, -0.001j)
        assert got.real == pytest.approx(1.0, abs=2e-7)
        assert got.imag == pytest.approx(-0.0005, abs=2e-7)

    def test_vs_beta_integral_oracle(self):
        a, b, z = 2, 4, -0.7j
        got = sf.kummer_1f1(a, b, z)
        assert got == pytest.approx(0.9279156275727151 - 0.33871564486249695j, rel=1e-12)
        beta = sf.factorial(a - 1) * sf.factorial(b - a - 1) / sf.factorial(b - 1)
        res = integrate_finite(
            lambda t: cmath.exp(z * t) * t ** (a - 1.0) * (1.0 - t) ** (b - a - 1.0),
            0.0, 1.0, 1e-13,
        )
        assert abs(got - res.value / beta) <= 1e-10 * abs(got)

    @given(
        a=st.integers(1, 5), delta=st.integers(1, 4),
        re=st.floats(-2.0, 2.0), im=st.floats(-2.0, 2.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_kummer_transform(self, a, delta, re, im):
        b = a + delta
        z = complex(re, im)
        lhs = sf.kummer_1f1(a, b, z)
        rhs = cmath.exp(z) * sf.kummer_1f1(delta, b, -z)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.kummer_1f1(2, 1, 0.5)


class TestHermite:
    def test_low_orders(self):
        assert sf.hermite_h(0, 1.7) == 1.0
        assert sf.hermite_h(1, 1.7) == pytest.approx(3.4)

    def test_degree_four_explicit(self):
        x = 0.5
        assert sf.hermite_h(4, x) == pytest.approx(16 * x**4 - 48 * x**2 + 12, rel=1e-14)
        assert sf.hermite_h(4, 0.5) == pytest.approx(1.0, rel=1e-13)


class TestExpIntegral:
    def test_vs_quadrature_oracle(self):
        got = sf.exp_integral_ei(-1.0)
        res = integrate_semi_infinite(lambda t: math.exp(-t) / t, 1.0, 1e-13)
        assert got == pytest.approx(-res.value.real, rel=1e-12)
        assert got == pytest.approx(-0.21938393439552029, rel=1e-13)

    def test_asymptotic_sign_and_limit(self):
        prev = sf.exp_integral_ei(-5.0)
        for x in (-10.0, -20.0, -40.0):
            cur = sf.exp_integral_ei(x)
            assert prev < cur < 0.0
            prev = cur

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.exp_integral_ei(0.0)
        with pytest.raises(DomainError):
            sf.exp_integral_ei(1.0)


class TestMeijerG:
    def test_j0_is_macdonald_half(self):
        # at j = 0, mu = -1/2 the defining integral collapses to
        # sqrt(pi) e^{-2/sqrt(arg)}
        for arg in (0.5, 4.0, 40.0):
            want = SQRT_PI * math.exp(-2.0 / math.sqrt(arg))
            assert sf.meijer_g_0313(0, -0.5, arg) == pytest.approx(want, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.meijer_g_0313(0, 0.0, -1.0)
        with pytest.raises(DomainError):
            sf.meijer_g_0313(-1, 0.0, 1.0)
