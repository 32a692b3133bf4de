#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fano/gamma.hpp"
#include "fano/toric.hpp"

#include <cmath>

using namespace fano;

namespace {

double rel(const hp::Real& a, const hp::Real& b) { return std::abs(((a - b) / b).to_double()); }

double dist(const CohomologyClass& a, const CohomologyClass& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, hp::abs(a[i] - b[i]).to_double());
    return d;
}

CohomologyClass power(const CohomologyRing& R, const CohomologyClass& a, int k) {
    auto r = ring_one(R);
    for (int i = 0; i < k; ++i) r = ring_mul(R, r, a);
    return r;
}

}  // namespace

TEST_CASE("constants agree with MPFR") {
    hp::PrecisionScope scope(60);
    hp::Real ref;
    mpfr_const_euler(ref.get(), MPFR_RNDN);
    CHECK(rel(euler_gamma_constant(), ref) < 1e-55);
    for (int k = 2; k <= 8; ++k) {
        mpfr_zeta_ui(ref.get(), k, MPFR_RNDN);
        CHECK(rel(zeta_value(k), ref) < 1e-55);
    }
}

TEST_CASE("cohomology ring relations") {
    hp::PrecisionScope scope(30);
    for (int n = 1; n <= 5; ++n) {
        const CohomologyRing R(n);
        const auto p1 = ring_p1(R), p2 = ring_p2(R), E = ring_E(R);
        CHECK(dist(power(R, p1, n + 1), ring_zero(R)) == 0.0);
        CHECK(dist(ring_mul(R, p2, p2), ring_scale(ring_mul(R, p1, p2), hp::Complex(n))) == 0.0);
        CHECK(dist(ring_mul(R, E, E), ring_scale(ring_mul(R, p1, E), hp::Complex(-n))) == 0.0);
        CHECK(integral(R, ring_mul(R, power(R, p1, n), p2)).re.to_double() == 1.0);
        // (-K)^{n+1} = ((2n+1)^{n+1} - 1) / n by the binomial expansion of (p1 + 2 p2)^{n+1}
        const double deg = (std::pow(2.0 * n + 1, n + 1) - 1) / n;
        CHECK(integral(R, power(R, ring_c1(R), n + 1)).re.to_double() == doctest::Approx(deg));

        // the pairing matrix is nondegenerate: p1^i p2^j pairs with p1^{n-i} p2^{1-j} to 1
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= 1; ++j) {
                auto a = ring_zero(R), b = ring_zero(R);
                a[R.index(i, j)] = 1.0;
                b[R.index(n - i, 1 - j)] = 1.0;
                CHECK(pairing(R, a, b).re.to_double() == 1.0);
            }
    }
}

TEST_CASE("gamma class: low-degree terms") {
    hp::PrecisionScope scope(40);
    for (int n = 1; n <= 4; ++n) {
        const CohomologyRing R(n);
        const auto g = gamma_class_xn(n);
        CHECK(dist({g[0]}, {hp::Complex(1.0)}) < 1e-35);
        const hp::Real gam = euler_gamma_constant();
        CHECK(rel(g[R.index(1, 0)].re, -gam) < 1e-35);
        CHECK(rel(g[R.index(0, 1)].re, -2 * gam) < 1e-35);
        for (const auto& c : g) CHECK(hp::abs(c.im).to_double() < 1e-35);
    }
}

TEST_CASE("Ch(O_E(-m)) against its exponential series") {
    hp::PrecisionScope scope(40);
    for (int n = 2; n <= 4; ++n) {
        const CohomologyRing R(n);
        const hp::Complex two_pi_i(0.0, 2 * hp::pi());
        // m = 0: 1 - e^{-2 pi i E} = -sum_{k>=1} (-2 pi i E)^k / k!
        const auto x = ring_scale(ring_E(R), -two_pi_i);
        auto series = ring_zero(R), term = ring_one(R);
        for (int k = 1; k <= n + 1; ++k) {
            term = ring_scale(ring_mul(R, term, x), hp::Complex(hp::Real(1) / hp::Real(k)));
            series = ring_add(series, ring_scale(term, hp::Complex(-1.0)));
        }
        CHECK(dist(ch_OE(n, 0), series) < 1e-30);
        CHECK(hp::abs(ch_OE(n, 0)[0]).to_double() == 0.0);
        // the twist multiplies by e^{-2 pi i m p1}
        const auto twist = ring_exp(R, ring_scale(ring_p1(R), -two_pi_i * hp::Complex(2.0)));
        CHECK(dist(ch_OE(n, 2), ring_mul(R, twist, series)) < 1e-28);
        // Ch(O_E) has rank zero, so it pairs to zero with the point class
        CHECK(hp::abs(pairing_pt(ring_mul(R, gamma_class_xn(n), ch_OE(n, n / 2)))).to_double() == 0.0);
    }
}

TEST_CASE("degree-0 coefficient of J is the quantum period") {
    hp::PrecisionScope scope(60);
    for (int n = 1; n <= 4; ++n) {
        const auto ps = quantum_period_toric(family_xn(n), 300);
        const auto J = j_series_xn(n, 1.0, 1.0, 5.0);
        CHECK(rel(J[0].re, period_value(ps, 5.0)) < 1e-10);
        // small t: J -> 1 in degree 0
        const auto Js = j_series_xn(n, 1.0, 1.0, 0.01);
        CHECK(rel(Js[0].re, period_value(ps, 0.01)) < 1e-30);
    }
}

TEST_CASE("period value is the exponential sum of the coefficients") {
    hp::PrecisionScope scope(30);
    const auto p1 = quantum_period_toric(projective_space(1), 200);
    // G_{P1}(t) = sum C(2k,k) t^{2k} / (2k)! = I_0(2t)
    double direct = 0.0, term = 1.0;  // t^{2k} / (k!)^2
    for (int k = 0; k <= 30; ++k) {
        direct += term;
        term *= 1.5 * 1.5 / ((k + 1.0) * (k + 1.0));
    }
    CHECK(period_value(p1, 1.5).to_double() == doctest::Approx(direct).epsilon(1e-14));
    CHECK(period_value(p1, 1.5).to_double() == doctest::Approx(std::cyl_bessel_i(0.0, 3.0)).epsilon(1e-14));
}

TEST_CASE("J is insensitive to a deeper truncation window") {
    hp::PrecisionScope scope(60);
    JOptions deep;
    deep.window_digits = 150;
    for (int n : {2, 4}) {
        const auto a = j_series_xn(n, 1.0, 1.0, 20.0);
        const auto b = j_series_xn(n, 1.0, 1.0, 20.0, nullptr, deep);
        CHECK(class_angle(a, b) < 1e-12);
    }
}

TEST_CASE("class angle") {
    hp::PrecisionScope scope(30);
    const CohomologyRing R(2);
    const auto g = gamma_class_xn(2);
    CHECK(class_angle(g, ring_scale(g, hp::Complex(-3.5))) < 1e-25);
    CHECK(std::abs(class_angle(ring_one(R), ring_p1(R)) - M_PI / 2) < 1e-12);
    const auto d = unit_direction(g);
    double norm = 0.0;
    for (double x : d) norm += x * x;
    CHECK(norm == doctest::Approx(1.0));
}

TEST_CASE("principal direction of X_2 is the gamma class") {
    const auto L = principal_class_limit(2, 1.0, 1.0, default_t_schedule(), 60);
    CHECK(L.converging);
    CHECK(L.angle_to_gamma < 1e-8);
    CHECK(L.samples.size() == default_t_schedule().size());
    // the raw samples approach it too, more slowly
    CHECK(L.samples.back().angle_to_gamma < L.samples.front().angle_to_gamma);
    CHECK(L.angle_to_gamma_ch >= 0.0);

    // the Euler flow (q1, q2) -> (e^s q1, e^{2s} q2) rescales t and leaves the limit alone
    const double s = 0.3;
    const auto M = principal_class_limit(2, std::exp(s), std::exp(2 * s), default_t_schedule(), 60);
    double d = 0.0;
    for (std::size_t i = 0; i < L.direction.size(); ++i) d = std::max(d, std::abs(L.direction[i] - M.direction[i]));
    CHECK(d < 1e-8);
}

TEST_CASE("principal direction of X_3 is the gamma class") {
    const auto L = principal_class_limit(3, 1.0, 1.0, default_t_schedule(), 60);
    CHECK(L.angle_to_gamma < 1e-6);
    CHECK(L.angle_to_gamma_ch < 0.0);
}

TEST_CASE("X_4: the limit class follows the rightmost eigenvalue") {
    // below the T_+/T_- crossing T_- is rightmost and J tends to Gamma * Ch(O_E(-2))
    const auto low = principal_class_limit(4, 1.0, 1.0, default_t_schedule(), 60);
    CHECK(low.angle_to_gamma_ch < 1e-8);
    CHECK(low.angle_to_gamma > 0.5);
    // beyond it T_+ is rightmost and the limit is the Gamma class
    const auto high = principal_class_limit(4, 1.0, 1e4, default_t_schedule(), 60);
    CHECK(high.converging);
    CHECK(high.angle_to_gamma < 1e-8);
    CHECK(high.angle_to_gamma_ch > 0.5);
}
