#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fano/critical.hpp"
#include "fano/qperiod.hpp"

#include <cmath>

using namespace fano;

namespace {

double t_con(const ToricFanoModel& m) {
    return conifold_point(superpotential(m, QPoint::ones(m.rank()))).value.real();
}

std::vector<double> grid(double lo, double hi, int count) {
    std::vector<double> g;
    for (int i = 0; i < count; ++i) g.push_back(lo + (hi - lo) * i / (count - 1));
    return g;
}

}  // namespace

TEST_CASE("period coefficients of P1 and P2") {
    const auto p1 = quantum_period_toric(projective_space(1), 40);
    CHECK(p1.r == 2);
    BigInt c = 1;  // C(2k, k)
    for (int k = 0; k <= 20; ++k) {
        CHECK(p1.a[2 * k] == c);
        if (2 * k + 1 <= 40) CHECK(p1.a[2 * k + 1] == 0);
        c = c * (2 * k + 1) * (2 * k + 2) / ((k + 1) * (k + 1));
    }
    CHECK(p1.a[2] == 2);

    const auto p2 = quantum_period_toric(projective_space(2), 30);
    CHECK(p2.r == 3);
    const auto f = mirror_polynomial(projective_space(2));
    CHECK(p2.a[3] == 6);
    CHECK(p2.a[6] == 90);
    for (int k = 0; k <= 15; ++k) CHECK(p2.a[k] == power_constant_term(f, k));
}

TEST_CASE("lattice sum agrees with constant terms for X_n") {
    for (int n = 1; n <= 4; ++n) {
        const auto s = quantum_period_toric(family_xn(n), 12);
        const auto ct = period_from_constant_terms(mirror_polynomial(family_xn(n)), 12);
        CHECK(s.r == 1);
        for (int k = 0; k <= 12; ++k) CHECK(s.a[k] == ct.a[k]);
    }
}

TEST_CASE("growth rate of the period coefficients") {
    const auto p1 = t_acon_estimate(quantum_period_toric(projective_space(1), 400));
    CHECK(std::abs(p1.T - 2.0) < 0.02);
    CHECK(std::abs(p1.exponent + 0.5) < 0.05);
    CHECK(std::abs(t_acon_estimate(quantum_period_toric(projective_space(2), 400)).T - 3.0) < 0.03);
    for (int n = 1; n <= 4; ++n) {
        const auto m = family_xn(n);
        const double T = t_con(m);
        CHECK(std::abs(t_acon_estimate(quantum_period_toric(m, 400)).T - T) < 0.01 * T);
    }
    CHECK_THROWS_AS(t_acon_estimate(quantum_period_toric(projective_space(2), 20)), Error);
}

TEST_CASE("local central limit exponent") {
    const auto l1 = lclt_check(quantum_period_toric(projective_space(1), 400), 2.0, 1);
    CHECK(std::abs(l1.loglog_slope + 0.5) < 0.05 * 0.5);
    CHECK_FALSE(l1.mismatch);
    const auto l2 = lclt_check(quantum_period_toric(projective_space(2), 400), 3.0, 2);
    CHECK(std::abs(l2.loglog_slope + 1.0) < 0.05);
    const auto x2 = family_xn(2);
    const auto l3 = lclt_check(quantum_period_toric(x2, 400), t_con(x2), 3);
    CHECK(l3.expected_slope == -1.5);
    CHECK(std::abs(l3.loglog_slope + 1.5) < 0.08 * 1.5);
    // a wrong T shows up as a trend
    CHECK(lclt_check(quantum_period_toric(projective_space(2), 400), 3.1, 2).mismatch);
}

TEST_CASE("growth of G_X(t)") {
    const auto ts = grid(10, 30, 21);
    CHECK(std::abs(growth_rate_GX(quantum_period_toric(projective_space(1), 300), ts) - 2.0) < 0.04);
    CHECK(std::abs(growth_rate_GX(quantum_period_toric(projective_space(2), 300), ts) - 3.0) < 0.06);
    const auto x3 = family_xn(3);
    const double T = t_con(x3);
    CHECK(std::abs(growth_rate_GX(quantum_period_toric(x3, 400), ts) - T) < 0.02 * T);
    // 20 terms cannot represent G at t = 30
    CHECK_THROWS_AS(log_GX(quantum_period_toric(projective_space(1), 20), 30.0), Error);
}

TEST_CASE("series CSV") {
    const auto csv = series_csv(quantum_period_toric(projective_space(1), 4));
    CHECK(csv == "n,a_n\r\n0,1\r\n1,0\r\n2,2\r\n3,0\r\n4,6\r\n");
}
