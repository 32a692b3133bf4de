#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fano/laurent.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <cmath>

using namespace fano;

namespace {

Exponent ex(std::initializer_list<int> v) { return Exponent(v); }

// Cst((x + y + 1/(xy))^k) by summing multinomials over a = b = c = k/3
BigInt p2_oracle(int k) {
    if (k % 3) return 0;
    const int m = k / 3;
    BigInt num = 1, den = 1;
    for (int i = 2; i <= k; ++i) num *= i;
    for (int i = 2; i <= m; ++i) den *= i;
    return num / (den * den * den);
}

}  // namespace

TEST_CASE("X_n mirror at q = 1") {
    for (int n = 1; n <= 5; ++n) {
        const auto f = mirror_polynomial(family_xn(n));
        CHECK(f.nvars == n + 1);
        CHECK(f.terms.size() == static_cast<std::size_t>(n + 3));
        for (int i = 0; i <= n; ++i) {
            Exponent e(n + 1, 0);
            e[i] = 1;
            CHECK(f.coefficient(e) == 1);
        }
        Exponent b(n + 1, -1);
        b[n] = n;
        CHECK(f.coefficient(b) == 1);
        Exponent inv(n + 1, 0);
        inv[n] = -1;
        CHECK(f.coefficient(inv) == 1);
        CHECK(is_convenient(f));
    }
}

TEST_CASE("X_n mirror carries q1 on the twisted term and q2 on 1/y") {
    const int n = 3;
    const auto f = superpotential(family_xn(n), QPoint::from({2.0, 5.0}));
    CHECK(f.coefficient(ex({-1, -1, -1, 3})) == cplx(2.0));
    CHECK(f.coefficient(ex({0, 0, 0, -1})) == cplx(5.0));
    CHECK(f.coefficient(ex({0, 0, 0, 1})) == cplx(1.0));
    CHECK(f.coefficient(ex({1, 0, 0, 0})) == cplx(1.0));
}

TEST_CASE("P1 mirror is x + 1/x") {
    const auto f = mirror_polynomial(projective_space(1));
    CHECK(f.terms.size() == 2);
    CHECK(f.coefficient(ex({1})) == 1);
    CHECK(f.coefficient(ex({-1})) == 1);
}

TEST_CASE("parse and print") {
    const auto f = parse_laurent("x1 + 3*x1^-1*x2^2 + x2^-1", 2);
    CHECK(f.coefficient(ex({1, 0})) == 1);
    CHECK(f.coefficient(ex({-1, 2})) == 3);
    CHECK(f.coefficient(ex({0, -1})) == 1);
    CHECK(parse_laurent(to_string(f), 2).terms == f.terms);
    CHECK_THROWS(parse_laurent("x3", 2));
}

TEST_CASE("convenience predicate") {
    CHECK(is_convenient(std::vector<Exponent>{ex({1}), ex({-1})}));
    CHECK_FALSE(is_convenient(std::vector<Exponent>{ex({1}), ex({2})}));
    CHECK_FALSE(is_convenient(std::vector<Exponent>{ex({1, 0}), ex({0, 1}), ex({-1, 0})}));
    CHECK(is_convenient(std::vector<Exponent>{ex({1, 0}), ex({0, 1}), ex({-1, -1})}));
}

TEST_CASE("log-coordinate evaluation") {
    LogTable p1(to_complex(parse_laurent("x1 + x1^-1", 1)));
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(1);
    CHECK(std::abs(eval_log(p1, w) - 2.0) < 1e-15);
    CHECK(grad_log(p1, w).norm() < 1e-15);
    CHECK(std::abs(hess_log(p1, w)(0, 0) - 2.0) < 1e-15);

    LogTable p2(to_complex(parse_laurent("x1 + x2 + x1^-1*x2^-1", 2)));
    Eigen::VectorXcd w2 = Eigen::VectorXcd::Zero(2);
    CHECK(std::abs(eval_log(p2, w2) - 3.0) < 1e-15);
    CHECK(grad_log(p2, w2).norm() < 1e-15);

    // gradient against central differences at a generic complex point
    LogTable x2(superpotential(family_xn(2), QPoint::from({1.3, 0.7})));
    Eigen::VectorXcd z(3);
    z << cplx(0.1, 0.2), cplx(-0.3, 0.05), cplx(0.2, -0.1);
    const auto g = grad_log(x2, z);
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k) {
        Eigen::VectorXcd zp = z, zm = z;
        zp(k) += h;
        zm(k) -= h;
        const cplx fd = (eval_log(x2, zp) - eval_log(x2, zm)) / (2 * h);
        CHECK(std::abs(fd - g(k)) < 1e-8);
    }
}

TEST_CASE("constant terms") {
    const auto p1 = parse_laurent("x1 + x1^-1", 1);
    CHECK(power_constant_term(p1, 6) == 20);
    const auto p2 = parse_laurent("x1 + x2 + x1^-1*x2^-1", 2);
    CHECK(power_constant_term(p2, 3) == 6);
    CHECK(power_constant_term(p2, 6) == 90);
    const auto series = constant_term_series(p2, 15);
    for (int k = 0; k <= 15; ++k) CHECK(series[k] == p2_oracle(k));
    const auto s1 = constant_term_series(p1, 20);
    for (int k = 0; k <= 10; ++k)
        CHECK(s1[2 * k] == BigInt(boost::math::binomial_coefficient<double>(2 * k, k)));
}

TEST_CASE("period of nonvanishing") {
    CHECK(r_of_f(parse_laurent("x1 + x1^-1", 1), 12).r == 2);
    CHECK(r_of_f(parse_laurent("x1 + x2 + x1^-1*x2^-1", 2), 12).r == 3);
    for (int n = 1; n <= 3; ++n) {
        const auto res = r_of_f(mirror_polynomial(family_xn(n)), 12);
        CHECK(res.r == 1);
        CHECK(res.pattern_holds);
    }
}

TEST_CASE("log_abs of big integers") {
    BigInt x = 1;
    for (int i = 0; i < 2000; ++i) x *= 10;
    CHECK(std::abs(log_abs(x) - 2000 * std::log(10.0)) < 1e-9);
}
