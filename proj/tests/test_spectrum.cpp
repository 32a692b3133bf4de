#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fano/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

using namespace fano;

namespace {

std::vector<cplx> eigen_oracle(const Eigen::MatrixXcd& a) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    std::vector<cplx> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return v;
}

SpectrumReport xn_report(int n) {
    const auto red = family_reduction_xn(n);
    const auto con = conifold_point(superpotential(family_xn(n), QPoint::ones(2)));
    const double T = con.value.real();
    return make_report(red.values, 1, T, T, &con, {}, "critical-values");
}

}  // namespace

TEST_CASE("QR eigenvalues of small matrices") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 3.0;
    CHECK(matching_distance(eigenvalues_qr(d), {1.0, 2.0, 3.0}) < 1e-14);
    const auto cl = cluster_by_radius(eigenvalues_qr(d));
    CHECK(cl.size() == 3);
    for (const auto& c : cl) CHECK(c.multiplicity() == 1);

    // companion matrix of t^3 - 1
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 3);
    c(1, 0) = 1.0;
    c(2, 1) = 1.0;
    c(0, 2) = 1.0;
    const cplx w = std::polar(1.0, 2 * M_PI / 3);
    CHECK(matching_distance(eigenvalues_qr(c), {1.0, w, w * w}) < 1e-14);
}

TEST_CASE("QR eigenvalues match an independent solver on random matrices") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int size : {2, 5, 9, 16}) {
        Eigen::MatrixXcd a(size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) a(i, j) = cplx(g(rng), g(rng));
        CHECK(matching_distance(eigenvalues_qr(a), eigen_oracle(a)) < 1e-10);
    }
}

TEST_CASE("clustering") {
    const std::vector<cplx> v{1.0, 1.0 + 1e-9, 5.0, 5.0 - 1e-9, 5.0 + cplx(0, 1e-9), -3.0};
    const auto c = cluster_by_radius(v, 1e-6);
    REQUIRE(c.size() == 3);
    CHECK(c[0].multiplicity() == 3);  // sorted by real part, largest first
    CHECK(c[2].multiplicity() == 1);
    const auto two = cluster_into({0.0, 0.1, 10.0, 10.2, 10.1}, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].multiplicity() == 3);
}

TEST_CASE("Batyrev matrix eigenvalues are the critical values") {
    for (int n = 1; n <= 6; ++n)
        for (auto q : {std::pair<double, double>{1, 1}, {2, 0.5}, {0.3, 3}}) {
            const auto eig = eigenvalues_qr(batyrev_matrix_xn(n, q.first, q.second));
            const auto red = family_reduction_xn(n, q.first, q.second);
            CHECK(matching_distance(eig, red.values) < 1e-8);
        }
}

TEST_CASE("Batyrev matrix: classical limit, trace, census") {
    const auto m0 = batyrev_matrix_xn(3, 0.0, 0.0);
    for (auto u : eigenvalues_qr(m0)) CHECK(std::abs(u) < 1e-6);
    CHECK((m0 * m0 * m0 * m0 * m0 * m0 * m0 * m0).norm() < 1e-12);

    for (int n = 2; n <= 5; ++n) {
        const auto s = critical_points_all(superpotential(family_xn(n), QPoint::ones(2)), 2 * n + 2);
        REQUIRE(s.complete());
        cplx sum = 0.0;
        for (const auto& p : s.points) sum += p.value;
        CHECK(std::abs(batyrev_matrix_xn(n, 1.0, 1.0).trace() - sum) < 1e-9 * std::max(1.0, std::abs(sum)));
    }

    const auto e4 = eigenvalues_qr(batyrev_matrix_xn(4, 1.0, 1.0));
    CHECK(e4.size() == 10);
    int real = 0;
    for (auto u : e4) real += std::abs(u.imag()) < 1e-8 * std::max(1.0, std::abs(u));
    CHECK(real == 2);
}

TEST_CASE("tolerance bands") {
    const Tolerances tol;
    CHECK(strictly_positive(1e-3, 1.0, tol) == Tri::True);
    CHECK(strictly_positive(-1.0, 1.0, tol) == Tri::False);
    CHECK(strictly_positive(1e-8, 1.0, tol) == Tri::Indeterminate);
    CHECK(approx_equal(1e-12, 1.0, tol) == Tri::True);
    CHECK(approx_equal(1e-3, 1.0, tol) == Tri::False);
    CHECK(approx_equal(1e-8, 1.0, tol) == Tri::Indeterminate);
}

TEST_CASE("flags of X_3 and X_4") {
    const auto r3 = xn_report(3);
    CHECK(r3.flags.property_O1.value == Tri::False);
    CHECK(r3.flags.condition_star.value == Tri::True);
    CHECK(std::abs(r3.rho_prime - r3.T_con) < 1e-9 * r3.T_con);
    CHECK(r3.flags.property_OA.value == Tri::True);

    const auto r4 = xn_report(4);
    CHECK(r4.flags.property_O1.value == Tri::True);
    CHECK(r4.flags.property_O2.value == Tri::True);
    CHECK(r4.flags.property_OA.value == Tri::False);
    CHECK(r4.rho_prime > 255.0);
    CHECK(r4.rho_prime < 256.0);
}

TEST_CASE("flags of X_n for n = 1..8") {
    for (int n = 1; n <= 8; ++n) {
        const auto r = xn_report(n);
        const bool o = n % 2 == 0 || n == 1;
        CHECK(r.flags.conjecture_O() == tri(o));
        CHECK(r.flags.condition_star.value == Tri::True);
        CHECK(r.flags.property_OA.value == tri(n % 2 == 1 || n <= 2));
        unsigned total = 0;
        for (const auto& c : r.eigenvalues) total += c.multiplicity();
        CHECK(total == 2u * n + 2);
        for (const auto& c : r.eigenvalues) CHECK(std::abs(c.value) <= r.rho + 1e-12);
    }
}

TEST_CASE("flags of P2") {
    const auto f = to_complex(parse_laurent("x1 + x2 + x1^-1*x2^-1", 2));
    const auto con = conifold_point(f);
    const auto s = critical_points_all(f, 3);
    REQUIRE(s.complete());
    std::vector<cplx> v;
    for (const auto& p : s.points) v.push_back(p.value);
    const auto r = make_report(v, 3, 3.0, 3.0, &con, s.points, "critical-values");
    CHECK(r.flags.property_O1.value == Tri::True);
    CHECK(r.flags.property_O2.value == Tri::True);
    CHECK(r.flags.condition_star.value == Tri::True);
    CHECK(r.flags.property_OA.value == Tri::True);
    CHECK(r.flags.B_analogue_a.value == Tri::True);
    CHECK(r.flags.B_analogue_b.value == Tri::True);
}
