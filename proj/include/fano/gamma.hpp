#pragma once

#include "fano/hp.hpp"
#include "fano/qperiod.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fano {

// H*(X_n) with basis p1^i p2^j, 0 <= i <= n, 0 <= j <= 1, stored at i + (n+1) j.
// p2 = H, E = p2 - n p1, relations p1^{n+1} = 0 and p2^2 = n p1 p2.
// The top class is p1^n p2 with integral 1.
struct CohomologyRing {
    int n = 1;

    explicit CohomologyRing(int n_);
    std::size_t dim() const { return static_cast<std::size_t>(2 * n + 2); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i + (n + 1) * j); }
    int degree(std::size_t k) const;  // complex degree of the basis monomial
};

using CohomologyClass = std::vector<hp::Complex>;

CohomologyClass ring_zero(const CohomologyRing& R);
CohomologyClass ring_one(const CohomologyRing& R);
CohomologyClass ring_p1(const CohomologyRing& R);
CohomologyClass ring_p2(const CohomologyRing& R);
CohomologyClass ring_E(const CohomologyRing& R);
CohomologyClass ring_c1(const CohomologyRing& R);
CohomologyClass ring_mul(const CohomologyRing& R, const CohomologyClass& a, const CohomologyClass& b);
CohomologyClass ring_add(const CohomologyClass& a, const CohomologyClass& b);
CohomologyClass ring_scale(const CohomologyClass& a, const hp::Complex& s);
// exp of a class with nilpotent part; the scalar part is exponentiated when real.
CohomologyClass ring_exp(const CohomologyRing& R, const CohomologyClass& a);
hp::Complex integral(const CohomologyRing& R, const CohomologyClass& a);
// <a, b> = integral of a b
hp::Complex pairing(const CohomologyRing& R, const CohomologyClass& a, const CohomologyClass& b);
// <a, [pt]> = degree-0 coefficient
hp::Complex pairing_pt(const CohomologyClass& a);

// Constants at the current hp precision, by Euler-Maclaurin.
hp::Real euler_gamma_constant();
hp::Real zeta_value(int k);  // k >= 2

CohomologyClass gamma_class_xn(int n);
CohomologyClass gamma_class_xn(int n, unsigned digits);
// Ch(O_E(-m)) = e^{-2 pi i m p1} (1 - e^{-2 pi i E})
CohomologyClass ch_OE(int n, int m);

struct JInfo {
    long d1_min = 0, d1_max = 0, d2_max = 0;
    long degree_cap = 0;          // largest d1 + 2 d2 retained
    std::size_t terms = 0;
    double log_max_term = 0.0;    // natural log of the largest term estimate
    double log_first_dropped = 0.0;
    double cancellation_digits = 0.0;
};

struct JOptions {
    double window_digits = 0.0;   // 0: working digits + 15
    bool include_exp_tau = true;  // the e^{tau + c1 log t} factor
    double min_result_digits = 15.0;  // digits that must survive cancellation
};

struct PrecisionError : std::runtime_error {
    PrecisionError(const std::string& what, double cancellation_digits)
        : std::runtime_error(what), cancellation(cancellation_digits) {}
    double cancellation;
};

// J(tau + c1 log t, 1), tau = log q1 p1 + log q2 p2, at the current hp precision.
// Throws if the cancellation sentinel trips.
CohomologyClass j_series_xn(int n, double q1, double q2, double t, JInfo* info = nullptr,
                            const JOptions& opt = {});

// Scalar G_X(t) = sum a_k t^k / k! at the current precision.
hp::Real period_value(const PeriodSeries& s, double t);

// sin of the angle between the complex lines spanned by a and b, as an angle in radians
double class_angle(const CohomologyClass& a, const CohomologyClass& b);
std::vector<double> unit_direction(const CohomologyClass& a);  // real parts; a is real here

struct LimitSample {
    double t = 0.0;
    std::vector<double> direction;
    double angle_to_gamma = 0.0;
    double angle_to_gamma_ch = -1.0;  // -1 when n is odd
    JInfo info;
};

struct PrincipalLimit {
    int n = 0;
    double q1 = 1.0, q2 = 1.0;
    unsigned digits = 60;
    std::vector<LimitSample> samples;
    std::vector<double> direction;  // extrapolated in 1/t
    double extrapolation_error = 0.0;
    double angle_to_gamma = 0.0;
    double angle_to_gamma_ch = -1.0;
    bool converging = true;         // successive angle increments shrink
    std::vector<double> increments;
};

std::vector<double> default_t_schedule();
PrincipalLimit principal_class_limit(int n, double q1, double q2,
                                     const std::vector<double>& t_schedule, unsigned digits = 60);

}  // namespace fano
