#pragma once

#include "fano/laurent.hpp"
#include "fano/toric.hpp"

namespace fano {

struct PeriodSeries {
    std::vector<BigInt> a;  // a_0..a_N, regularized period coefficients
    int r = 1;              // gcd of the degrees with a_n != 0
    std::string source;     // "lattice-sum" or "constant-term"
    std::size_t size() const { return a.size(); }
};

// a_n = sum over curve classes d with c1.d = n and D_i.d >= 0 of n! / prod (D_i.d)!
PeriodSeries quantum_period_toric(const ToricFanoModel& model, int n_max,
                                  std::size_t max_points_per_degree = 50'000'000);
PeriodSeries period_from_constant_terms(const IntLaurent& f, int n_max);

struct GrowthFit {
    double T = 0.0;          // exp of the slope of the degree regressor
    double exponent = 0.0;   // coefficient of log(degree)
    double intercept = 0.0;
    double residual = 0.0;   // RMS of the fit
    std::size_t points = 0;
};

// Least squares of log a_k against [k, log k, 1] over nonzero coefficients
// with k >= first_degree (0 picks the last three quarters of the series).
GrowthFit t_acon_estimate(const PeriodSeries& s, int first_degree = 0);

struct LcltFit {
    double constant = 0.0;       // limit of a_k T^{-k} k^{m/2}
    double trend_slope = 0.0;    // slope of log(a_k T^{-k} k^{m/2}) in k, should vanish
    double loglog_slope = 0.0;   // slope of log(a_k T^{-k}) against log k, predicted -m/2
    double expected_slope = 0.0;
    bool mismatch = false;       // T inconsistent with the growth of a_k
};

LcltFit lclt_check(const PeriodSeries& s, double T_con, int ambient_dim, int first_degree = 0);
LcltFit lclt_check(const IntLaurent& f, double T_con, int n_max);

// log G(t) for G(t) = sum a_n t^n / n!; throws if the series is not converged at t.
double log_GX(const PeriodSeries& s, double t);
// Slope of log G_X over the top decade of t_grid, with a log t regressor.
double growth_rate_GX(const PeriodSeries& s, const std::vector<double>& t_grid);

std::string series_csv(const PeriodSeries& s);

}  // namespace fano
