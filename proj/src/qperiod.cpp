#include "fano/qperiod.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fano/lattice.hpp"

namespace fano {

namespace {

int detect_r(const std::vector<BigInt>& a) {
    int g = 0;
    for (std::size_t k = 1; k < a.size(); ++k)
        if (a[k] != 0) g = std::gcd(g, static_cast<int>(k));
    return g == 0 ? 1 : g;
}

}  // namespace

PeriodSeries quantum_period_toric(const ToricFanoModel& model, int n_max, std::size_t max_points_per_degree) {
    const FanData& fan = model.fan;
    const std::size_t m = fan.rays.size(), r = model.rank();
    const auto& cone = fan.max_cones[default_reference_cone(fan)];
    std::vector<bool> in_cone(m, false);
    for (int i : cone) in_cone[i] = true;
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < m; ++i)
        if (!in_cone[i]) outside.push_back(i);
    // alpha_j = D_{outside j} . d; then D.d = W^T d = W^T Wout^{-T} alpha = L alpha
    IntMat wout(r, IntVec(r));
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t j = 0; j < r; ++j) wout[k][j] = model.weight_matrix[k][outside[j]];
    IntMat inv_t = transpose(unimodular_inverse(wout));
    IntMat l = multiply(transpose(model.weight_matrix), inv_t);  // m x r
    IntVec gamma(r, 0);  // c1.d = gamma . alpha
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < m; ++i) gamma[j] += l[i][j];
    std::size_t last = r;
    for (std::size_t j = r; j-- > 0;)
        if (gamma[j] != 0) {
            last = j;
            break;
        }
    if (last == r) throw Error("quantum_period_toric: degenerate anticanonical class");

    std::vector<BigInt> fact(static_cast<std::size_t>(n_max) + 1);
    fact[0] = 1;
    for (int k = 1; k <= n_max; ++k) fact[k] = fact[k - 1] * k;

    PeriodSeries s;
    s.source = "lattice-sum";
    s.a.assign(static_cast<std::size_t>(n_max) + 1, BigInt(0));
    std::vector<std::string> errors(static_cast<std::size_t>(n_max) + 1);
    parallel_for(static_cast<std::size_t>(n_max) + 1, [&](std::size_t deg) {
        const long long n = static_cast<long long>(deg);
        BigInt total = 0;
        std::size_t visited = 0;
        IntVec alpha(r, 0);
        // odometer over the free coordinates, each in [0, n]
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < r; ++j)
            if (j != last) free.push_back(j);
        while (true) {
            long long rest = n;
            for (std::size_t j : free) rest -= gamma[j] * alpha[j];
            if (rest % gamma[last] == 0) {
                alpha[last] = rest / gamma[last];
                if (alpha[last] >= 0 && alpha[last] <= n) {
                    BigInt denom = 1;
                    bool ok = true;
                    for (std::size_t i = 0; i < m && ok; ++i) {
                        long long di = 0;
                        for (std::size_t j = 0; j < r; ++j) di += l[i][j] * alpha[j];
                        if (di < 0 || di > n)
                            ok = false;
                        else
                            denom *= fact[di];
                    }
                    if (ok) total += fact[deg] / denom;
                }
            }
            if (++visited > max_points_per_degree) {
                errors[deg] = "quantum_period_toric: lattice point cap exceeded at degree " + std::to_string(deg);
                return;
            }
            std::size_t p = 0;
            while (p < free.size()) {
                if (++alpha[free[p]] <= n) break;
                alpha[free[p]] = 0;
                ++p;
            }
            if (p == free.size()) break;
        }
        s.a[deg] = total;
    });
    for (const auto& e : errors)
        if (!e.empty()) throw Error(e);
    s.r = detect_r(s.a);
    return s;
}

PeriodSeries period_from_constant_terms(const IntLaurent& f, int n_max) {
    PeriodSeries s;
    s.source = "constant-term";
    s.a = constant_term_series(f, n_max);
    s.r = detect_r(s.a);
    return s;
}

namespace {

struct Fit {
    Eigen::VectorXd beta;
    double rms = 0.0;
};

Fit least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    Fit f;
    f.beta = x.colPivHouseholderQr().solve(y);
    f.rms = std::sqrt((x * f.beta - y).squaredNorm() / static_cast<double>(y.size()));
    return f;
}

std::vector<int> usable_degrees(const PeriodSeries& s, int first_degree) {
    const int n = static_cast<int>(s.size()) - 1;
    if (first_degree <= 0) first_degree = std::max(1, n / 4);
    std::vector<int> ks;
    for (int k = first_degree; k <= n; ++k)
        if (s.a[k] > 0) ks.push_back(k);
    return ks;
}

}  // namespace

GrowthFit t_acon_estimate(const PeriodSeries& s, int first_degree) {
    std::size_t nonzero = 0;
    for (const auto& c : s.a) nonzero += c > 0;
    if (nonzero < 30) throw Error("t_acon_estimate: need at least 30 nonzero coefficients");
    auto ks = usable_degrees(s, first_degree);
    if (ks.size() < 3) throw Error("t_acon_estimate: degenerate fit, coefficients vanish past the prefix");
    Eigen::MatrixXd x(ks.size(), 3);
    Eigen::VectorXd y(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        x(i, 0) = ks[i];
        x(i, 1) = std::log(static_cast<double>(ks[i]));
        x(i, 2) = 1.0;
        y(i) = log_abs(s.a[ks[i]]);
    }
    Fit f = least_squares(x, y);
    GrowthFit g;
    g.T = std::exp(f.beta(0));
    g.exponent = f.beta(1);
    g.intercept = f.beta(2);
    g.residual = f.rms;
    g.points = ks.size();
    return g;
}

LcltFit lclt_check(const PeriodSeries& s, double T_con, int ambient_dim, int first_degree) {
    auto ks = usable_degrees(s, first_degree);
    if (ks.size() < 3) throw Error("lclt_check: not enough nonzero coefficients");
    const double logT = std::log(T_con);
    const double half = 0.5 * ambient_dim;
    Eigen::MatrixXd x(ks.size(), 2), xt(ks.size(), 2);
    Eigen::VectorXd y(ks.size()), yt(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        double k = ks[i], lk = std::log(k);
        double v = log_abs(s.a[ks[i]]) - k * logT;
        x(i, 0) = lk;
        x(i, 1) = 1.0;
        y(i) = v;
        xt(i, 0) = k;
        xt(i, 1) = 1.0;
        yt(i) = v + half * lk;
    }
    Fit loglog = least_squares(x, y);
    Fit trend = least_squares(xt, yt);
    LcltFit out;
    out.loglog_slope = loglog.beta(0);
    out.expected_slope = -half;
    out.trend_slope = trend.beta(0);
    out.constant = std::exp(yt(yt.size() - 1));
    // a wrong T shows up as a linear drift of size |log(T_true / T)| per degree
    out.mismatch = std::abs(out.trend_slope) > 1e-3;
    return out;
}

LcltFit lclt_check(const IntLaurent& f, double T_con, int n_max) {
    PeriodSeries s = period_from_constant_terms(f, n_max);
    return lclt_check(s, T_con, f.nvars);
}

double log_GX(const PeriodSeries& s, double t) {
    if (t <= 0) throw Error("log_GX requires t > 0");
    const double lt = std::log(t);
    std::vector<double> logs;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < s.size(); ++n) {
        if (s.a[n] == 0) continue;
        double v = log_abs(s.a[n]) + static_cast<double>(n) * lt - std::lgamma(static_cast<double>(n) + 1.0);
        logs.push_back(v);
        best = std::max(best, v);
    }
    if (logs.empty()) throw Error("log_GX: empty series");
    if (logs.back() > best + std::log(1e-20))
        throw Error("log_GX: series truncated too early for t = " + std::to_string(t));
    double sum = 0.0;
    for (double v : logs) sum += std::exp(v - best);
    return best + std::log(sum);
}

double growth_rate_GX(const PeriodSeries& s, const std::vector<double>& t_grid) {
    if (t_grid.size() < 3) throw Error("growth_rate_GX: need at least three grid points");
    const double tmax = *std::max_element(t_grid.begin(), t_grid.end());
    std::vector<double> ts;
    for (double t : t_grid)
        if (t >= tmax / 10.0) ts.push_back(t);
    Eigen::MatrixXd x(ts.size(), 3);
    Eigen::VectorXd y(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        x(i, 0) = ts[i];
        x(i, 1) = std::log(ts[i]);
        x(i, 2) = 1.0;
        y(i) = log_GX(s, ts[i]);
    }
    return least_squares(x, y).beta(0);
}

std::string series_csv(const PeriodSeries& s) {
    std::ostringstream os;
    os << "n,a_n\r\n";
    for (std::size_t n = 0; n < s.size(); ++n) os << n << "," << s.a[n].str() << "\r\n";
    return os.str();
}

}  // namespace fano
