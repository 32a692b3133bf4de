#include "fano/moduli.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace fano {

namespace {

ScanPoint evaluate(int n, double q1, double q2) {
    UnivariateReduction r = family_reduction_xn(n, q1, q2);
    ScanPoint p;
    p.q1 = q1;
    p.q2 = q2;
    p.values = r.values;
    double scale = 1.0;
    for (const auto& u : r.values) scale = std::max(scale, std::abs(u));
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        if (std::abs(r.values[i].imag()) <= 1e-9 * scale) ++p.real_count;
        if (r.roots[i].imag() == 0.0) (r.roots[i].real() > 0 ? p.t_plus : p.t_minus) = static_cast<int>(i);
    }
    return p;
}

// Assignment of b's entries to a's branches; ambiguous when some branch has
// two candidates at comparable distance.
std::vector<int> assign(const std::vector<cplx>& a, const std::vector<cplx>& b, bool* ambiguous) {
    std::vector<int> match;
    matching_distance(a, b, &match);
    *ambiguous = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::abs(a[i] - b[match[i]]);
        for (std::size_t j = 0; j < b.size(); ++j)
            if (static_cast<int>(j) != match[i] && std::abs(a[i] - b[j]) < 2.0 * d + 1e-12 * std::abs(a[i]))
                *ambiguous = true;
    }
    return match;
}

void permute(ScanPoint& p, const std::vector<int>& match) {
    std::vector<cplx> v(p.values.size());
    int tp = -1, tm = -1;
    for (std::size_t i = 0; i < match.size(); ++i) {
        v[i] = p.values[match[i]];
        if (match[i] == p.t_plus) tp = static_cast<int>(i);
        if (match[i] == p.t_minus) tm = static_cast<int>(i);
    }
    p.values = v;
    p.t_plus = tp;
    p.t_minus = tm;
}

// Appends the points in (a, b] to out, matched to a, refining by halving.
void extend(int n, const ScanPoint& a, ScanPoint b, int depth, std::vector<ScanPoint>& out) {
    bool amb = false;
    auto match = assign(a.values, b.values, &amb);
    if (amb && depth < 6) {
        ScanPoint mid = evaluate(n, a.q1, std::sqrt(a.q2 * b.q2));
        mid.refined = true;
        extend(n, a, mid, depth + 1, out);
        extend(n, out.back(), b, depth + 1, out);
        return;
    }
    permute(b, match);
    b.ambiguous = amb;
    out.push_back(b);
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (count < 2 || lo <= 0 || hi <= lo) throw Error("log_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) / (count - 1.0));
    return g;
}

RayScan scan_ray(int n, double q1, const std::vector<double>& q2_grid) {
    if (!(q1 > 0)) throw Error("scan_ray requires q1 > 0");
    if (q2_grid.empty()) throw Error("scan_ray: empty grid");
    for (std::size_t i = 0; i < q2_grid.size(); ++i)
        if (!(q2_grid[i] > 0) || (i > 0 && q2_grid[i] <= q2_grid[i - 1]))
            throw Error("scan_ray: grid must be positive and increasing");
    std::vector<ScanPoint> raw(q2_grid.size());
    parallel_for(raw.size(), [&](std::size_t i) { raw[i] = evaluate(n, q1, q2_grid[i]); });
    RayScan scan;
    scan.n = n;
    scan.q1 = q1;
    scan.points.push_back(raw[0]);
    for (std::size_t i = 1; i < raw.size(); ++i) {
        ScanPoint prev = scan.points.back();
        extend(n, prev, raw[i], 0, scan.points);
    }
    scan.min_separation = std::numeric_limits<double>::infinity();
    for (const auto& p : scan.points) {
        if (p.real_count != 2 || p.t_plus < 0 || p.t_minus < 0) {
            scan.census_ok = false;
            continue;
        }
        double d = std::abs(p.values[p.t_plus] - p.values[p.t_minus]);
        if (d < scan.min_separation) {
            scan.min_separation = d;
            scan.min_separation_q2 = p.q2;
        }
    }
    return scan;
}

std::string scan_csv(const RayScan& scan) {
    std::ostringstream os;
    os.precision(17);
    os << "q1,q2,branch_id,re_u,im_u,is_real,is_T_plus,is_T_minus\r\n";
    for (const auto& p : scan.points) {
        double scale = 1.0;
        for (const auto& u : p.values) scale = std::max(scale, std::abs(u));
        for (std::size_t b = 0; b < p.values.size(); ++b) {
            const cplx u = p.values[b];
            os << p.q1 << "," << p.q2 << "," << b << "," << u.real() << "," << u.imag() << ","
               << (std::abs(u.imag()) <= 1e-9 * scale ? 1 : 0) << ","
               << (static_cast<int>(b) == p.t_plus ? 1 : 0) << ","
               << (static_cast<int>(b) == p.t_minus ? 1 : 0) << "\r\n";
        }
    }
    return os.str();
}

std::vector<BranchGroup> predicted_exponents(int n, double lambda) {
    if (lambda > 0)
        return {{0.0, 1}, {n * lambda / (2.0 * n + 1.0), static_cast<std::size_t>(2 * n + 1)}};
    if (lambda < 0) return {{lambda / 2.0, static_cast<std::size_t>(2 * n + 2)}};
    return {{0.0, static_cast<std::size_t>(2 * n + 2)}};
}

bool TropicalFit::matches(double rel_tol) const { return worst_relative_error <= rel_tol; }

TropicalFit tropical_exponents(int n, double lambda, const std::vector<double>& T_values) {
    if (T_values.size() < 3) throw Error("tropical_exponents: need at least three T values");
    TropicalFit fit;
    fit.n = n;
    fit.lambda = lambda;
    fit.T_values = T_values;
    const std::size_t k = T_values.size(), b = 2 * static_cast<std::size_t>(n) + 2;
    std::vector<std::vector<cplx>> rows(k);
    parallel_for(k, [&](std::size_t i) {
        rows[i] = family_reduction_xn(n, 1.0, std::pow(T_values[i], lambda)).values;
    });
    for (std::size_t i = 1; i < k; ++i) {
        // match in log space so branches of very different size do not compete
        std::vector<cplx> la, lb;
        for (const auto& u : rows[i - 1]) la.push_back(std::log(u));
        for (const auto& u : rows[i]) lb.push_back(std::log(u));
        std::vector<int> match;
        matching_distance(la, lb, &match);
        std::vector<cplx> v(b);
        for (std::size_t j = 0; j < b; ++j) v[j] = rows[i][match[j]];
        rows[i] = v;
    }
    Eigen::MatrixXd x(k, 2);
    for (std::size_t i = 0; i < k; ++i) {
        x(i, 0) = std::log(T_values[i]);
        x(i, 1) = 1.0;
    }
    auto qr = x.colPivHouseholderQr();
    for (std::size_t j = 0; j < b; ++j) {
        Eigen::VectorXd y(k);
        for (std::size_t i = 0; i < k; ++i) y(i) = std::log(std::abs(rows[i][j]));
        Eigen::VectorXd beta = qr.solve(y);
        fit.slopes.push_back(beta(0));
        fit.residuals.push_back(std::sqrt((x * beta - y).squaredNorm() / k));
    }
    std::vector<double> sorted = fit.slopes;
    std::sort(sorted.begin(), sorted.end());
    for (double s : sorted) {
        if (!fit.groups.empty() && std::abs(s - fit.groups.back().slope) < 0.05) {
            auto& g = fit.groups.back();
            g.slope = (g.slope * g.count + s) / (g.count + 1.0);
            ++g.count;
        } else {
            fit.groups.push_back({s, 1});
        }
    }
    fit.predicted = predicted_exponents(n, lambda);
    std::vector<double> expect;
    for (const auto& g : fit.predicted) expect.insert(expect.end(), g.count, g.slope);
    std::sort(expect.begin(), expect.end());
    const double unit = std::max(std::abs(lambda), 1e-12);
    for (std::size_t j = 0; j < b; ++j) {
        double denom = expect[j] != 0.0 ? std::abs(expect[j]) : unit;
        fit.worst_relative_error = std::max(fit.worst_relative_error, std::abs(sorted[j] - expect[j]) / denom);
    }
    return fit;
}

LimitCheck limit_eigenvalue_checks(int n, Boundary boundary, double small) {
    LimitCheck c;
    c.boundary = boundary;
    c.small = small;
    const double q1 = boundary == Boundary::Pi ? small : 1.0;
    const double q2 = boundary == Boundary::Pi ? 1.0 : small;
    c.values = family_reduction_xn(n, q1, q2).values;
    c.clusters = cluster_into(c.values, 2);
    for (const auto& cl : c.clusters) c.sizes.push_back(cl.multiplicity());
    std::sort(c.sizes.rbegin(), c.sizes.rend());
    const std::size_t half = static_cast<std::size_t>(n) + 1;
    if (boundary == Boundary::Phi) {
        for (const auto& cl : c.clusters)
            if (cl.multiplicity() == 1) c.isolated = cl.value;
        const double target = std::pow(-static_cast<double>(n), n) * q1;
        c.isolated_rel_error = std::abs(c.isolated - target) / std::abs(target);
        c.ok = c.sizes == std::vector<std::size_t>{2 * half - 1, 1} && c.isolated_rel_error < 1e-3;
    } else {
        c.ok = c.sizes == std::vector<std::size_t>{half, half};
    }
    return c;
}

}  // namespace fano
