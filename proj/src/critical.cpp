#include "fano/critical.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace fano {

namespace {

double wrap_pi(double x) {
    double y = std::remainder(x, 2.0 * M_PI);
    if (y <= -M_PI) y += 2.0 * M_PI;
    return y;
}

void normalize(Eigen::VectorXcd& w) {
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = cplx(w(k).real(), wrap_pi(w(k).imag()));
}

double distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    double d = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k)
        d = std::max(d, std::abs(a(k).real() - b(k).real()) + std::abs(wrap_pi(a(k).imag() - b(k).imag())));
    return d;
}

double rel_residual(const LogTable& f, const Eigen::VectorXcd& w) {
    double s = term_scale(f, w);
    return s == 0.0 ? 0.0 : grad_log(f, w).norm() / s;
}

cplx logdet(const Eigen::MatrixXcd& h) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(h);
    const Eigen::MatrixXcd& m = lu.matrixLU();
    cplx acc = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) acc += std::log(m(k, k));
    if (lu.permutationP().determinant() < 0) acc += cplx(0.0, M_PI);
    return cplx(acc.real(), wrap_pi(acc.imag()));
}

CriticalPoint finish(const LogTable& f, Eigen::VectorXcd w, double residual) {
    CriticalPoint cp;
    normalize(w);
    cp.w = w;
    cp.value = eval_log(f, w);
    cp.grad_residual = residual;
    cp.hess_logdet = logdet(hess_log(f, w));
    return cp;
}

// Damped Newton from one start; false on stagnation or divergence.
bool newton_run(const LogTable& f, Eigen::VectorXcd& w, double tol) {
    double res = rel_residual(f, w);
    for (int it = 0; it < 150; ++it) {
        if (res < tol) return true;
        Eigen::VectorXcd g = grad_log(f, w);
        Eigen::MatrixXcd h = hess_log(f, w);
        Eigen::VectorXcd step = h.fullPivLu().solve(-g);
        if (!step.allFinite()) return false;
        double len = step.norm();
        if (len > 2.0) step *= 2.0 / len;
        double alpha = 1.0;
        bool moved = false;
        for (int k = 0; k < 30; ++k) {
            Eigen::VectorXcd trial = w + alpha * step;
            if (trial.real().cwiseAbs().maxCoeff() > 60.0) return false;
            double r = rel_residual(f, trial);
            if (std::isfinite(r) && r < (1.0 - 1e-4 * alpha) * res) {
                w = trial;
                res = r;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) return res < 1e3 * tol;
    }
    return res < 1e3 * tol;
}

// Parameter homotopy on the coefficient vector c of f: G(w; c) = B^T (c o exp(Bw)).
struct Homotopy {
    Eigen::MatrixXcd b;  // terms x vars

    Eigen::VectorXcd terms(const Eigen::VectorXcd& c, const Eigen::VectorXcd& w) const {
        Eigen::VectorXcd bw = b * w;
        Eigen::VectorXcd t(bw.size());
        for (Eigen::Index i = 0; i < bw.size(); ++i) t(i) = c(i) * std::exp(bw(i));
        return t;
    }
    Eigen::VectorXcd grad(const Eigen::VectorXcd& c, const Eigen::VectorXcd& w) const {
        return b.transpose() * terms(c, w);
    }
    Eigen::MatrixXcd hess(const Eigen::VectorXcd& c, const Eigen::VectorXcd& w) const {
        return b.transpose() * terms(c, w).asDiagonal() * b;
    }
    Eigen::VectorXcd velocity(const Eigen::VectorXcd& c, const Eigen::VectorXcd& dc,
                              const Eigen::VectorXcd& w) const {
        Eigen::VectorXcd e = b * w;
        Eigen::VectorXcd t(e.size());
        for (Eigen::Index i = 0; i < e.size(); ++i) t(i) = dc(i) * std::exp(e(i));
        return hess(c, w).partialPivLu().solve(-(b.transpose() * t));
    }
    bool correct(const Eigen::VectorXcd& c, Eigen::VectorXcd& w, double tol) const {
        double last = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 4; ++k) {
            Eigen::VectorXcd step = hess(c, w).partialPivLu().solve(-grad(c, w));
            if (!step.allFinite()) return false;
            double len = step.norm();
            if (len > 0.5 * last && k > 0) return false;
            w += step;
            last = len;
            if (len < tol * (1.0 + w.norm())) return true;
        }
        return last < tol * (1.0 + w.norm());
    }
    // Follows a solution from ca to cb along the straight segment.
    bool track(Eigen::VectorXcd& w, const Eigen::VectorXcd& ca, const Eigen::VectorXcd& cb) const {
        const Eigen::VectorXcd dc = cb - ca;
        double s = 0.0, h = 0.02;
        int steps = 0;
        while (s < 1.0) {
            if (++steps > 20000 || h < 1e-12) return false;
            double hs = std::min(h, 1.0 - s);
            auto at = [&](double x) { return Eigen::VectorXcd(ca + x * dc); };
            Eigen::VectorXcd k1 = velocity(at(s), dc, w);
            Eigen::VectorXcd k2 = velocity(at(s + hs / 2), dc, w + hs / 2 * k1);
            Eigen::VectorXcd k3 = velocity(at(s + hs / 2), dc, w + hs / 2 * k2);
            Eigen::VectorXcd k4 = velocity(at(s + hs), dc, w + hs * k3);
            Eigen::VectorXcd pred = w + hs / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            if (pred.allFinite() && (pred - w).norm() < 0.5 && correct(at(s + hs), pred, 1e-10)) {
                w = pred;
                s += hs;
                h = std::min(2.0 * h, 0.1);
            } else {
                h *= 0.5;
            }
        }
        return true;
    }
};

// Monodromy loops around a random base point of coefficient space collect the
// full solution set, which is then carried to the target coefficients.
std::vector<Eigen::VectorXcd> monodromy_solve(const LogTable& f, std::size_t expected, std::uint64_t seed) {
    Homotopy hom{f.exps.cast<cplx>()};
    const Eigen::Index m = f.exps.rows(), n = f.exps.cols();
    std::mt19937_64 rng(mix_seed(seed, 0x6d6f6e6f));
    std::normal_distribution<double> gauss;
    auto random_vec = [&](Eigen::Index k) {
        Eigen::VectorXcd v(k);
        for (Eigen::Index i = 0; i < k; ++i) v(i) = cplx(gauss(rng), gauss(rng));
        return v;
    };
    // base coefficients chosen so that a random w0 is critical
    Eigen::VectorXcd w0 = 0.3 * random_vec(n);
    Eigen::MatrixXcd a(n, m);
    for (Eigen::Index i = 0; i < m; ++i) a.col(i) = f.exps.row(i).transpose().cast<cplx>() * std::exp(hom.b.row(i).dot(w0));
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    Eigen::MatrixXcd ker = lu.kernel();
    if (ker.cols() == 0) return {};
    Eigen::VectorXcd c0 = ker * random_vec(ker.cols());
    std::vector<Eigen::VectorXcd> base{w0};
    auto same = [](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) { return distance(x, y) < 1e-6; };
    int stale = 0;
    for (int loop = 0; loop < 200 && base.size() < expected && stale < 40; ++loop) {
        Eigen::VectorXcd c1 = random_vec(m), c2 = random_vec(m);
        std::vector<std::optional<Eigen::VectorXcd>> res(base.size());
        parallel_for(base.size(), [&](std::size_t k) {
            Eigen::VectorXcd w = base[k];
            if (hom.track(w, c0, c1) && hom.track(w, c1, c2) && hom.track(w, c2, c0)) res[k] = w;
        });
        std::size_t before = base.size();
        for (auto& r : res) {
            if (!r) continue;
            Eigen::VectorXcd w = *r;
            normalize(w);
            bool dup = false;
            for (const auto& x : base) dup = dup || same(x, w);
            if (!dup) base.push_back(w);
        }
        stale = base.size() == before ? stale + 1 : 0;
    }
    Eigen::VectorXcd target = f.coef;
    std::vector<std::optional<Eigen::VectorXcd>> res(base.size());
    parallel_for(base.size(), [&](std::size_t k) {
        Eigen::VectorXcd w = base[k];
        if (hom.track(w, c0, target)) res[k] = w;
    });
    std::vector<Eigen::VectorXcd> out;
    for (auto& r : res)
        if (r) out.push_back(*r);
    return out;
}

}  // namespace

double polish_critical(const LogTable& f, Eigen::VectorXcd& w, int max_steps) {
    double res = rel_residual(f, w);
    for (int k = 0; k < max_steps; ++k) {
        Eigen::VectorXcd step = hess_log(f, w).fullPivLu().solve(-grad_log(f, w));
        Eigen::VectorXcd trial = w + step;
        double r = rel_residual(f, trial);
        if (!(r < res)) break;
        w = trial;
        res = r;
    }
    return res;
}

CriticalPoint conifold_point(const CLaurent& f, double tol) {
    for (const auto& [e, c] : f.terms)
        if (c.imag() != 0.0 || c.real() <= 0.0)
            throw Error("conifold_point: coefficients must be positive real");
    if (!is_convenient(f)) throw Error("conifold_point: support is not convenient");
    LogTable table(f);
    const int n = f.nvars;
    Eigen::MatrixXd b = table.exps;
    Eigen::VectorXd c = table.coef.real();
    auto value = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd t = (b * w).array().exp().matrix().cwiseProduct(c);
        return t;
    };
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd terms = value(w);
    double fval = terms.sum();
    int it = 0;
    for (; it < 500; ++it) {
        Eigen::VectorXd g = b.transpose() * terms;
        if (g.norm() / fval < tol) break;
        Eigen::MatrixXd h = b.transpose() * terms.asDiagonal() * b;
        Eigen::VectorXd step = h.ldlt().solve(-g);
        double slope = g.dot(step);
        if (!(slope < 0)) step = -g, slope = -g.squaredNorm();
        double alpha = 1.0;
        for (int k = 0; k < 60; ++k) {
            Eigen::VectorXd trial = w + alpha * step;
            Eigen::VectorXd tt = value(trial);
            double ft = tt.sum();
            if (ft <= fval + 1e-4 * alpha * slope || (k > 50 && ft <= fval)) {
                w = trial;
                terms = tt;
                fval = ft;
                break;
            }
            alpha *= 0.5;
        }
        if (alpha < 1e-15) break;
    }
    Eigen::VectorXd g = b.transpose() * terms;
    CriticalPoint cp;
    cp.w = w.cast<cplx>();
    cp.value = cplx(fval, 0.0);
    cp.grad_residual = g.norm() / fval;
    if (cp.grad_residual > std::max(tol, 1e-11)) throw Error("conifold_point: Newton did not converge");
    cp.hess_logdet = logdet(hess_log(table, cp.w));
    cp.is_conifold = true;
    return cp;
}

CriticalSearch critical_points_all(const CLaurent& f, std::size_t expected, const CriticalOptions& opt) {
    LogTable table(f);
    const int n = f.nvars;
    CriticalSearch out;
    out.expected = expected;
    double box = opt.box;
    std::size_t stale = 0;
    std::size_t start = 0;
    while (out.points.size() < expected && start < opt.budget) {
        const std::size_t count = std::min(opt.batch, opt.budget - start);
        std::vector<std::optional<Eigen::VectorXcd>> results(count);
        parallel_for(count, [&](std::size_t k) {
            std::mt19937_64 rng(mix_seed(opt.seed, start + k));
            std::uniform_real_distribution<double> re(-box, box), im(-M_PI, M_PI);
            Eigen::VectorXcd w(n);
            for (int j = 0; j < n; ++j) {
                double a = re(rng);
                w(j) = cplx(a, im(rng));
            }
            if (newton_run(table, w, opt.tol * 0.1)) results[k] = w;
        });
        start += count;
        std::size_t before = out.points.size();
        for (auto& r : results) {
            if (!r) continue;
            Eigen::VectorXcd w = *r;
            double res = polish_critical(table, w);
            if (res > opt.tol) continue;
            normalize(w);
            bool dup = false;
            for (const auto& p : out.points)
                if (distance(p.w, w) < opt.dedup_radius * std::max(1.0, w.cwiseAbs().maxCoeff())) {
                    dup = true;
                    break;
                }
            if (!dup) out.points.push_back(finish(table, w, res));
        }
        if (out.points.size() == before) {
            if (++stale % 8 == 0) box *= 1.5;
        } else {
            stale = 0;
        }
    }
    out.starts_used = start;
    for (std::uint64_t attempt = 0; attempt < 6 && out.points.size() < expected; ++attempt) {
        for (auto w : monodromy_solve(table, expected, mix_seed(opt.seed, attempt))) {
            double res = polish_critical(table, w);
            if (res > opt.tol) continue;
            normalize(w);
            bool dup = false;
            for (const auto& p : out.points)
                if (distance(p.w, w) < opt.dedup_radius * std::max(1.0, w.cwiseAbs().maxCoeff())) {
                    dup = true;
                    break;
                }
            if (!dup) out.points.push_back(finish(table, w, res));
        }
    }
    // mark the conifold point when the coefficients allow one
    bool positive = true;
    for (const auto& [e, c] : f.terms)
        if (c.imag() != 0.0 || c.real() <= 0.0) positive = false;
    if (positive && is_convenient(f)) {
        CriticalPoint con = conifold_point(f, opt.tol);
        for (auto& p : out.points)
            if (distance(p.w, con.w) < 1e-6) p.is_conifold = true;
    }
    std::sort(out.points.begin(), out.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
    return out;
}

cplx h_xn(int n, cplx t) { return std::pow(t, 2 * n + 2) + static_cast<double>(n) * std::pow(t, 2 * n + 1); }
cplx g_xn(int n, cplx t) {
    return static_cast<double>(n) * std::pow(t, n) + std::pow(t, n + 1) + std::pow(t, n) + 1.0 / std::pow(t, n + 1);
}
cplx g_tilde_xn(int n, cplx t) { return std::pow(t, n) + 2.0 / std::pow(t, n + 1); }
cplx g_check_xn(int n, cplx t) { return 2.0 * std::pow(t, n + 1) + static_cast<double>(2 * n + 1) * std::pow(t, n); }

cplx h1(int m, cplx t) { return std::pow(t, 2 * m + 2) + static_cast<double>(2 * m) * std::pow(t, 2 * m + 1); }
cplx g1(int m, cplx t) {
    return static_cast<double>(2 * m + 1) * std::pow(t, m) + std::pow(t, m + 1) + std::pow(t, m) +
           1.0 / std::pow(t, m + 1);
}
cplx g1_tilde(int m, cplx t) { return 2.0 * std::pow(t, m) + 2.0 / std::pow(t, m + 1); }
cplx g1_check(int m, cplx t) { return 2.0 * std::pow(t, m + 1) + static_cast<double>(4 * m + 2) * std::pow(t, m); }

cplx h0(int n, cplx t) { return std::pow(t, 2 * n + 2) + static_cast<double>(n - 1) * std::pow(t, 2 * n); }
cplx g0(int n, cplx t) {
    return static_cast<double>(n) * std::pow(t, n - 1) + std::pow(t, n + 1) + std::pow(t, n - 1) +
           1.0 / std::pow(t, n + 1);
}
cplx g0_tilde(int n, cplx t) { return 2.0 * std::pow(t, n - 1) + 2.0 / std::pow(t, n + 1); }
cplx g0_check(int n, cplx t) { return 2.0 * std::pow(t, n + 1) + static_cast<double>(2 * n) * std::pow(t, n - 1); }

namespace {

// Newton in long double on a real polynomial, starting from a real estimate.
double polish_real(const Poly& p, double x0) {
    long double x = x0;
    for (int it = 0; it < 20; ++it) {
        long double v = 0, d = 0;
        for (std::size_t k = p.size(); k-- > 0;) {
            d = d * x + v;
            v = v * x + static_cast<long double>(p[k].real());
        }
        if (d == 0) break;
        long double nx = x - v / d;
        if (nx == x) break;
        x = nx;
    }
    return static_cast<double>(x);
}

bool is_real_root(cplx t) { return std::abs(t.imag()) <= 1e-9 * std::max(1.0, std::abs(t)); }

void finish_roots(UnivariateReduction& r, bool real_poly) {
    RootOptions opt;
    r.roots = aberth_roots(r.constraint, opt);
    if (real_poly)
        for (auto& t : r.roots)
            if (is_real_root(t)) {
                t = cplx(polish_real(r.constraint, t.real()), 0.0);
                ++r.real_root_count;
            }
    for (const auto& t : r.roots) r.max_root_residual = std::max(r.max_root_residual, backward_error(r.constraint, t));
    std::sort(r.roots.begin(), r.roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
}

}  // namespace

UnivariateReduction family_reduction_xn(int n, cplx q1, cplx q2) {
    if (n < 1) throw Error("family_reduction_xn requires n >= 1");
    if (q1 == cplx(0.0)) throw Error("family_reduction_xn requires q1 != 0");
    UnivariateReduction r;
    r.kind = ReductionKind::Xn;
    r.n = n;
    r.x_exp = n;
    r.y_exp = n + 1;
    const cplx s = std::pow(q1, 1.0 / static_cast<double>(n + 1));
    r.constraint.assign(2 * n + 3, 0.0);
    r.constraint[2 * n + 2] = 1.0;
    r.constraint[2 * n + 1] = static_cast<double>(n) * s;
    r.constraint[0] = -q2;
    const bool real_poly = s.imag() == 0.0 && q2.imag() == 0.0;
    finish_roots(r, real_poly);
    for (const auto& t : r.roots)
        r.values.push_back(2.0 * std::pow(t, n + 1) + static_cast<double>(2 * n + 1) * s * std::pow(t, n));
    if (real_poly && s.real() > 0 && q2.real() > 0)
        for (const auto& t : r.roots) {
            if (t.imag() != 0.0) continue;
            if (t.real() > 0)
                r.a_plus = t.real();
            else
                r.a_minus = t.real();
        }
    // t^{2n+1} (t + n s) = q2 on the constraint
    if (!std::isnan(r.a_minus)) r.a_minus_offset = q2.real() / std::pow(r.a_minus, 2 * n + 1);
    return r;
}

UnivariateReduction family_reduction_xn_prime(int n) {
    if (n < 3) throw Error("family_reduction_xn_prime requires n >= 3");
    UnivariateReduction r;
    r.n = n;
    if (n % 2 == 1) {
        const int m = (n - 1) / 2;
        r.kind = ReductionKind::XnPrimeOdd;
        r.x_exp = m;
        r.y_exp = m + 1;
        r.constraint.assign(2 * m + 3, 0.0);
        r.constraint[2 * m + 2] = 1.0;
        r.constraint[2 * m + 1] = static_cast<double>(2 * m);
        r.constraint[0] = -1.0;
        finish_roots(r, true);
        for (const auto& t : r.roots) {
            r.values.push_back(g1_check(m, t));
            r.values.push_back(-g1_check(m, t));
        }
        for (const auto& t : r.roots)
            if (t.imag() == 0.0) (t.real() > 0 ? r.a_plus : r.a_minus) = t.real();
    } else {
        r.kind = ReductionKind::XnPrimeEven;
        r.x_exp = n - 1;
        r.y_exp = n + 1;
        r.constraint.assign(2 * n + 3, 0.0);
        r.constraint[2 * n + 2] = 1.0;
        r.constraint[2 * n] = static_cast<double>(n - 1);
        r.constraint[0] = -1.0;
        finish_roots(r, true);
        for (const auto& t : r.roots) r.values.push_back(g0_check(n, t));
        for (const auto& t : r.roots) {
            if (t.imag() == 0.0 && t.real() > 0) r.a_plus = t.real();
            if (t.imag() == 0.0 && t.real() < 0) r.a_minus = t.real();
            // of the purely imaginary roots, the outer pair carries the large values
            if (std::abs(t.real()) <= 1e-9 * std::abs(t) && t.imag() > 0 &&
                !(std::abs(r.a_imag) >= t.imag()))
                r.a_imag = cplx(0.0, t.imag());
        }
    }
    return r;
}

double matching_distance(const std::vector<cplx>& a, const std::vector<cplx>& b, std::vector<int>* assignment) {
    if (a.size() != b.size()) throw Error("matching_distance: multisets differ in size");
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    // Hungarian algorithm (potentials form), 1-based
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    auto cost = [&](std::size_t i, std::size_t j) { return std::abs(a[i - 1] - b[j - 1]); };
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            std::size_t i0 = p[j0], j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> match(n);
    for (std::size_t j = 1; j <= n; ++j) match[p[j] - 1] = static_cast<int>(j - 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[match[i]]));
    if (assignment) *assignment = match;
    return worst;
}

}  // namespace fano
