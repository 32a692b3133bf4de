#include "fano/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "fano/lattice.hpp"

namespace fano {

namespace {

template <class C, class Fmt>
std::string format_terms(const Laurent<C>& f, Fmt fmt) {
    if (f.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : f.terms) {
        if (!first) os << " + ";
        first = false;
        os << fmt(c);
        for (int k = 0; k < f.nvars; ++k) {
            if (e[k] == 0) continue;
            os << "*x" << (k + 1);
            if (e[k] != 1) os << "^" << e[k];
        }
    }
    return os.str();
}

// Lawson-Hanson non-negative least squares; returns the residual norm.
double nnls_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(a.cols());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(n, false);
    const double tol = 1e-12;
    for (int outer = 0; outer < 3 * n + 10; ++outer) {
        Eigen::VectorXd w = a.transpose() * (b - a * x);
        int best = -1;
        double bw = tol;
        for (int j = 0; j < n; ++j)
            if (!passive[j] && w(j) > bw) {
                bw = w(j);
                best = j;
            }
        if (best < 0) break;
        passive[best] = true;
        for (int inner = 0; inner < 3 * n + 10; ++inner) {
            std::vector<int> idx;
            for (int j = 0; j < n; ++j)
                if (passive[j]) idx.push_back(j);
            Eigen::MatrixXd ap(a.rows(), idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) ap.col(k) = a.col(idx[k]);
            Eigen::VectorXd z = ap.colPivHouseholderQr().solve(b);
            bool feasible = true;
            for (std::size_t k = 0; k < idx.size(); ++k)
                if (z(k) <= 0) feasible = false;
            if (feasible) {
                x.setZero();
                for (std::size_t k = 0; k < idx.size(); ++k) x(idx[k]) = z(k);
                break;
            }
            double alpha = 1.0;
            for (std::size_t k = 0; k < idx.size(); ++k)
                if (z(k) <= 0) {
                    double d = x(idx[k]) - z(k);
                    if (d > 0) alpha = std::min(alpha, x(idx[k]) / d);
                }
            for (std::size_t k = 0; k < idx.size(); ++k) x(idx[k]) += alpha * (z(k) - x(idx[k]));
            for (std::size_t k = 0; k < idx.size(); ++k)
                if (x(idx[k]) <= tol) {
                    passive[idx[k]] = false;
                    x(idx[k]) = 0;
                }
        }
    }
    return (a * x - b).norm();
}

struct Key128Hash {
    std::size_t operator()(unsigned __int128 k) const {
        auto lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
        return std::hash<std::uint64_t>()(lo ^ mix_seed(hi, 0x51));
    }
};

}  // namespace

std::string to_string(const IntLaurent& f) {
    return format_terms(f, [](const BigInt& c) { return c.str(); });
}

std::string to_string(const CLaurent& f) {
    return format_terms(f, [](const cplx& c) {
        std::ostringstream os;
        os.precision(17);
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        return os.str();
    });
}

IntLaurent parse_laurent(const std::string& text, int nvars) {
    IntLaurent f(nvars);
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    // split on + and - at top level, keeping the sign
    std::vector<std::string> parts;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if ((ch == '+' || ch == '-') && i > 0 && s[i - 1] != '^') {
            parts.push_back(cur);
            cur.clear();
            if (ch == '-') cur = "-";
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    static const std::regex var_re(R"(^x(\d+)(\^(-?\d+))?$)");
    for (const auto& part : parts) {
        if (part.empty()) continue;
        BigInt coef = 1;
        Exponent e(nvars, 0);
        std::string body = part;
        if (body[0] == '-') {
            coef = -1;
            body = body.substr(1);
        }
        std::stringstream ss(body);
        std::string factor;
        while (std::getline(ss, factor, '*')) {
            std::smatch m;
            if (std::regex_match(factor, m, var_re)) {
                int idx = std::stoi(m[1]) - 1;
                if (idx < 0 || idx >= nvars) throw Error("variable out of range in " + part);
                e[idx] += m[2].matched ? std::stoi(m[3]) : 1;
            } else if (!factor.empty() &&
                       std::all_of(factor.begin(), factor.end(), [](char c) { return std::isdigit(c); })) {
                coef *= BigInt(factor);
            } else {
                throw Error("cannot parse Laurent term '" + part + "'");
            }
        }
        f.add_term(e, coef);
    }
    return f;
}

CLaurent to_complex(const IntLaurent& f) {
    CLaurent g(f.nvars);
    for (const auto& [e, c] : f.terms) g.add_term(e, cplx(c.convert_to<double>(), 0.0));
    return g;
}

bool is_convenient(const std::vector<Exponent>& support) {
    if (support.empty()) return false;
    const int n = static_cast<int>(support[0].size());
    if (n == 0) return false;
    Eigen::MatrixXd a(n, support.size());
    for (std::size_t k = 0; k < support.size(); ++k)
        for (int j = 0; j < n; ++j) a(j, k) = support[k][j];
    // the cone over the support is all of R^n iff every +-e_j lies in it
    for (int j = 0; j < n; ++j)
        for (double sgn : {1.0, -1.0}) {
            Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
            b(j) = sgn;
            if (nnls_residual(a, b) > 1e-9) return false;
        }
    return true;
}

QPoint QPoint::from(const std::vector<cplx>& q) {
    QPoint p;
    p.q = q;
    p.positive_real = true;
    for (const auto& z : q) {
        if (z == cplx(0.0)) throw Error("q coordinates must be nonzero");
        p.tau.push_back(std::log(z));
        if (z.imag() != 0.0 || z.real() <= 0.0) p.positive_real = false;
    }
    return p;
}

QPoint QPoint::ones(std::size_t r) { return from(std::vector<cplx>(r, cplx(1.0))); }

namespace {

struct SuperpotentialData {
    std::vector<Exponent> exps;
    std::vector<IntVec> q_exps;  // c_i = prod_k q_k^{q_exps[i][k]}
};

SuperpotentialData superpotential_data(const ToricFanoModel& model, std::size_t ref) {
    const FanData& fan = model.fan;
    if (ref == static_cast<std::size_t>(-1)) ref = default_reference_cone(fan);
    if (ref >= fan.max_cones.size()) throw Error("no smooth reference cone");
    const auto& cone = fan.max_cones[ref];
    const int n = fan.dim;
    IntMat basis;  // columns are the cone's rays
    for (int idx : cone) basis.push_back(fan.rays[idx]);
    basis = transpose(basis);
    IntMat inv = unimodular_inverse(basis);

    const std::size_t m = fan.rays.size();
    std::vector<bool> in_cone(m, false);
    for (int idx : cone) in_cone[idx] = true;
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < m; ++i)
        if (!in_cone[i]) outside.push_back(i);
    const std::size_t r = model.rank();
    if (outside.size() != r) throw Error("reference cone has the wrong size");
    IntMat wout(r, IntVec(r));
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t j = 0; j < r; ++j) wout[k][j] = model.weight_matrix[k][outside[j]];
    // sum_j wout[k][j] log c_{outside j} = log q_k
    IntMat s = unimodular_inverse(wout);

    SuperpotentialData out;
    for (std::size_t i = 0; i < m; ++i) {
        Exponent e(n, 0);
        for (int a = 0; a < n; ++a) {
            long long v = 0;
            for (int b = 0; b < n; ++b) v += inv[a][b] * fan.rays[i][b];
            e[a] = static_cast<int>(v);
        }
        out.exps.push_back(e);
        IntVec qe(r, 0);
        if (!in_cone[i]) {
            std::size_t j = std::find(outside.begin(), outside.end(), i) - outside.begin();
            for (std::size_t k = 0; k < r; ++k) qe[k] = s[j][k];
        }
        out.q_exps.push_back(qe);
    }
    return out;
}

}  // namespace

CLaurent superpotential(const ToricFanoModel& model, const QPoint& q, std::size_t reference_cone) {
    if (q.q.size() != model.rank()) throw Error("q has the wrong number of coordinates");
    SuperpotentialData d = superpotential_data(model, reference_cone);
    CLaurent f(model.fan.dim);
    for (std::size_t i = 0; i < d.exps.size(); ++i) {
        cplx c = 1.0;
        for (std::size_t k = 0; k < q.q.size(); ++k)
            if (d.q_exps[i][k] != 0) c *= std::pow(q.q[k], static_cast<int>(d.q_exps[i][k]));
        f.add_term(d.exps[i], c);
    }
    return f;
}

IntLaurent mirror_polynomial(const ToricFanoModel& model, std::size_t reference_cone) {
    SuperpotentialData d = superpotential_data(model, reference_cone);
    IntLaurent f(model.fan.dim);
    for (const auto& e : d.exps) f.add_term(e, BigInt(1));
    return f;
}

LogTable::LogTable(const CLaurent& f) {
    exps.resize(f.terms.size(), f.nvars);
    coef.resize(f.terms.size());
    Eigen::Index i = 0;
    for (const auto& [e, c] : f.terms) {
        for (int k = 0; k < f.nvars; ++k) exps(i, k) = e[k];
        coef(i) = c;
        ++i;
    }
}

namespace {
Eigen::VectorXcd term_values(const LogTable& f, const Eigen::VectorXcd& w) {
    Eigen::VectorXcd bw = f.exps.cast<cplx>() * w;
    Eigen::VectorXcd v(bw.size());
    for (Eigen::Index i = 0; i < bw.size(); ++i) v(i) = f.coef(i) * std::exp(bw(i));
    return v;
}
}  // namespace

cplx eval_log(const LogTable& f, const Eigen::VectorXcd& w) {
    ScaledValue s = eval_log_scaled(f, w);
    if (s.shift > 700.0) throw Error("eval_log overflow; use eval_log_scaled");
    return s.mantissa * std::exp(s.shift);
}

ScaledValue eval_log_scaled(const LogTable& f, const Eigen::VectorXcd& w) {
    Eigen::VectorXcd bw = f.exps.cast<cplx>() * w;
    double shift = 0.0;
    for (Eigen::Index i = 0; i < bw.size(); ++i) shift = std::max(shift, bw(i).real());
    if (shift <= 700.0) shift = 0.0;
    ScaledValue out;
    out.shift = shift;
    out.mantissa = 0.0;
    for (Eigen::Index i = 0; i < bw.size(); ++i) out.mantissa += f.coef(i) * std::exp(bw(i) - shift);
    return out;
}

Eigen::VectorXcd grad_log(const LogTable& f, const Eigen::VectorXcd& w) {
    Eigen::VectorXcd v = term_values(f, w);
    return f.exps.cast<cplx>().transpose() * v;
}

Eigen::MatrixXcd hess_log(const LogTable& f, const Eigen::VectorXcd& w) {
    Eigen::VectorXcd v = term_values(f, w);
    Eigen::MatrixXcd b = f.exps.cast<cplx>();
    return b.transpose() * v.asDiagonal() * b;
}

double term_scale(const LogTable& f, const Eigen::VectorXcd& w) {
    return term_values(f, w).cwiseAbs().sum();
}

std::vector<BigInt> constant_term_series(const IntLaurent& f, int n_max) {
    std::vector<BigInt> out(1, BigInt(1));
    if (n_max <= 0) return out;
    const int n = f.nvars;
    if (n == 0) {
        BigInt c = f.constant_term(), p = 1;
        for (int k = 1; k <= n_max; ++k) out.push_back(p *= c);
        return out;
    }
    std::vector<Exponent> exps;
    std::vector<BigInt> coefs;
    int maxabs = 1;
    for (const auto& [e, c] : f.terms) {
        exps.push_back(e);
        coefs.push_back(c);
        for (int x : e) maxabs = std::max(maxabs, std::abs(x));
    }
    // pruning directions and support function values
    std::vector<std::vector<int>> dirs;
    for (int j = 0; j < n; ++j)
        for (int s : {1, -1}) {
            std::vector<int> u(n, 0);
            u[j] = s;
            dirs.push_back(u);
            for (int k = j + 1; k < n; ++k)
                for (int t : {1, -1}) {
                    auto v = u;
                    v[k] = t;
                    dirs.push_back(v);
                }
        }
    dirs.push_back(std::vector<int>(n, 1));
    dirs.push_back(std::vector<int>(n, -1));
    std::vector<long long> h(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        long long best = std::numeric_limits<long long>::min();
        for (const auto& e : exps) {
            long long s = 0;
            for (int k = 0; k < n; ++k) s += static_cast<long long>(dirs[d][k]) * e[k];
            best = std::max(best, s);
        }
        h[d] = best;
    }
    const long long radius = static_cast<long long>(n_max) * maxabs;
    const unsigned __int128 base = static_cast<unsigned __int128>(2 * radius + 1);
    {
        long double span = std::pow(static_cast<long double>(2 * radius + 1), n);
        if (span > 1.0e37L) throw Error("constant_term_series: exponent range too large");
    }
    auto pack = [&](const std::vector<long long>& v) {
        unsigned __int128 key = 0;
        for (int k = n - 1; k >= 0; --k) key = key * base + static_cast<unsigned __int128>(v[k] + radius);
        return key;
    };
    auto unpack = [&](unsigned __int128 key, std::vector<long long>& v) {
        for (int k = 0; k < n; ++k) {
            v[k] = static_cast<long long>(key % base) - radius;
            key /= base;
        }
    };
    using Poly = std::unordered_map<unsigned __int128, BigInt, Key128Hash>;
    Poly cur;
    std::vector<long long> zero(n, 0), v(n), w(n);
    const unsigned __int128 origin = pack(zero);
    cur.emplace(origin, BigInt(1));
    for (int step = 1; step <= n_max; ++step) {
        const long long remaining = n_max - step;
        Poly next;
        next.reserve(cur.size() * 2);
        for (const auto& [key, c] : cur) {
            unpack(key, v);
            for (std::size_t t = 0; t < exps.size(); ++t) {
                for (int k = 0; k < n; ++k) w[k] = v[k] + exps[t][k];
                bool keep = true;
                for (std::size_t d = 0; d < dirs.size() && keep; ++d) {
                    long long s = 0;
                    for (int k = 0; k < n; ++k) s += static_cast<long long>(dirs[d][k]) * w[k];
                    if (-s > remaining * h[d]) keep = false;
                }
                if (!keep) continue;
                BigInt& slot = next[pack(w)];
                if (coefs[t] == 1)
                    slot += c;
                else
                    slot += c * coefs[t];
            }
        }
        for (auto it = next.begin(); it != next.end();)
            it = it->second == 0 ? next.erase(it) : std::next(it);
        cur.swap(next);
        auto it = cur.find(origin);
        out.push_back(it == cur.end() ? BigInt(0) : it->second);
    }
    return out;
}

BigInt power_constant_term(const IntLaurent& f, int n) {
    if (n < 0) throw Error("power_constant_term requires n >= 0");
    return constant_term_series(f, n).back();
}

PeriodicityResult r_of_f(const IntLaurent& f, int n_max) {
    auto series = constant_term_series(f, n_max);
    PeriodicityResult res;
    int g = 0;
    for (int k = 1; k <= n_max; ++k)
        if (series[k] > 0) g = std::gcd(g, k);
    if (g == 0) throw Error("r_of_f: all constant terms vanish up to n_max (inconclusive)");
    res.r = g;
    for (int k = 1; k <= n_max; ++k)
        if (k % g != 0 && series[k] != 0) res.pattern_holds = false;
    return res;
}

double log_abs(const BigInt& x) {
    if (x == 0) return -std::numeric_limits<double>::infinity();
    long e = 0;
    double m = mpz_get_d_2exp(&e, x.backend().data());
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

}  // namespace fano
