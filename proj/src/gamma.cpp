#include "fano/gamma.hpp"

#include "fano/common.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fano {

using hp::Complex;
using hp::Real;

CohomologyRing::CohomologyRing(int n_) : n(n_) {
    if (n < 1) throw std::invalid_argument("cohomology ring needs n >= 1");
}

int CohomologyRing::degree(std::size_t k) const {
    const int i = static_cast<int>(k) % (n + 1);
    const int j = static_cast<int>(k) / (n + 1);
    return i + j;
}

CohomologyClass ring_zero(const CohomologyRing& R) { return CohomologyClass(R.dim(), Complex(0.0)); }

CohomologyClass ring_one(const CohomologyRing& R) {
    auto c = ring_zero(R);
    c[0] = Complex(1.0);
    return c;
}

CohomologyClass ring_p1(const CohomologyRing& R) {
    auto c = ring_zero(R);
    c[R.index(1, 0)] = Complex(1.0);
    return c;
}

CohomologyClass ring_p2(const CohomologyRing& R) {
    auto c = ring_zero(R);
    c[R.index(0, 1)] = Complex(1.0);
    return c;
}

CohomologyClass ring_E(const CohomologyRing& R) {
    auto c = ring_p2(R);
    c[R.index(1, 0)] = Complex(static_cast<double>(-R.n));
    return c;
}

CohomologyClass ring_c1(const CohomologyRing& R) {
    auto c = ring_zero(R);
    c[R.index(1, 0)] = Complex(1.0);
    c[R.index(0, 1)] = Complex(2.0);
    return c;
}

CohomologyClass ring_mul(const CohomologyRing& R, const CohomologyClass& a, const CohomologyClass& b) {
    const int n = R.n;
    auto out = ring_zero(R);
    for (int i1 = 0; i1 <= n; ++i1)
        for (int j1 = 0; j1 <= 1; ++j1) {
            const auto& x = a[R.index(i1, j1)];
            if (x.re.is_zero() && x.im.is_zero()) continue;
            for (int i2 = 0; i2 <= n; ++i2)
                for (int j2 = 0; j2 <= 1; ++j2) {
                    const auto& y = b[R.index(i2, j2)];
                    if (y.re.is_zero() && y.im.is_zero()) continue;
                    int i = i1 + i2, j = j1 + j2;
                    Complex c = x * y;
                    if (j == 2) {  // p2^2 = n p1 p2
                        c *= Complex(static_cast<double>(n));
                        ++i;
                        j = 1;
                    }
                    if (i > n) continue;
                    out[R.index(i, j)] += c;
                }
        }
    return out;
}

CohomologyClass ring_add(const CohomologyClass& a, const CohomologyClass& b) {
    CohomologyClass out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += b[k];
    return out;
}

CohomologyClass ring_scale(const CohomologyClass& a, const Complex& s) {
    CohomologyClass out = a;
    for (auto& c : out) c *= s;
    return out;
}

CohomologyClass ring_exp(const CohomologyRing& R, const CohomologyClass& a) {
    if (!a[0].im.is_zero()) throw std::invalid_argument("ring_exp: complex scalar part");
    CohomologyClass nil = a;
    nil[0] = Complex(0.0);
    auto sum = ring_one(R);
    auto term = ring_one(R);
    for (int k = 1; k <= R.n + 1; ++k) {
        term = ring_scale(ring_mul(R, term, nil), Complex(Real(1.0) / Real(k)));
        sum = ring_add(sum, term);
    }
    if (!a[0].re.is_zero()) sum = ring_scale(sum, Complex(hp::exp(a[0].re)));
    return sum;
}

Complex integral(const CohomologyRing& R, const CohomologyClass& a) { return a[R.index(R.n, 1)]; }

Complex pairing(const CohomologyRing& R, const CohomologyClass& a, const CohomologyClass& b) {
    return integral(R, ring_mul(R, a, b));
}

Complex pairing_pt(const CohomologyClass& a) { return a[0]; }

namespace {

using Rational = boost::multiprecision::mpq_rational;

// B_0..B_{2K} exactly
std::vector<Rational> bernoulli(int count) {
    std::vector<Rational> B(count + 1);
    B[0] = 1;
    for (int m = 1; m <= count; ++m) {
        Rational s = 0;
        Rational binom = 1;  // C(m+1, j)
        for (int j = 0; j < m; ++j) {
            s += binom * B[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        B[m] = -s / (m + 1);
    }
    return B;
}

Real to_real(const Rational& q) {
    Real r;
    mpfr_set_q(r.get(), q.backend().data(), MPFR_RNDN);
    return r;
}

int em_cutoff() {
    return std::max(20, static_cast<int>(hp::precision_bits() / 3.32) + 10);
}

Real epsilon_real() { return hp::pow_int(Real(2.0), -static_cast<long>(hp::precision_bits())); }

}  // namespace

Real euler_gamma_constant() {
    const int N = em_cutoff();
    Real h(0.0);
    for (int j = 1; j <= N; ++j) h += Real(1.0) / Real(j);
    const Real Nr(N);
    Real g = h - hp::log(Nr) - Real(1.0) / (Real(2.0) * Nr);
    const int K = N;  // terms shrink like (2 pi N)^{-2k}
    const auto B = bernoulli(2 * K);
    const Real eps = epsilon_real();
    for (int k = 1; k <= K; ++k) {
        Real term = to_real(B[2 * k]) / (Real(2 * k) * hp::pow_int(Nr, 2 * k));
        g += term;
        if (hp::abs(term) < eps) break;
    }
    return g;
}

Real zeta_value(int s) {
    if (s < 2) throw std::invalid_argument("zeta_value needs s >= 2");
    const int N = em_cutoff();
    const Real Nr(N);
    Real z(0.0);
    for (int j = 1; j < N; ++j) z += hp::pow_int(Real(j), -s);
    z += hp::pow_int(Nr, 1 - s) / Real(s - 1);
    z += hp::pow_int(Nr, -s) / Real(2.0);
    const int K = N;
    const auto B = bernoulli(2 * K);
    const Real eps = epsilon_real();
    Real rising(static_cast<long>(s));  // s (s+1) ... (s+2k-2)
    Real fact(2.0);                     // (2k)!
    for (int k = 1; k <= K; ++k) {
        if (k > 1) {
            rising *= Real(s + 2 * k - 3) * Real(s + 2 * k - 2);
            fact *= Real(2 * k - 1) * Real(2 * k);
        }
        Real term = to_real(B[2 * k]) / fact * rising * hp::pow_int(Nr, -s - 2 * k + 1);
        z += term;
        if (hp::abs(term) < eps * z) break;
    }
    return z;
}

namespace {

// log Gamma(1 + x) for a nilpotent class x
CohomologyClass log_gamma_one_plus(const CohomologyRing& R, const CohomologyClass& x,
                                   const Real& gamma_c, const std::vector<Real>& zeta) {
    auto out = ring_scale(x, Complex(-gamma_c));
    auto power = x;
    for (int k = 2; k <= R.n + 1; ++k) {
        power = ring_mul(R, power, x);
        Real c = zeta[k] / Real(k);
        if (k % 2) c = -c;
        out = ring_add(out, ring_scale(power, Complex(c)));
    }
    return out;
}

}  // namespace

CohomologyClass gamma_class_xn(int n) {
    CohomologyRing R(n);
    const Real g = euler_gamma_constant();
    std::vector<Real> zeta(n + 2, Real(0.0));
    for (int k = 2; k <= n + 1; ++k) zeta[k] = zeta_value(k);
    auto lp1 = log_gamma_one_plus(R, ring_p1(R), g, zeta);
    auto total = ring_scale(lp1, Complex(Real(n + 1)));
    total = ring_add(total, log_gamma_one_plus(R, ring_p2(R), g, zeta));
    total = ring_add(total, log_gamma_one_plus(R, ring_E(R), g, zeta));
    return ring_exp(R, total);
}

CohomologyClass gamma_class_xn(int n, unsigned digits) {
    hp::PrecisionScope scope(digits);
    return gamma_class_xn(n);
}

CohomologyClass ch_OE(int n, int m) {
    if (m < 0 || m > n) throw std::invalid_argument("ch_OE needs 0 <= m <= n");
    CohomologyRing R(n);
    const Real two_pi = Real(2.0) * hp::pi();
    // e^{i theta x} for nilpotent x, with i carried exactly
    auto exp_i = [&](const CohomologyClass& x, const Real& theta) {
        auto sum = ring_one(R);
        auto term = ring_one(R);
        for (int k = 1; k <= R.n + 1; ++k) {
            term = ring_mul(R, term, x);
            term = ring_scale(term, Complex(Real(0.0), theta / Real(k)));
            sum = ring_add(sum, term);
        }
        return sum;
    };
    auto a = exp_i(ring_p1(R), -two_pi * Real(m));
    auto b = exp_i(ring_E(R), -two_pi);
    auto one_minus_b = ring_scale(b, Complex(-1.0));
    one_minus_b[0] += Complex(1.0);
    return ring_mul(R, a, one_minus_b);
}

namespace {

// Classes A(p1) + E B(p1), with A and B truncated polynomials of degree n.
// E^2 = -n p1 E.
struct AB {
    std::vector<Real> a, b;
};

class ABRing {
public:
    explicit ABRing(int n) : n_(n) {}

    AB zero() const { return {std::vector<Real>(n_ + 1, Real(0.0)), std::vector<Real>(n_ + 1, Real(0.0))}; }
    AB scalar(const Real& c) const {
        AB x = zero();
        x.a[0] = c;
        return x;
    }

    // truncated product of p1 polynomials, accumulated into out
    void poly_mul_add(const std::vector<Real>& x, const std::vector<Real>& y, std::vector<Real>& out,
                      Real& tmp) const {
        for (int i = 0; i <= n_; ++i) {
            if (x[i].is_zero()) continue;
            for (int j = 0; i + j <= n_; ++j) {
                mpfr_mul(tmp.get(), x[i].get(), y[j].get(), MPFR_RNDN);
                mpfr_add(out[i + j].get(), out[i + j].get(), tmp.get(), MPFR_RNDN);
            }
        }
    }

    AB mul(const AB& x, const AB& y) const {
        AB out = zero();
        Real tmp;
        poly_mul_add(x.a, y.a, out.a, tmp);
        poly_mul_add(x.a, y.b, out.b, tmp);
        poly_mul_add(x.b, y.a, out.b, tmp);
        std::vector<Real> bb(n_ + 1, Real(0.0));
        poly_mul_add(x.b, y.b, bb, tmp);
        const Real nn(static_cast<long>(n_));
        for (int i = n_; i >= 1; --i) out.b[i] -= nn * bb[i - 1];
        return out;
    }

    // polynomial in p1 only, times AB
    void mul_poly_add(const std::vector<Real>& p, const AB& y, AB& out, Real& tmp) const {
        poly_mul_add(p, y.a, out.a, tmp);
        poly_mul_add(p, y.b, out.b, tmp);
    }

    AB inverse(const AB& x) const {
        if (x.a[0].is_zero()) throw std::domain_error("inverse of a nilpotent class");
        const Real c = x.a[0];
        AB nil = x;
        nil.a[0] = Real(0.0);
        for (auto& v : nil.a) v /= c;
        for (auto& v : nil.b) v /= c;
        AB sum = scalar(Real(1.0));
        AB term = scalar(Real(1.0));
        for (int k = 1; k <= n_ + 1; ++k) {
            term = mul(term, nil);
            for (auto& v : term.a) v = -v;
            for (auto& v : term.b) v = -v;
            add_to(sum, term);
        }
        for (auto& v : sum.a) v /= c;
        for (auto& v : sum.b) v /= c;
        return sum;
    }

    AB exp_nilpotent(const AB& x) const {
        AB sum = scalar(Real(1.0));
        AB term = scalar(Real(1.0));
        for (int k = 1; k <= n_ + 1; ++k) {
            term = mul(term, x);
            const Real inv = Real(1.0) / Real(k);
            for (auto& v : term.a) v *= inv;
            for (auto& v : term.b) v *= inv;
            add_to(sum, term);
        }
        return sum;
    }

    static void add_to(AB& x, const AB& y) {
        for (std::size_t i = 0; i < x.a.size(); ++i) {
            x.a[i] += y.a[i];
            x.b[i] += y.b[i];
        }
    }

    // A + E B = (A - n p1 B) + p2 B
    CohomologyClass to_class(const CohomologyRing& R, const AB& x) const {
        auto out = ring_zero(R);
        const Real nn(static_cast<long>(n_));
        for (int i = 0; i <= n_; ++i) {
            Real v = x.a[i];
            if (i > 0) v -= nn * x.b[i - 1];
            out[R.index(i, 0)] = Complex(v);
            out[R.index(i, 1)] = Complex(x.b[i]);
        }
        return out;
    }

    long max_exponent(const AB& x) const {
        long e = std::numeric_limits<long>::min();
        for (const auto& v : x.a)
            if (!v.is_zero()) e = std::max(e, v.exponent2());
        for (const auto& v : x.b)
            if (!v.is_zero()) e = std::max(e, v.exponent2());
        return e;
    }

private:
    int n_;
};

struct RowRange {
    long lo = 0, hi = -1;
};

}  // namespace

CohomologyClass j_series_xn(int n, double q1, double q2, double t, JInfo* info, const JOptions& opt) {
    if (n < 1) throw std::invalid_argument("j_series_xn needs n >= 1");
    if (!(q1 > 0) || !(q2 > 0) || !(t > 0)) throw std::invalid_argument("j_series_xn needs q1, q2, t > 0");
    const double working_digits = hp::precision_bits() / 3.3219280948873623;
    if (working_digits < 50) throw std::invalid_argument("j_series_xn needs at least 50 digits");
    const double window_digits = opt.window_digits > 0 ? opt.window_digits : working_digits + 15;
    const double W = window_digits * std::log(10.0) + 20.0;

    const double lx = std::log(q1 * t), ly = std::log(q2 * t * t);
    auto L = [&](long d1, long d2) {
        const long e = d2 - static_cast<long>(n) * d1;
        double v = d1 * lx + d2 * ly - (n + 1) * std::lgamma(d1 + 1.0) - std::lgamma(d2 + 1.0);
        v += e < 0 ? std::lgamma(static_cast<double>(-e)) : -std::lgamma(e + 1.0);
        return v;
    };

    // Each row d2 splits into d1 <= d2/n (e >= 0, the only terms with a scalar part)
    // and d1 > d2/n. The first segment gets its own window so that the degree-0
    // coefficient stays accurate when it is far below the dominant components.
    constexpr long kCap = 50'000'000;
    const double ninf = -std::numeric_limits<double>::infinity();
    auto split = [&](long d2) { return d2 / n; };
    // max over a segment; with keep, also the index range at or above cut
    auto scan_low = [&](long d2, double cut, RowRange* keep, double* dropped) {
        double best = ninf;
        for (long d1 = 0; d1 <= split(d2); ++d1) {
            const double v = L(d1, d2);
            best = std::max(best, v);
            if (!keep) continue;
            if (v >= cut) {
                if (keep->hi < keep->lo) keep->lo = d1;
                keep->hi = d1;
            } else {
                *dropped = std::max(*dropped, v);
            }
        }
        return best;
    };
    auto scan_high = [&](long d2, double cut, RowRange* keep, double* dropped) {
        double best = ninf;
        long best_at = split(d2) + 1;
        for (long d1 = split(d2) + 1;; ++d1) {
            const double v = L(d1, d2);
            if (v > best) {
                best = v;
                best_at = d1;
            }
            if (keep) {
                if (v >= cut) {
                    if (keep->hi < keep->lo) keep->lo = d1;
                    keep->hi = d1;
                } else {
                    *dropped = std::max(*dropped, v);
                }
            }
            const double stop = keep ? cut - 60.0 : best - W - 60.0;
            if (d1 > best_at && v < stop) break;
            if (d1 > kCap) throw std::runtime_error("j_series_xn: degree cap exceeded");
        }
        return best;
    };

    std::vector<double> max_low, max_high;
    double global = ninf, global_low = ninf;
    // row maxima zigzag with d2 mod n, so stop after a run of rows below the window
    int quiet = 0;
    for (long d2 = 0;; ++d2) {
        const double m0 = scan_low(d2, 0.0, nullptr, nullptr);
        const double m1 = scan_high(d2, 0.0, nullptr, nullptr);
        max_low.push_back(m0);
        max_high.push_back(m1);
        global_low = std::max(global_low, m0);
        global = std::max({global, m0, m1});
        const bool below = m0 < global_low - W - 60.0 && m1 < global - W - 60.0;
        quiet = below ? quiet + 1 : 0;
        if (quiet > 2 * n + 4) break;
        if (d2 > kCap) throw std::runtime_error("j_series_xn: degree cap exceeded");
    }
    const double cut_high = global - W;
    const double cut_low = std::min(cut_high, global_low - W);

    struct Row {
        RowRange seg[2];
    };
    std::vector<Row> rows(max_low.size());
    double dropped = ninf, dropped_low = ninf;
    long d1_min = std::numeric_limits<long>::max(), d1_max = 0, d2_max = 0, e_min = 0, e_max = 0, cap = 0;
    std::size_t terms = 0;
    for (std::size_t d2 = 0; d2 < rows.size(); ++d2) {
        const long dd2 = static_cast<long>(d2);
        if (max_low[d2] >= cut_low) scan_low(dd2, cut_low, &rows[d2].seg[0], &dropped_low);
        else dropped_low = std::max(dropped_low, max_low[d2]);
        if (max_high[d2] >= cut_high) scan_high(dd2, cut_high, &rows[d2].seg[1], &dropped);
        else dropped = std::max(dropped, max_high[d2]);
        for (const auto& r : rows[d2].seg) {
            if (r.hi < r.lo) continue;
            d1_min = std::min(d1_min, r.lo);
            d1_max = std::max(d1_max, r.hi);
            d2_max = std::max(d2_max, dd2);
            e_min = std::min(e_min, dd2 - n * r.hi);
            e_max = std::max(e_max, dd2 - n * r.lo);
            cap = std::max(cap, r.hi + 2 * dd2);
            terms += static_cast<std::size_t>(r.hi - r.lo + 1);
        }
    }
    if (global - dropped < 15.0 * std::log(10.0) || global_low - dropped_low < 15.0 * std::log(10.0))
        throw std::runtime_error("j_series_xn: degree cap too small");

    ABRing ring(n);
    const Real q1t = Real(q1) * Real(t);
    const Real q2t2 = Real(q2) * Real(t) * Real(t);

    // P(d1) = (q1 t)^{d1} / prod (p1 + k)^{n+1}
    std::vector<std::vector<Real>> P(static_cast<std::size_t>(d1_max - d1_min + 1));
    {
        std::vector<Real> cur(n + 1, Real(0.0));
        cur[0] = Real(1.0);
        std::vector<Real> f(n + 1, Real(0.0)), next(n + 1, Real(0.0));
        Real tmp;
        // (k + p1)^{-(n+1)} = sum_i (-1)^i C(n+i, i) k^{-(n+1)-i} p1^i
        std::vector<Real> binom(n + 1, Real(0.0));
        {
            Real c(1.0);
            for (int i = 0; i <= n; ++i) {
                binom[i] = (i % 2) ? -c : c;
                c = c * Real(n + 1 + i) / Real(i + 1);
            }
        }
        for (long d1 = 0; d1 <= d1_max; ++d1) {
            if (d1 > 0) {
                const Real k(d1);
                const Real kinv = Real(1.0) / k;
                Real pw = hp::pow_int(kinv, n + 1);
                for (int i = 0; i <= n; ++i) {
                    f[i] = binom[i] * pw;
                    pw *= kinv;
                }
                for (auto& v : next) v = Real(0.0);
                ring.poly_mul_add(cur, f, next, tmp);
                for (int i = 0; i <= n; ++i) cur[i] = next[i] * q1t;
            }
            if (d1 >= d1_min) P[static_cast<std::size_t>(d1 - d1_min)] = cur;
        }
    }

    // F(e): prod_{k=e+1}^{0} (E + k) for e < 0, 1 / prod_{k=1}^{e} (E + k) for e >= 0
    std::vector<AB> F(static_cast<std::size_t>(e_max - e_min + 1));
    {
        auto store = [&](long e, const AB& v) {
            if (e >= e_min && e <= e_max) F[static_cast<std::size_t>(e - e_min)] = v;
        };
        AB cur = ring.scalar(Real(1.0));
        store(0, cur);
        for (long e = 1; e <= e_max; ++e) {
            AB lin = ring.scalar(Real(e));
            lin.b[0] = Real(1.0);
            cur = ring.mul(cur, ring.inverse(lin));
            store(e, cur);
        }
        cur = ring.scalar(Real(1.0));
        for (long e = -1; e >= e_min; --e) {
            AB lin = ring.scalar(Real(e + 1));  // E + (e+1)
            lin.b[0] = Real(1.0);
            cur = ring.mul(cur, lin);
            store(e, cur);
        }
    }

    // S(d2) = (q2 t^2)^{d2} / prod (p2 + k), p2 = n p1 + E
    std::vector<AB> S(static_cast<std::size_t>(d2_max + 1));
    {
        AB cur = ring.scalar(Real(1.0));
        S[0] = cur;
        for (long d2 = 1; d2 <= d2_max; ++d2) {
            AB lin = ring.scalar(Real(d2));
            if (n >= 1) lin.a[1] = Real(static_cast<long>(n));
            lin.b[0] = Real(1.0);
            cur = ring.mul(cur, ring.inverse(lin));
            for (auto& v : cur.a) v *= q2t2;
            for (auto& v : cur.b) v *= q2t2;
            S[static_cast<std::size_t>(d2)] = cur;
        }
    }

    const unsigned bits = hp::precision_bits();
    std::vector<AB> row_sum(rows.size());
    std::vector<long> row_term_exp(rows.size(), std::numeric_limits<long>::min());
    parallel_for(rows.size(), [&](std::size_t d2) {
        hp::set_precision_bits(bits);
        const auto& row = rows[d2];
        if (row.seg[0].hi < row.seg[0].lo && row.seg[1].hi < row.seg[1].lo) return;
        AB acc = ring.zero();
        Real tmp;
        long biggest = std::numeric_limits<long>::min();
        for (const auto& r : row.seg)
            for (long d1 = r.lo; d1 <= r.hi; ++d1) {
                const long e = static_cast<long>(d2) - n * d1;
                AB term = ring.zero();
                ring.mul_poly_add(P[static_cast<std::size_t>(d1 - d1_min)],
                                  F[static_cast<std::size_t>(e - e_min)], term, tmp);
                biggest = std::max(biggest, ring.max_exponent(term));
                ABRing::add_to(acc, term);
            }
        const AB& s = S[d2];
        row_sum[d2] = ring.mul(acc, s);
        row_term_exp[d2] = biggest + ring.max_exponent(s);
    });

    AB total = ring.zero();
    long biggest = std::numeric_limits<long>::min();
    for (std::size_t d2 = 0; d2 < rows.size(); ++d2) {
        if (row_term_exp[d2] == std::numeric_limits<long>::min()) continue;
        ABRing::add_to(total, row_sum[d2]);
        biggest = std::max(biggest, row_term_exp[d2]);
    }
    const long result_exp = ring.max_exponent(total);
    const double cancellation = (biggest - result_exp) * std::log10(2.0);
    if (info) {
        info->d1_min = d1_min;
        info->d1_max = d1_max;
        info->d2_max = d2_max;
        info->degree_cap = cap;
        info->terms = terms;
        info->log_max_term = global;
        info->log_first_dropped = dropped;
        info->cancellation_digits = cancellation;
    }
    if (working_digits - cancellation < opt.min_result_digits)
        throw PrecisionError("j_series_xn: precision insufficient (cancellation of " +
                             std::to_string(cancellation) + " digits)",
                             cancellation);

    if (opt.include_exp_tau) {
        // tau + c1 log t = log(q1 t) p1 + log(q2 t^2) p2
        AB x = ring.zero();
        const Real a = hp::log(q1t), b = hp::log(q2t2);
        if (n >= 1) x.a[1] = a + Real(static_cast<long>(n)) * b;
        x.b[0] = b;
        total = ring.mul(ring.exp_nilpotent(x), total);
    }
    return ring.to_class(CohomologyRing(n), total);
}

Real period_value(const PeriodSeries& s, double t) {
    Real sum(0.0), tk(1.0), fact(1.0);
    const Real tr(t);
    for (std::size_t k = 0; k < s.a.size(); ++k) {
        if (k > 0) {
            tk *= tr;
            fact *= Real(static_cast<long>(k));
        }
        if (s.a[k] == 0) continue;
        Real a;
        mpfr_set_z(a.get(), s.a[k].backend().data(), MPFR_RNDN);
        sum += a * tk / fact;
    }
    return sum;
}

double class_angle(const CohomologyClass& a, const CohomologyClass& b) {
    Real aa(0.0), bb(0.0);
    Complex ab(0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        aa += hp::norm(a[k]);
        bb += hp::norm(b[k]);
        ab += hp::conj(a[k]) * b[k];
    }
    if (aa.is_zero() || bb.is_zero()) throw std::invalid_argument("class_angle: zero class");
    // residual of b after projection on a, relative to |b|
    const Complex c = ab / Complex(aa);
    Real res(0.0);
    for (std::size_t k = 0; k < a.size(); ++k) res += hp::norm(b[k] - c * a[k]);
    const double s = std::sqrt(std::max(0.0, (res / bb).to_double()));
    return std::asin(std::min(1.0, s));
}

std::vector<double> unit_direction(const CohomologyClass& a) {
    Real nrm(0.0);
    std::size_t big = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        nrm += hp::norm(a[k]);
        if (hp::abs(a[k].re) > hp::abs(a[big].re)) big = k;
    }
    nrm = hp::sqrt(nrm);
    if (nrm.is_zero()) throw std::invalid_argument("unit_direction: zero class");
    std::vector<double> out(a.size());
    const double sign = a[big].re < Real(0.0) ? -1.0 : 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = sign * (a[k].re / nrm).to_double();
    return out;
}

std::vector<double> default_t_schedule() { return {10, 15, 20, 25, 30, 35, 40}; }

namespace {

CohomologyClass from_doubles(const std::vector<double>& v) {
    CohomologyClass c;
    c.reserve(v.size());
    for (double x : v) c.emplace_back(Complex(x));
    return c;
}

double vec_angle(const std::vector<double>& a, const std::vector<double>& b) {
    return class_angle(from_doubles(a), from_doubles(b));
}

}  // namespace

PrincipalLimit principal_class_limit(int n, double q1, double q2, const std::vector<double>& t_schedule,
                                     unsigned digits) {
    if (t_schedule.empty()) throw std::invalid_argument("principal_class_limit: empty schedule");
    hp::PrecisionScope scope(digits + 20);
    PrincipalLimit out;
    out.n = n;
    out.q1 = q1;
    out.q2 = q2;
    out.digits = digits;
    const auto gam = gamma_class_xn(n);
    CohomologyClass gam_ch;
    if (n % 2 == 0) gam_ch = ring_mul(CohomologyRing(n), gam, ch_OE(n, n / 2));

    std::vector<double> ts = t_schedule;
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
        LimitSample s;
        s.t = t;
        // odd n sums alternate in sign, so the precision follows the measured cancellation
        CohomologyClass J;
        unsigned work = digits + 20;
        for (int attempt = 0;; ++attempt) {
            hp::PrecisionScope inner(work);
            try {
                J = j_series_xn(n, q1, q2, t, &s.info);
                break;
            } catch (const PrecisionError& e) {
                if (attempt >= 3) throw;
                work = digits + 40 + static_cast<unsigned>(std::ceil(e.cancellation * 1.1));
            }
        }
        s.direction = unit_direction(J);
        s.angle_to_gamma = class_angle(J, gam);
        if (n % 2 == 0) s.angle_to_gamma_ch = class_angle(J, gam_ch);
        out.samples.push_back(std::move(s));
    }
    // common sign, fixed by the last sample
    const auto& ref = out.samples.back().direction;
    for (auto& s : out.samples) {
        double dot = 0.0;
        for (std::size_t k = 0; k < ref.size(); ++k) dot += ref[k] * s.direction[k];
        if (dot < 0)
            for (auto& v : s.direction) v = -v;
    }
    for (std::size_t i = 1; i < out.samples.size(); ++i)
        out.increments.push_back(vec_angle(out.samples[i - 1].direction, out.samples[i].direction));
    if (out.increments.size() >= 2) {
        const double first = *std::max_element(out.increments.begin(), out.increments.end());
        out.converging = out.increments.back() < 0.5 * first || out.increments.back() < 1e-12;
    }

    // Neville tableau in h = 1/t over the last few samples. The entry with the smallest
    // change from its predecessor is taken, so a sequence that already converges
    // geometrically keeps its last sample.
    const std::size_t K = std::min<std::size_t>(4, out.samples.size());
    const std::size_t start = out.samples.size() - K;
    const std::size_t dim = ref.size();
    std::vector<double> h(K);
    for (std::size_t i = 0; i < K; ++i) h[i] = 1.0 / out.samples[start + i].t;
    // T[m][i]: order m estimate from samples i..i+m
    std::vector<std::vector<std::vector<double>>> T(K);
    for (std::size_t i = 0; i < K; ++i) T[0].push_back(out.samples[start + i].direction);
    for (std::size_t m = 1; m < K; ++m)
        for (std::size_t i = 0; i + m < K; ++i) {
            std::vector<double> v(dim);
            for (std::size_t c = 0; c < dim; ++c)
                v[c] = (h[i + m] * T[m - 1][i][c] - h[i] * T[m - 1][i + 1][c]) / (h[i + m] - h[i]);
            T[m].push_back(std::move(v));
        }
    auto dist = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double d = 0.0;
        for (std::size_t c = 0; c < dim; ++c) d = std::max(d, std::abs(x[c] - y[c]));
        return d;
    };
    out.direction = T[0][K - 1];
    double best = K >= 2 ? dist(T[0][K - 1], T[0][K - 2]) : 0.0;
    for (std::size_t m = 1; m < K; ++m) {
        const std::size_t i = K - 1 - m;  // the estimate using the latest samples
        const double err = dist(T[m][i], T[m - 1][i + 1]);
        if (err < best) {
            best = err;
            out.direction = T[m][i];
        }
    }
    out.extrapolation_error = best;
    const auto dir = from_doubles(out.direction);
    out.angle_to_gamma = class_angle(dir, gam);
    if (n % 2 == 0) out.angle_to_gamma_ch = class_angle(dir, gam_ch);
    return out;
}

}  // namespace fano
