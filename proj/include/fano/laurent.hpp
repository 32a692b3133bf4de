#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <map>
#include <string>

#include "fano/common.hpp"
#include "fano/toric.hpp"

namespace fano {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Exponent = std::vector<int>;

template <class C>
struct Laurent {
    int nvars = 0;
    std::map<Exponent, C> terms;  // no zero coefficients

    Laurent() = default;
    explicit Laurent(int n) : nvars(n) {}

    void add_term(const Exponent& e, const C& c) {
        auto it = terms.find(e);
        if (it == terms.end()) {
            if (c != C(0)) terms.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == C(0)) terms.erase(it);
        }
    }
    C coefficient(const Exponent& e) const {
        auto it = terms.find(e);
        return it == terms.end() ? C(0) : it->second;
    }
    C constant_term() const { return coefficient(Exponent(nvars, 0)); }
};

using IntLaurent = Laurent<BigInt>;
using RatLaurent = Laurent<Rational>;
using CLaurent = Laurent<cplx>;

template <class C>
Laurent<C> multiply(const Laurent<C>& a, const Laurent<C>& b) {
    Laurent<C> out(a.nvars);
    Exponent e(a.nvars);
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            for (int k = 0; k < a.nvars; ++k) e[k] = ea[k] + eb[k];
            out.add_term(e, ca * cb);
        }
    return out;
}

std::string to_string(const IntLaurent& f);
std::string to_string(const CLaurent& f);

// Parses sums like "x1 + x2 + x2^2*x1^-1 + 3*x1^-1" over variables x1..xN.
IntLaurent parse_laurent(const std::string& text, int nvars);

CLaurent to_complex(const IntLaurent& f);

// Origin strictly inside the Newton polytope of the support.
bool is_convenient(const std::vector<Exponent>& support);
template <class C>
bool is_convenient(const Laurent<C>& f) {
    std::vector<Exponent> s;
    for (const auto& [e, c] : f.terms) s.push_back(e);
    return is_convenient(s);
}

struct QPoint {
    std::vector<cplx> q;
    std::vector<cplx> tau;  // principal log lift, q = exp(tau)
    bool positive_real = false;
    static QPoint from(const std::vector<cplx>& q);
    static QPoint ones(std::size_t r);
};

// Coordinates are dual to the rays of the reference cone; pass
// npos to use default_reference_cone.
CLaurent superpotential(const ToricFanoModel& model, const QPoint& q,
                        std::size_t reference_cone = static_cast<std::size_t>(-1));
IntLaurent mirror_polynomial(const ToricFanoModel& model,
                             std::size_t reference_cone = static_cast<std::size_t>(-1));

// Fast evaluation table for w -> f(exp(w)).
struct LogTable {
    Eigen::MatrixXd exps;  // terms x nvars
    Eigen::VectorXcd coef;
    explicit LogTable(const CLaurent& f);
    int nvars() const { return static_cast<int>(exps.cols()); }
};

struct ScaledValue {
    cplx mantissa;  // value = mantissa * exp(shift)
    double shift = 0.0;
};

cplx eval_log(const LogTable& f, const Eigen::VectorXcd& w);
ScaledValue eval_log_scaled(const LogTable& f, const Eigen::VectorXcd& w);
Eigen::VectorXcd grad_log(const LogTable& f, const Eigen::VectorXcd& w);
Eigen::MatrixXcd hess_log(const LogTable& f, const Eigen::VectorXcd& w);
// Sum of |c_i exp(b_i.w)|, the natural scale for residuals.
double term_scale(const LogTable& f, const Eigen::VectorXcd& w);

BigInt power_constant_term(const IntLaurent& f, int n);
// Cst(f^k) for k = 0..n_max from a single pruned powering pass.
std::vector<BigInt> constant_term_series(const IntLaurent& f, int n_max);

struct PeriodicityResult {
    int r = 0;
    bool pattern_holds = true;
};
PeriodicityResult r_of_f(const IntLaurent& f, int n_max);

double log_abs(const BigInt& x);

}  // namespace fano
