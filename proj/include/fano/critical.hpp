#pragma once

#include <Eigen/Dense>
#include <limits>

#include "fano/laurent.hpp"
#include "fano/roots.hpp"

namespace fano {

struct CriticalPoint {
    Eigen::VectorXcd w;  // log coordinates, Im in (-pi, pi]
    cplx value;
    double grad_residual = 0.0;  // |grad| relative to the term scale
    cplx hess_logdet;
    bool is_conifold = false;
};

// Unique minimiser of w -> f(exp w) over real w.
CriticalPoint conifold_point(const CLaurent& f, double tol = 1e-12);

struct CriticalOptions {
    double box = 3.0;       // Re w uniform in [-box, box]
    std::size_t budget = 2048;
    std::size_t batch = 64;
    std::uint64_t seed = 1;
    double tol = 1e-12;
    double dedup_radius = 1e-8;
};

struct CriticalSearch {
    std::vector<CriticalPoint> points;
    std::size_t expected = 0;
    std::size_t starts_used = 0;
    bool complete() const { return points.size() == expected; }
};

// Multi-start damped Newton on grad_log f = 0. Starts that never reach
// some points (thin basins far from the origin) are backed up by a
// monodromy parameter homotopy in coefficient space.
CriticalSearch critical_points_all(const CLaurent& f, std::size_t expected,
                                   const CriticalOptions& opt = {});

// Newton-polishes w in place; returns the relative gradient residual.
double polish_critical(const LogTable& f, Eigen::VectorXcd& w, int max_steps = 8);

// Families with closed-form univariate reductions.
enum class ReductionKind { Xn, XnPrimeOdd, XnPrimeEven };

struct UnivariateReduction {
    ReductionKind kind = ReductionKind::Xn;
    int n = 0;
    Poly constraint;          // h - 1 (or its q-deformed form), ascending
    std::vector<cplx> roots;
    std::vector<cplx> values;  // all 2n+2 critical values with multiplicity
    double max_root_residual = 0.0;
    // distinguished real roots; NaN when not applicable
    double a_plus = std::numeric_limits<double>::quiet_NaN();
    double a_minus = std::numeric_limits<double>::quiet_NaN();
    // X_n: a_minus + n q1^{1/(n+1)} without cancellation; a_minus itself rounds onto -n for large n
    double a_minus_offset = std::numeric_limits<double>::quiet_NaN();
    cplx a_imag = std::numeric_limits<double>::quiet_NaN();  // even X'_n, Im > 0
    std::size_t real_root_count = 0;
    // exponents of (x_1..x_n, x_{n+1}) in t
    int x_exp = 0, y_exp = 0;
};

// X_n = P_{P^n}(O + O(n)): t^{2n+2} + n q1^{1/(n+1)} t^{2n+1} - q2 = 0,
// u = 2 t^{n+1} + (2n+1) q1^{1/(n+1)} t^n.
UnivariateReduction family_reduction_xn(int n, cplx q1 = 1.0, cplx q2 = 1.0);
// X'_n = P_{P^n}(O + O(n-1)), n >= 3.
UnivariateReduction family_reduction_xn_prime(int n);

cplx h_xn(int n, cplx t);
cplx g_xn(int n, cplx t);
cplx g_tilde_xn(int n, cplx t);
cplx g_check_xn(int n, cplx t);
// odd X'_n with m = (n-1)/2
cplx h1(int m, cplx t);
cplx g1(int m, cplx t);
cplx g1_tilde(int m, cplx t);
cplx g1_check(int m, cplx t);
// even X'_n
cplx h0(int n, cplx t);
cplx g0(int n, cplx t);
cplx g0_tilde(int n, cplx t);
cplx g0_check(int n, cplx t);

// Largest pair distance under the min-cost assignment (Hungarian).
double matching_distance(const std::vector<cplx>& a, const std::vector<cplx>& b,
                         std::vector<int>* assignment = nullptr);

}  // namespace fano
