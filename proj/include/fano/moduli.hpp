#pragma once

#include "fano/critical.hpp"
#include "fano/eigen.hpp"

namespace fano {

struct ScanPoint {
    double q1 = 1.0, q2 = 1.0;
    std::vector<cplx> values;  // indexed by branch id after matching
    std::size_t real_count = 0;
    int t_plus = -1, t_minus = -1;  // branch ids of T_+ and T_-
    bool ambiguous = false;         // two pairings nearly tied
    bool refined = false;           // inserted by step-halving
};

struct RayScan {
    int n = 0;
    double q1 = 1.0;
    std::vector<ScanPoint> points;
    double min_separation = 0.0;  // min |T_+ - T_-|
    double min_separation_q2 = 0.0;
    bool census_ok = true;        // exactly two real values everywhere
};

// Values along q2 for fixed q1, branches matched by optimal assignment
// between neighbours, halving steps where the assignment is ambiguous.
RayScan scan_ray(int n, double q1, const std::vector<double>& q2_grid);
std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::string scan_csv(const RayScan& scan);

struct BranchGroup {
    double slope = 0.0;
    std::size_t count = 0;
};

struct TropicalFit {
    int n = 0;
    double lambda = 0.0;
    std::vector<double> T_values;
    std::vector<double> slopes;        // one per branch
    std::vector<double> residuals;     // RMS of each branch fit
    std::vector<BranchGroup> groups;   // slopes grouped within 0.05
    std::vector<BranchGroup> predicted;
    double worst_relative_error = 0.0; // against the predicted slopes, after matching
    bool matches(double rel_tol) const;
};

// Fits log|u| against log T per branch, with u from q = (1, T^lambda).
TropicalFit tropical_exponents(int n, double lambda, const std::vector<double>& T_values);
std::vector<BranchGroup> predicted_exponents(int n, double lambda);

enum class Boundary { Pi, Phi };  // Pi: q1 -> 0, Phi: q2 -> 0

struct LimitCheck {
    Boundary boundary = Boundary::Phi;
    double small = 1e-8;
    std::vector<cplx> values;
    std::vector<Cluster> clusters;
    std::vector<std::size_t> sizes;  // sorted descending
    cplx isolated = 0.0;             // Phi only
    double isolated_rel_error = 0.0; // against (-n)^n
    bool ok = false;
};

LimitCheck limit_eigenvalue_checks(int n, Boundary boundary, double small = 1e-8);

}  // namespace fano
