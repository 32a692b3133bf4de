#pragma once

#include <Eigen/Dense>
#include <optional>

#include "fano/critical.hpp"
#include "fano/eigen.hpp"

namespace fano {

// Matrix of multiplication by c1 = (2n+1) x1 + 2 y2 on
// C[x1, y2] / (x1^{n+1} - q1 y2^n, y2 (y2 + n x1) - q2), basis x1^i y2^j
// (i <= n, j <= 1) at index i + (n+1) j.
Eigen::MatrixXcd batyrev_matrix_xn(int n, cplx q1, cplx q2);

struct Tolerances {
    double equal = 1e-6;   // relative radius inside which values count as equal
    double strict = 1e-9;  // relative gap beyond which an inequality counts as strict
};

// gap > equal -> True, gap <= strict -> False, otherwise Indeterminate.
Tri strictly_positive(double gap, double scale, const Tolerances& tol);
// dist <= strict -> True, dist > equal -> False, otherwise Indeterminate.
Tri approx_equal(double dist, double scale, const Tolerances& tol);

struct Flag {
    Tri value = Tri::Indeterminate;
    double margin = 0.0;  // the number that decided the flag
    std::string detail;
};

struct Flags {
    Flag property_O1, property_O2, condition_star, property_OA, B_analogue_a, B_analogue_b;
    Tri conjecture_O() const { return tri_and(property_O1.value, property_O2.value); }
};

struct SpectrumReport {
    std::vector<Cluster> eigenvalues;
    double rho = 0.0;
    double rho_prime = 0.0;
    double T_con = 0.0;
    double T_Acon = 0.0;
    long long fano_index = 1;
    Flags flags;
    Tolerances tol;
    std::string source;  // "critical-values" or "batyrev"
};

// The conifold point and critical list are only used by the B-analogue
// flags; pass nullptr / {} to mark those Indeterminate.
Flags check_flags(const std::vector<Cluster>& eigs, long long fano_index, double T_con, double T_Acon,
                  const CriticalPoint* conifold, const std::vector<CriticalPoint>& crits,
                  const Tolerances& tol = {});

SpectrumReport make_report(const std::vector<cplx>& eigenvalues, long long fano_index, double T_con,
                           double T_Acon, const CriticalPoint* conifold,
                           const std::vector<CriticalPoint>& crits, const std::string& source,
                           const Tolerances& tol = {});

}  // namespace fano
