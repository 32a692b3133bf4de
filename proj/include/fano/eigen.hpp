#pragma once

#include <Eigen/Dense>

#include "fano/common.hpp"

namespace fano {

// All eigenvalues by Householder reduction to Hessenberg form followed by
// single-shift (Wilkinson) complex QR with deflation.
std::vector<cplx> eigenvalues_qr(const Eigen::MatrixXcd& a, int max_sweeps_per_value = 200);

struct Cluster {
    cplx value;                 // mean of the members
    std::vector<cplx> members;
    std::size_t multiplicity() const { return members.size(); }
    double spread() const;      // largest member distance from the mean
};

// Single-linkage clustering at radius rel_radius * max(1, max |v|).
std::vector<Cluster> cluster_by_radius(const std::vector<cplx>& values, double rel_radius = 1e-6);

// Cuts the minimum spanning tree at its k-1 longest edges.
std::vector<Cluster> cluster_into(const std::vector<cplx>& values, std::size_t k);

}  // namespace fano
