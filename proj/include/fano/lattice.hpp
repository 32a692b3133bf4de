#pragma once

#include "fano/common.hpp"

namespace fano {

long long gcd_all(const IntVec& v);
long long det(const IntMat& square);  // Bareiss elimination, exact
IntMat transpose(const IntMat& a);
IntMat multiply(const IntMat& a, const IntMat& b);
IntMat identity(std::size_t n);

// Rows form a lattice basis of {l in Z^m : l * b = 0}, where b has m rows.
// Computed by unimodular row reduction of [b | I] (row Hermite form).
IntMat integer_left_kernel(const IntMat& b, std::size_t* rank_out = nullptr);

// Diagonal of the Smith normal form (nonzero entries only).
IntVec smith_diagonal(IntMat a);

// Inverse of a unimodular matrix (throws if |det| != 1).
IntMat unimodular_inverse(const IntMat& a);

}  // namespace fano
