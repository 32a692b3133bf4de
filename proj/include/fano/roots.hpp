#pragma once

#include <cstdint>

#include "fano/common.hpp"

namespace fano {

// Polynomials are coefficient vectors in ascending degree: p(t) = sum c[k] t^k.
using Poly = std::vector<cplx>;

cplx poly_eval(const Poly& p, cplx t);
cplx poly_deriv_eval(const Poly& p, cplx t);
// |p(t)| / sum |c_k| |t|^k
double backward_error(const Poly& p, cplx t);

struct RootOptions {
    double tol = 1e-14;
    int max_iter = 600;
    std::uint64_t seed = 1;
};

// Aberth-Ehrlich on a perturbed initial circle, then Newton polish.
std::vector<cplx> aberth_roots(const Poly& p, const RootOptions& opt = {});

}  // namespace fano
