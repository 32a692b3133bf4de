#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fano {

using cplx = std::complex<double>;
using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Three-valued outcome of a numerical test with a tolerance band.
enum class Tri { False, True, Indeterminate };

const char* to_string(Tri t);
inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }
Tri tri_and(Tri a, Tri b);

// Worker count: hardware concurrency, capped by FANO_SPECTRA_THREADS.
unsigned thread_count();

// Runs body(i) for i in [0, n) over the worker pool. Results must be
// written by index so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// splitmix64 step, used to derive independent per-task seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace fano
