#pragma once

#include <string>

#include "fano/common.hpp"

namespace fano {

struct FanData {
    std::string name;
    int dim = 0;
    IntMat rays;       // m rows of length dim
    std::vector<std::vector<int>> max_cones;  // each of size dim, 0-based
};

enum class FamilyTag { None, Xn, XnPrime };

struct ToricFanoModel {
    FanData fan;
    IntMat weight_matrix;  // r x m, column i = class of D_i
    IntVec c1;             // column sums of weight_matrix
    long long fano_index = 0;
    long long euler_char = 0;
    FamilyTag family = FamilyTag::None;
    int family_n = 0;

    std::size_t num_rays() const { return fan.rays.size(); }
    std::size_t rank() const { return weight_matrix.size(); }
};

FanData parse_fan_json(const std::string& text);
FanData load_fan(const std::string& path);
std::string fan_to_json(const FanData& fan);

// Throws Error naming the offending ray/cone on violation.
void validate_fan(const FanData& fan, std::uint64_t seed = 7, int samples = 64);

IntMat divisor_classes(const FanData& fan);
long long fano_index(const IntMat& weight_matrix);
ToricFanoModel make_model(const FanData& fan);
ToricFanoModel make_model_with_basis(const FanData& fan, const IntMat& weight_matrix);

// P_{P^n}(O + O(n)).
ToricFanoModel family_xn(int n);
// P_{P^n}(O + O(n-1)).
ToricFanoModel family_xn_prime(int n);
// P^n with rays e_1..e_n, -sum e_i.
ToricFanoModel projective_space(int n);

// Index of the first maximal cone whose rays are the standard basis, else 0.
std::size_t default_reference_cone(const FanData& fan);

}  // namespace fano
