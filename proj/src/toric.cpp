#include "fano/toric.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "fano/lattice.hpp"

namespace fano {

using nlohmann::json;

FanData parse_fan_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("fan file parse error: ") + e.what());
    }
    FanData fan;
    try {
        fan.name = j.value("name", std::string("unnamed"));
        fan.dim = j.at("dim").get<int>();
        fan.rays = j.at("rays").get<IntMat>();
        fan.max_cones = j.at("max_cones").get<std::vector<std::vector<int>>>();
    } catch (const json::exception& e) {
        throw Error(std::string("fan file parse error: ") + e.what());
    }
    return fan;
}

FanData load_fan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open fan file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    FanData fan = parse_fan_json(ss.str());
    validate_fan(fan);
    return fan;
}

std::string fan_to_json(const FanData& fan) {
    json j;
    j["name"] = fan.name;
    j["dim"] = fan.dim;
    j["rays"] = fan.rays;
    j["max_cones"] = fan.max_cones;
    return j.dump();
}

void validate_fan(const FanData& fan, std::uint64_t seed, int samples) {
    const int n = fan.dim;
    if (n <= 0) throw Error("fan dimension must be positive");
    if (fan.rays.empty()) throw Error("fan has no rays");
    for (std::size_t i = 0; i < fan.rays.size(); ++i) {
        if (static_cast<int>(fan.rays[i].size()) != n)
            throw Error("ray " + std::to_string(i) + " has wrong length");
        if (gcd_all(fan.rays[i]) != 1) throw Error("non-primitive ray " + std::to_string(i));
        for (std::size_t j = 0; j < i; ++j)
            if (fan.rays[i] == fan.rays[j])
                throw Error("duplicate ray " + std::to_string(i) + " (equals ray " + std::to_string(j) + ")");
    }
    if (fan.max_cones.empty()) throw Error("fan has no maximal cones");
    std::vector<Eigen::MatrixXd> inverses;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        const auto& cone = fan.max_cones[c];
        if (static_cast<int>(cone.size()) != n)
            throw Error("cone " + std::to_string(c) + " does not have dim rays");
        IntMat m;
        for (int idx : cone) {
            if (idx < 0 || idx >= static_cast<int>(fan.rays.size()))
                throw Error("cone " + std::to_string(c) + " references missing ray " + std::to_string(idx));
            m.push_back(fan.rays[idx]);
        }
        long long d = det(m);
        if (d != 1 && d != -1)
            throw Error("singular cone " + std::to_string(c) + " (|det| = " + std::to_string(std::llabs(d)) + ")");
        Eigen::MatrixXd a(n, n);
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row) a(row, col) = static_cast<double>(m[col][row]);
        inverses.push_back(a.inverse());
    }
    // completeness: random directions must lie in exactly one maximal cone
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd v(n);
        for (int k = 0; k < n; ++k) v(k) = gauss(rng);
        int hits = 0;
        for (const auto& inv : inverses) {
            Eigen::VectorXd lam = inv * v;
            if ((lam.array() > 0).all()) ++hits;
        }
        if (hits != 1)
            throw Error("fan is not complete or cones overlap: a sampled direction lies in " +
                        std::to_string(hits) + " maximal cones");
    }
}

IntMat divisor_classes(const FanData& fan) {
    std::size_t rank = 0;
    IntMat w = integer_left_kernel(fan.rays, &rank);
    if (static_cast<int>(rank) != fan.dim) throw Error("not a complete fan's ray set");
    return w;
}

long long fano_index(const IntMat& weight_matrix) {
    for (long long d : smith_diagonal(weight_matrix))
        if (d != 1) throw Error("torsion in the class group is unsupported");
    IntVec c1(weight_matrix.size(), 0);
    for (std::size_t k = 0; k < weight_matrix.size(); ++k)
        for (long long x : weight_matrix[k]) c1[k] += x;
    return gcd_all(c1);
}

ToricFanoModel make_model_with_basis(const FanData& fan, const IntMat& w) {
    ToricFanoModel model;
    model.fan = fan;
    model.weight_matrix = w;
    IntMat wb = multiply(w, fan.rays);
    for (const auto& row : wb)
        for (long long x : row)
            if (x != 0) throw Error("weight matrix is not orthogonal to the rays");
    if (w.size() != fan.rays.size() - static_cast<std::size_t>(fan.dim))
        throw Error("weight matrix has the wrong rank");
    // rows must be a lattice basis of the relation module and the class group free
    for (long long d : smith_diagonal(fan.rays))
        if (d != 1) throw Error("torsion in the class group is unsupported");
    model.c1.assign(w.size(), 0);
    for (std::size_t k = 0; k < w.size(); ++k)
        for (long long x : w[k]) model.c1[k] += x;
    model.fano_index = fano_index(w);
    model.euler_char = static_cast<long long>(fan.max_cones.size());
    return model;
}

ToricFanoModel make_model(const FanData& fan) {
    validate_fan(fan);
    return make_model_with_basis(fan, divisor_classes(fan));
}

namespace {

// Bundle P(O + O(k)) over P^n: base rays e_1..e_n and -sum e_i + k e_{n+1},
// fibre rays -e_{n+1} then e_{n+1}.
FanData projective_bundle_fan(int n, int k, const std::string& name) {
    FanData fan;
    fan.name = name;
    fan.dim = n + 1;
    for (int i = 0; i < n; ++i) {
        IntVec e(n + 1, 0);
        e[i] = 1;
        fan.rays.push_back(e);
    }
    IntVec b(n + 1, -1);
    b[n] = k;
    fan.rays.push_back(b);
    IntVec down(n + 1, 0), up(n + 1, 0);
    down[n] = -1;
    up[n] = 1;
    fan.rays.push_back(down);
    fan.rays.push_back(up);
    // omit one base ray, add one fibre ray; omitting ray n first gives the
    // standard-basis cone first
    for (int fibre : {n + 2, n + 1})
        for (int omit = n; omit >= 0; --omit) {
            std::vector<int> cone;
            for (int i = 0; i <= n; ++i)
                if (i != omit) cone.push_back(i);
            cone.push_back(fibre);
            fan.max_cones.push_back(cone);
        }
    return fan;
}

IntMat bundle_weights(int n, int k) {
    IntMat w(2, IntVec(n + 3, 0));
    for (int i = 0; i <= n; ++i) w[0][i] = 1;
    w[0][n + 2] = -k;
    w[1][n + 1] = 1;
    w[1][n + 2] = 1;
    return w;
}

}  // namespace

ToricFanoModel family_xn(int n) {
    if (n < 1) throw Error("family_xn requires n >= 1");
    FanData fan = projective_bundle_fan(n, n, "X_" + std::to_string(n));
    validate_fan(fan);
    ToricFanoModel m = make_model_with_basis(fan, bundle_weights(n, n));
    m.family = FamilyTag::Xn;
    m.family_n = n;
    return m;
}

ToricFanoModel family_xn_prime(int n) {
    if (n < 1) throw Error("family_xn_prime requires n >= 1");
    FanData fan = projective_bundle_fan(n, n - 1, "X'_" + std::to_string(n));
    validate_fan(fan);
    ToricFanoModel m = make_model_with_basis(fan, bundle_weights(n, n - 1));
    m.family = FamilyTag::XnPrime;
    m.family_n = n;
    return m;
}

ToricFanoModel projective_space(int n) {
    FanData fan;
    fan.name = "P^" + std::to_string(n);
    fan.dim = n;
    for (int i = 0; i < n; ++i) {
        IntVec e(n, 0);
        e[i] = 1;
        fan.rays.push_back(e);
    }
    fan.rays.push_back(IntVec(n, -1));
    for (int omit = n; omit >= 0; --omit) {
        std::vector<int> cone;
        for (int i = 0; i <= n; ++i)
            if (i != omit) cone.push_back(i);
        fan.max_cones.push_back(cone);
    }
    return make_model(fan);
}

std::size_t default_reference_cone(const FanData& fan) {
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        std::set<IntVec> rays;
        for (int idx : fan.max_cones[c]) rays.insert(fan.rays[idx]);
        bool standard = true;
        for (int i = 0; i < fan.dim && standard; ++i) {
            IntVec e(fan.dim, 0);
            e[i] = 1;
            standard = rays.count(e) > 0;
        }
        if (standard) return c;
    }
    return 0;
}

}  // namespace fano
