#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fano/lattice.hpp"
#include "fano/toric.hpp"

#include <string>

using namespace fano;

namespace {

std::string fan_file(const char* name) { return std::string(FANO_DATA_DIR) + "/fans/" + name; }

bool orthogonal(const ToricFanoModel& m) {
    const auto prod = multiply(m.weight_matrix, m.fan.rays);
    for (const auto& row : prod)
        for (long long x : row)
            if (x != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("P1 fan file loads") {
    const auto fan = load_fan(fan_file("p1.json"));
    CHECK(fan.dim == 1);
    CHECK(fan.rays.size() == 2);
    const auto m = make_model(fan);
    CHECK(m.euler_char == 2);
    CHECK(m.fano_index == 2);
}

TEST_CASE("non-primitive ray is rejected by index") {
    FanData fan = parse_fan_json(R"({"dim":2,"rays":[[2,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]})");
    CHECK_THROWS_WITH_AS(validate_fan(fan), "non-primitive ray 0", Error);
}

TEST_CASE("singular, duplicate and incomplete fans are rejected") {
    auto bad = [](const char* text) {
        FanData fan = parse_fan_json(text);
        CHECK_THROWS_AS(validate_fan(fan), Error);
    };
    // P(1,1,2): the cone on (1,0),(-1,-2) has determinant -2
    bad(R"({"dim":2,"rays":[[1,0],[0,1],[-1,-2]],"max_cones":[[0,1],[1,2],[2,0]]})");
    bad(R"({"dim":2,"rays":[[1,0],[1,0],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]})");
    // one cone missing
    bad(R"({"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2]]})");
    CHECK_THROWS_AS(parse_fan_json("{not json"), Error);
}

TEST_CASE("X_4 fan file: 7 rays, 10 cones, chi = 10") {
    const auto fan = load_fan(fan_file("x4.json"));
    CHECK(fan.dim == 5);
    CHECK(fan.rays.size() == 7);
    CHECK(fan.max_cones.size() == 10);
    CHECK(make_model(fan).euler_char == 10);
}

TEST_CASE("family X_n weight matrix and invariants") {
    for (int n = 1; n <= 8; ++n) {
        const auto m = family_xn(n);
        REQUIRE(m.weight_matrix.size() == 2);
        const auto& w = m.weight_matrix;
        for (int i = 0; i <= n; ++i) {
            CHECK(w[0][i] == 1);
            CHECK(w[1][i] == 0);
        }
        CHECK(w[0][n + 1] == 0);
        CHECK(w[1][n + 1] == 1);
        CHECK(w[0][n + 2] == -n);
        CHECK(w[1][n + 2] == 1);
        CHECK(m.c1 == IntVec{1, 2});
        CHECK(m.fano_index == 1);
        CHECK(m.euler_char == 2 * n + 2);
        CHECK(orthogonal(m));
    }
    CHECK(family_xn(1).euler_char == 4);  // blow-up of P^2 at a point
}

TEST_CASE("family X'_n has Fano index two") {
    for (int n = 1; n <= 8; ++n) {
        const auto m = family_xn_prime(n);
        CHECK(m.fano_index == 2);
        CHECK(m.euler_char == 2 * n + 2);
        CHECK(orthogonal(m));
    }
    // n = 1 is P1 x P1, n = 2 is the blow-up of P3 at a point
    CHECK(family_xn_prime(1).euler_char == 4);
    CHECK(family_xn_prime(2).fan.dim == 3);
}

TEST_CASE("projective spaces") {
    for (int n = 1; n <= 5; ++n) {
        const auto m = projective_space(n);
        REQUIRE(m.weight_matrix.size() == 1);
        for (long long x : m.weight_matrix[0]) CHECK(x == 1);
        CHECK(m.fano_index == n + 1);
        CHECK(m.euler_char == n + 1);
    }
}

TEST_CASE("P1 x P1 classes and del Pezzo fans") {
    const auto m = make_model(load_fan(fan_file("p1xp1.json")));
    CHECK(m.rank() == 2);
    CHECK(orthogonal(m));
    CHECK(m.fano_index == 2);
    // two independent relations, each pairing opposite rays
    for (const auto& row : m.weight_matrix) {
        CHECK(row[0] == row[2]);
        CHECK(row[1] == row[3]);
    }
    struct Expect {
        const char* file;
        long long chi, index;
    };
    for (const auto& e : {Expect{"p2.json", 3, 3}, Expect{"bl1.json", 4, 1}, Expect{"bl2.json", 5, 1},
                          Expect{"bl3.json", 6, 1}}) {
        const auto model = make_model(load_fan(fan_file(e.file)));
        CHECK(model.euler_char == e.chi);
        CHECK(model.fano_index == e.index);
        CHECK(orthogonal(model));
    }
}

TEST_CASE("fan JSON round trip") {
    const auto m = family_xn(3);
    const auto again = parse_fan_json(fan_to_json(m.fan));
    CHECK(again.rays == m.fan.rays);
    CHECK(again.max_cones == m.fan.max_cones);
}

TEST_CASE("lattice helpers") {
    CHECK(det(IntMat{{2, 1}, {1, 1}}) == 1);
    CHECK(smith_diagonal(IntMat{{2, 0}, {0, 3}}) == IntVec{1, 6});
    const IntMat u{{2, 1}, {1, 1}};
    CHECK(multiply(u, unimodular_inverse(u)) == identity(2));
}
