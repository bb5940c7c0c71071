#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "catqcf/errors.hpp"
#include "catqcf/torus.hpp"
#include "helpers.hpp"

using namespace catqcf;
using testing::direct_dft;
using testing::max_diff;
using testing::random_state;

TEST_CASE("HilbertDim accepts even N only") {
    CHECK(HilbertDim(2).N() == 2);
    CHECK(HilbertDim(512).grid_side() == 1024);
    CHECK_THROWS_AS(HilbertDim(511), ConfigError);
    CHECK_THROWS_AS(HilbertDim(0), ConfigError);
    CHECK_THROWS_AS(HilbertDim(-4), ConfigError);
}

TEST_CASE("wrap_index is total on Z") {
    CHECK(wrap_index(-1, 8) == 7);
    CHECK(wrap_index(8, 8) == 0);
    CHECK(wrap_index(-17, 8) == 7);
    CHECK(wrap_index(123, 8) == 3);
}

TEST_CASE("forward_dft: N=2 delta") {
    const StateVector psi{1.0, 0.0};
    const auto out = forward_dft(psi, HilbertDim(2));
    CHECK(std::abs(out[0] - cplx(1 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(out[1] - cplx(1 / std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("forward_dft: delta at 0 gives uniform, inverse gives delta back") {
    for (int N : {2, 6, 64, 512}) {
        StateVector delta(N, 0.0);
        delta[0] = 1.0;
        const auto u = forward_dft(delta, HilbertDim(N));
        for (const auto& a : u) CHECK(std::abs(a - cplx(1 / std::sqrt(double(N)))) < 1e-14);
        const auto back = inverse_dft(u, HilbertDim(N));
        CHECK(max_diff(back, delta) < 1e-14);
    }
}

TEST_CASE("forward_dft: frozen N=4 values") {
    // independent evaluation of the direct sum
    const StateVector psi{1.0, cplx(0, 2), -1.0, 0.5};
    const StateVector expect{{0.25, 1.0}, {2.0, 0.25}, {-0.25, -1.0}, {0.0, -0.25}};
    CHECK(max_diff(forward_dft(psi, HilbertDim(4)), expect) < 1e-14);
}

TEST_CASE("forward_dft agrees with the direct sum") {
    std::mt19937_64 rng(11);
    for (int N : {2, 4, 8, 16, 6, 10, 30}) {
        const auto psi = random_state(N, rng);
        CHECK(max_diff(forward_dft(psi, HilbertDim(N)), direct_dft(psi)) < 1e-12);
    }
}

TEST_CASE("dft round trip, unitarity and Parseval") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
        const int N = 2 * (1 + i % 40);
        const HilbertDim dim(N);
        const auto a = random_state(N, rng);
        const auto b = random_state(N, rng);
        CHECK(max_diff(inverse_dft(forward_dft(a, dim), dim), a) < 1e-12);
        CHECK(std::abs(norm(inverse_dft(a, dim)) - norm(a)) < 1e-12);
        CHECK(std::abs(inner(forward_dft(a, dim), forward_dft(b, dim)) - inner(a, b)) < 1e-12);
    }
}

TEST_CASE("inverse_dft is the adjoint of forward_dft") {
    std::mt19937_64 rng(13);
    const HilbertDim dim(12);
    const auto a = random_state(12, rng);
    const auto b = random_state(12, rng);
    CHECK(std::abs(inner(forward_dft(a, dim), b) - inner(a, inverse_dft(b, dim))) < 1e-14);
}

TEST_CASE("dft dimension mismatch throws") {
    const StateVector psi(6, 1.0);
    CHECK_THROWS_AS(forward_dft(psi, HilbertDim(8)), std::invalid_argument);
    CHECK_THROWS_AS(inverse_dft(psi, HilbertDim(4)), std::invalid_argument);
}

TEST_CASE("in-place transforms match the copying ones") {
    std::mt19937_64 rng(14);
    auto a = random_state(16, rng);
    const auto f = forward_dft(a, HilbertDim(16));
    forward_dft_inplace(a);
    CHECK(max_diff(a, f) < 1e-15);
    inverse_dft_inplace(a);
    CHECK(max_diff(a, inverse_dft(f, HilbertDim(16))) < 1e-15);
}

TEST_CASE("diagonal_phase") {
    std::mt19937_64 rng(15);
    const int N = 16;
    const auto psi = random_state(N, rng);

    SUBCASE("zero phase is the identity") {
        CHECK(max_diff(diagonal_phase(psi, [](int) { return 0.0; }), psi) == 0.0);
    }
    SUBCASE("additivity") {
        auto lin = [N](int n) { return kTwoPi * n / N; };
        const auto twice = diagonal_phase(diagonal_phase(psi, lin), lin);
        const auto once = diagonal_phase(psi, [N](int n) { return 2.0 * kTwoPi * n / N; });
        CHECK(max_diff(twice, once) < 1e-12);
    }
    SUBCASE("norm preserved for random tables") {
        std::uniform_real_distribution<double> u(-100.0, 100.0);
        for (int i = 0; i < 20; ++i) {
            std::vector<double> table(N);
            for (auto& x : table) x = u(rng);
            CHECK(std::abs(norm(diagonal_phase(psi, table)) - 1.0) < 1e-12);
        }
    }
    SUBCASE("table and function forms agree") {
        std::vector<double> table(N);
        for (int n = 0; n < N; ++n) table[n] = 0.3 * n * n;
        CHECK(max_diff(diagonal_phase(psi, table), diagonal_phase(psi, [](int n) { return 0.3 * n * n; })) == 0.0);
    }
    SUBCASE("non-finite phase is rejected") {
        std::vector<double> table(N, 0.0);
        table[3] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(diagonal_phase(psi, table), std::invalid_argument);
        CHECK_THROWS_AS(diagonal_phase(psi, [](int n) { return n == 5 ? INFINITY : 0.0; }), std::invalid_argument);
    }
    SUBCASE("table size mismatch") {
        std::vector<double> table(N - 2, 0.0);
        CHECK_THROWS_AS(diagonal_phase(psi, table), std::invalid_argument);
    }
}

TEST_CASE("normalize and inner") {
    StateVector a{3.0, cplx(0, 4)};
    normalize(a);
    CHECK(std::abs(norm(a) - 1.0) < 1e-15);
    CHECK(std::abs(inner(a, a) - 1.0) < 1e-15);
    // antilinear in the first slot
    const StateVector b{cplx(0, 1), 0.0};
    const StateVector c{1.0, 0.0};
    CHECK(std::abs(inner(b, c) - cplx(0, -1)) < 1e-15);
    StateVector zero(4, 0.0);
    CHECK_THROWS_AS(normalize(zero), NumericalError);
}
