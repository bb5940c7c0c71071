#pragma once

#include <cmath>
#include <random>

#include "catqcf/torus.hpp"

namespace testing {

using catqcf::cplx;
using catqcf::StateVector;

inline StateVector random_state(int N, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    StateVector s(N);
    for (auto& a : s) a = {g(rng), g(rng)};
    catqcf::normalize(s);
    return s;
}

inline double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Direct O(N^2) sum, shares nothing with the FFT path.
inline StateVector direct_dft(std::span<const cplx> psi) {
    const int N = static_cast<int>(psi.size());
    StateVector out(N);
    for (int m = 0; m < N; ++m) {
        cplx acc = 0.0;
        for (int n = 0; n < N; ++n) acc += std::polar(1.0, -catqcf::kTwoPi * n * m / N) * psi[n];
        out[m] = acc / std::sqrt(double(N));
    }
    return out;
}

}  // namespace testing
