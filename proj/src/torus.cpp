#include "catqcf/torus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "catqcf/errors.hpp"
#include "catqcf/fft.hpp"

namespace catqcf {

HilbertDim::HilbertDim(int n) : n_(n) {
    if (n < 2) throw ConfigError("N must be >= 2, got " + std::to_string(n));
    if (n % 2 != 0) throw ConfigError("N must be even, got " + std::to_string(n));
}

void require_dim(std::span<const cplx> state, HilbertDim dim, const char* what) {
    if (state.size() != static_cast<std::size_t>(dim.N())) {
        throw std::invalid_argument(std::string(what) + ": state has dimension " +
                                    std::to_string(state.size()) + ", expected " +
                                    std::to_string(dim.N()));
    }
}

void forward_dft_inplace(std::span<cplx> state) {
    fft::forward(state);
    const double s = 1.0 / std::sqrt(static_cast<double>(state.size()));
    for (auto& z : state) z *= s;
}

void inverse_dft_inplace(std::span<cplx> state) {
    fft::backward(state);
    const double s = 1.0 / std::sqrt(static_cast<double>(state.size()));
    for (auto& z : state) z *= s;
}

StateVector forward_dft(std::span<const cplx> state, HilbertDim dim) {
    require_dim(state, dim, "forward_dft");
    StateVector out(state.begin(), state.end());
    forward_dft_inplace(out);
    return out;
}

StateVector inverse_dft(std::span<const cplx> state, HilbertDim dim) {
    require_dim(state, dim, "inverse_dft");
    StateVector out(state.begin(), state.end());
    inverse_dft_inplace(out);
    return out;
}

StateVector diagonal_phase(std::span<const cplx> state, std::span<const double> phase) {
    if (phase.size() != state.size()) {
        throw std::invalid_argument("diagonal_phase: phase table size mismatch");
    }
    StateVector out(state.size());
    for (std::size_t n = 0; n < state.size(); ++n) {
        if (!std::isfinite(phase[n])) {
            throw std::invalid_argument("diagonal_phase: non-finite phase at n=" + std::to_string(n));
        }
        out[n] = std::polar(1.0, phase[n]) * state[n];
    }
    return out;
}

StateVector diagonal_phase(std::span<const cplx> state, const std::function<double(int)>& phase) {
    std::vector<double> table(state.size());
    for (std::size_t n = 0; n < state.size(); ++n) table[n] = phase(static_cast<int>(n));
    return diagonal_phase(state, table);
}

double norm(std::span<const cplx> state) {
    double s = 0.0;
    for (const auto& z : state) s += std::norm(z);
    return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void normalize(std::span<cplx> state) {
    const double n = norm(state);
    if (n == 0.0) throw NumericalError("normalize: zero vector");
    for (auto& z : state) z /= n;
}

}  // namespace catqcf
