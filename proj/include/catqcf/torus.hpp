#pragma once

// Finite-dimensional Hilbert space over Z_N: position/momentum bases and the
// discrete Fourier transform linking them, <q_n|p_m> = exp(2 pi i n m / N) / sqrt(N).

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace catqcf {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Hilbert space dimension N (effective Planck constant 1/N). Always even, >= 2.
class HilbertDim {
public:
    explicit HilbertDim(int n);

    int N() const { return n_; }
    /// Side length of the phase-space grid, 2N.
    int grid_side() const { return 2 * n_; }

    friend bool operator==(HilbertDim, HilbertDim) = default;

private:
    int n_;
};

/// Reduce an arbitrary integer index into [0, modulus).
inline int wrap_index(std::int64_t i, int modulus) {
    const std::int64_t r = i % modulus;
    return static_cast<int>(r < 0 ? r + modulus : r);
}

/// Position -> momentum representation, output[m] = N^{-1/2} sum_n e^{-2 pi i n m/N} psi[n].
StateVector forward_dft(std::span<const cplx> state, HilbertDim dim);
/// Exact adjoint of forward_dft.
StateVector inverse_dft(std::span<const cplx> state, HilbertDim dim);

// Unitary in-place variants used on the hot propagation path.
void forward_dft_inplace(std::span<cplx> state);
void inverse_dft_inplace(std::span<cplx> state);

/// output[n] = exp(i phase[n]) state[n]. Throws on non-finite phase values.
StateVector diagonal_phase(std::span<const cplx> state, std::span<const double> phase);
StateVector diagonal_phase(std::span<const cplx> state, const std::function<double(int)>& phase);

double norm(std::span<const cplx> state);
/// <a|b>, antilinear in the first argument.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
void normalize(std::span<cplx> state);

void require_dim(std::span<const cplx> state, HilbertDim dim, const char* what);

}  // namespace catqcf
