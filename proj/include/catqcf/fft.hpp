#pragma once

#include <complex>
#include <span>

namespace catqcf::fft {

using cplx = std::complex<double>;

// Unnormalized in-place transforms of length data.size():
//   forward:  X[m] = sum_n exp(-2 pi i n m / L) x[n]
//   backward: x[n] = sum_m exp(+2 pi i n m / L) X[m]
// Plans are cached per length; execution is thread-safe.
void forward(std::span<cplx> data);
void backward(std::span<cplx> data);

}  // namespace catqcf::fft
