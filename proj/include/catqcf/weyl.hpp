#pragma once

// Discrete Weyl-Wigner correspondence on the 2N x 2N half-integer grid
// x_{n,m} = (n/2N, m/2N), (n,m) in Z_{2N}^2.
//
// Point operators:
//   A_{n,m} = exp(i pi n m / N) / (2 sqrt N) sum_k exp(-2 pi i k m / N) |q_{n-k}><q_k|
// Note A_{n+N,m} = (-1)^m A_{n,m} and A_{n,m+N} = (-1)^n A_{n,m}, so every
// symbol repeats on the four N x N quadrants up to those signs.

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "catqcf/torus.hpp"

namespace catqcf {

using DenseOperator = Eigen::MatrixXcd;

/// Largest N for which point operators are materialized densely.
inline constexpr int kMaxDensePointOperatorN = 64;
/// Tolerance for discarding imaginary parts of symbols that must be real.
inline constexpr double kImagResidueTol = 1e-10;

/// Real field on the 2N x 2N grid, row-major with the position index n as row.
class GridFunction {
public:
    explicit GridFunction(HilbertDim dim);
    GridFunction(HilbertDim dim, std::vector<double> values);

    HilbertDim dim() const { return dim_; }
    int side() const { return dim_.grid_side(); }

    double operator()(std::int64_t n, std::int64_t m) const {
        return values_[flat(wrap_index(n, side()), wrap_index(m, side()))];
    }
    double& at(int n, int m) { return values_[flat(n, m)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    std::size_t flat(int n, int m) const {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(side()) + static_cast<std::size_t>(m);
    }

private:
    HilbertDim dim_;
    std::vector<double> values_;
};

/// N x N fundamental block of a Wigner function. The full 2N grid follows
/// from W(n + aN, m + bN) = (-1)^{a m + b n} W(n, m) for n, m in [0, N).
class WignerBlock {
public:
    explicit WignerBlock(HilbertDim dim)
        : dim_(dim), values_(static_cast<std::size_t>(dim.N()) * dim.N(), 0.0) {}

    HilbertDim dim() const { return dim_; }
    double block(int n, int m) const { return values_[static_cast<std::size_t>(n) * dim_.N() + m]; }
    double& block(int n, int m) { return values_[static_cast<std::size_t>(n) * dim_.N() + m]; }
    /// Value at a full-grid index (n, m) in [0, 2N)^2.
    double at(int n, int m) const {
        const int N = dim_.N();
        const int a = n >= N, b = m >= N;
        const int n0 = n - a * N, m0 = m - b * N;
        const double v = block(n0, m0);
        return ((a & m0) ^ (b & n0)) & 1 ? -v : v;
    }
    /// Value at a flat full-grid index n * 2N + m.
    double at_flat(std::uint32_t flat) const {
        const int S = dim_.grid_side();
        return at(static_cast<int>(flat / S), static_cast<int>(flat % S));
    }

private:
    HilbertDim dim_;
    std::vector<double> values_;
};

DenseOperator point_operator(std::int64_t n, std::int64_t m, HilbertDim dim);

/// Wigner function of a pure state, FFT-based, O(N^2 log N).
/// Throws NumericalError if any entry has |Im W| >= kImagResidueTol.
GridFunction wigner(std::span<const cplx> state, HilbertDim dim);
/// Same as wigner() but reuses the storage of `out`.
void wigner_into(std::span<const cplx> state, GridFunction& out);
/// Fundamental N x N block only. A non-empty `rows` (length N) restricts the
/// work to block rows with rows[n] != 0; other rows are left untouched.
void wigner_block(std::span<const cplx> state, WignerBlock& out, std::span<const unsigned char> rows = {});

/// Q(a) = sum_{n,m} a_{n,m} A_{n,m}.
DenseOperator quantize(const GridFunction& symbol);

/// a_{n,m} = tr{A A_{n,m}} as complex values, valid for any operator.
std::vector<cplx> symbol_complex(const DenseOperator& op);
/// Real symbol of a Hermitian operator. Throws std::invalid_argument if `op`
/// is not Hermitian to kImagResidueTol.
GridFunction symbol(const DenseOperator& op);

/// sum_{n,m} a(n,m) b(n,m).
double pairing(const GridFunction& a, const GridFunction& b);

/// Plain-text CSV: "# N=<N>" header then 2N rows of 2N values, 17 significant digits.
void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_grid_csv(std::istream& is);

}  // namespace catqcf
