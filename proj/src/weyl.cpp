#include "catqcf/weyl.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "catqcf/errors.hpp"
#include "catqcf/fft.hpp"

namespace catqcf {
namespace {

// exp(i pi j / N) for j in Z_{2N}.
std::vector<cplx> half_phase_table(int N) {
    std::vector<cplx> t(static_cast<std::size_t>(2 * N));
    for (int j = 0; j < 2 * N; ++j) t[j] = std::polar(1.0, kPi * j / N);
    return t;
}

void require_square(const DenseOperator& op, HilbertDim dim) {
    if (op.rows() != dim.N() || op.cols() != dim.N()) {
        throw std::invalid_argument("operator is not N x N");
    }
}

}  // namespace

GridFunction::GridFunction(HilbertDim dim)
    : dim_(dim), values_(static_cast<std::size_t>(dim.grid_side()) * dim.grid_side(), 0.0) {}

GridFunction::GridFunction(HilbertDim dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(side()) * side()) {
        throw std::invalid_argument("GridFunction: expected (2N)^2 values");
    }
}

DenseOperator point_operator(std::int64_t n, std::int64_t m, HilbertDim dim) {
    const int N = dim.N();
    if (N > kMaxDensePointOperatorN) {
        throw std::invalid_argument("point_operator: dense point operators limited to N <= " +
                                    std::to_string(kMaxDensePointOperatorN));
    }
    const int nn = wrap_index(n, 2 * N);
    const int mm = wrap_index(m, 2 * N);
    const cplx pre = std::polar(1.0 / (2.0 * std::sqrt(double(N))),
                                kPi * static_cast<double>((std::int64_t(nn) * mm) % (2 * N)) / N);
    DenseOperator A = DenseOperator::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        const double ph = -kTwoPi * static_cast<double>((std::int64_t(k) * mm) % N) / N;
        A(wrap_index(nn - k, N), k) += pre * std::polar(1.0, ph);
    }
    return A;
}

void wigner_block(std::span<const cplx> state, WignerBlock& out, std::span<const unsigned char> rows) {
    const HilbertDim dim = out.dim();
    require_dim(state, dim, "wigner");
    const int N = dim.N();
    const int S = 2 * N;
    const double scale = 1.0 / (2.0 * std::sqrt(double(N)));
    if (!rows.empty() && rows.size() != static_cast<std::size_t>(N)) {
        throw std::invalid_argument("wigner_block: row mask must have N entries");
    }
    const auto phase = half_phase_table(N);

    std::vector<cplx> corr(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        if (!rows.empty() && !rows[n]) continue;
        // k -> psi*(n-k) psi(k)
        for (int k = 0; k <= n; ++k) corr[k] = std::conj(state[n - k]) * state[k];
        for (int k = n + 1; k < N; ++k) corr[k] = std::conj(state[n - k + N]) * state[k];
        fft::forward(corr);
        int idx = 0;  // n*m mod 2N
        for (int m = 0; m < N; ++m) {
            const cplx w = phase[idx] * corr[m] * scale;
            if (!(std::abs(w.imag()) < kImagResidueTol)) {
                throw NumericalError("wigner: imaginary residue " + std::to_string(w.imag()) + " at (" +
                                     std::to_string(n) + "," + std::to_string(m) + ")");
            }
            out.block(n, m) = w.real();
            idx += n;
            if (idx >= S) idx -= S;
        }
    }
}

void wigner_into(std::span<const cplx> state, GridFunction& out) {
    WignerBlock block(out.dim());
    wigner_block(state, block);
    const int S = out.side();
    for (int n = 0; n < S; ++n) {
        for (int m = 0; m < S; ++m) out.at(n, m) = block.at(n, m);
    }
}

GridFunction wigner(std::span<const cplx> state, HilbertDim dim) {
    GridFunction out(dim);
    wigner_into(state, out);
    return out;
}

DenseOperator quantize(const GridFunction& a) {
    const int N = a.dim().N();
    const int S = 2 * N;
    const double scale = 1.0 / (2.0 * std::sqrt(double(N)));
    const auto phase = half_phase_table(N);

    // For each row n: B_n(f) = sum_m a(n,m) e^{i pi n m/N} e^{-2 pi i f m/(2N)}.
    // Q_{r,c} collects B_n(2c) from the two rows n = r+c (mod N) and n+N.
    std::vector<std::vector<cplx>> rows(static_cast<std::size_t>(S), std::vector<cplx>(S));
    for (int n = 0; n < S; ++n) {
        auto& b = rows[n];
        for (int m = 0; m < S; ++m) b[m] = a(n, m) * phase[(static_cast<std::int64_t>(n) * m) % S];
        fft::forward(b);
    }
    DenseOperator Q(N, N);
    for (int r = 0; r < N; ++r) {
        for (int c = 0; c < N; ++c) {
            const int n1 = wrap_index(r + c, N);
            Q(r, c) = (rows[n1][2 * c] + rows[n1 + N][2 * c]) * scale;
        }
    }
    return Q;
}

std::vector<cplx> symbol_complex(const DenseOperator& op) {
    const int N = static_cast<int>(op.rows());
    const HilbertDim dim(N);
    require_square(op, dim);
    const int S = 2 * N;
    const double scale = 1.0 / (2.0 * std::sqrt(double(N)));
    const auto phase = half_phase_table(N);

    std::vector<cplx> out(static_cast<std::size_t>(S) * S);
    std::vector<cplx> diag(static_cast<std::size_t>(N));
    // tr{A A_{n,m}} = scale e^{i pi n m/N} sum_c A(c, n-c) e^{-2 pi i c m/N}
    for (int n = 0; n < N; ++n) {
        for (int c = 0; c < N; ++c) diag[c] = op(c, wrap_index(n - c, N));
        fft::forward(diag);
        for (int row : {n, n + N}) {
            for (int m = 0; m < S; ++m) {
                out[static_cast<std::size_t>(row) * S + m] =
                    phase[(static_cast<std::int64_t>(row) * m) % S] * diag[m % N] * scale;
            }
        }
    }
    return out;
}

GridFunction symbol(const DenseOperator& op) {
    const HilbertDim dim(static_cast<int>(op.rows()));
    require_square(op, dim);
    const double herm = (op - op.adjoint()).cwiseAbs().maxCoeff();
    if (herm >= kImagResidueTol) {
        throw std::invalid_argument("symbol: operator is not Hermitian (max |A - A^dag| = " +
                                    std::to_string(herm) + ")");
    }
    const auto c = symbol_complex(op);
    std::vector<double> re(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (std::abs(c[i].imag()) >= kImagResidueTol) {
            throw NumericalError("symbol: imaginary residue in Hermitian symbol");
        }
        re[i] = c[i].real();
    }
    return GridFunction(dim, std::move(re));
}

double pairing(const GridFunction& a, const GridFunction& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("pairing: grid dimension mismatch");
    const auto av = a.values();
    const auto bv = b.values();
    double s = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
    return s;
}

void write_csv(std::ostream& os, const GridFunction& f) {
    os << "# N=" << f.dim().N() << '\n';
    char buf[32];
    const int S = f.side();
    for (int n = 0; n < S; ++n) {
        for (int m = 0; m < S; ++m) {
            std::snprintf(buf, sizeof buf, "%.16e", f(n, m));
            if (m) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

GridFunction read_grid_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# N=", 0) != 0) {
        throw std::invalid_argument("grid csv: missing '# N=' header");
    }
    const HilbertDim dim(std::stoi(line.substr(4)));
    const int S = dim.grid_side();
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(S) * S);
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    }
    return GridFunction(dim, std::move(vals));
}

}  // namespace catqcf
