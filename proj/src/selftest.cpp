#include "catqcf/selftest.hpp"

#include <algorithm>
#include <random>

#include "catqcf/fidelity.hpp"

namespace catqcf {
namespace {

StateVector random_state(int N, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    StateVector psi(static_cast<std::size_t>(N));
    for (auto& c : psi) c = {nd(gen), nd(gen)};
    normalize(psi);
    return psi;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

double dft_round_trip(std::mt19937_64& gen) {
    double e = 0.0;
    for (int N : {8, 16}) {
        const HilbertDim dim(N);
        const StateVector psi = random_state(N, gen);
        e = std::max(e, max_diff(inverse_dft(forward_dft(psi, dim), dim), psi));
    }
    return e;
}

double dense_vs_fft(std::mt19937_64& gen) {
    const HilbertDim dim(8);
    const MapParams params{1, {1e-3, 1e-3, 1e-3}};
    double e = 0.0;
    for (Convention c : {Convention::semiclassical, Convention::paper_literal}) {
        const Propagator U(dim, params, c);
        const StateVector psi = random_state(8, gen);
        const DenseOperator U1 = U.dense();
        DenseOperator U5 = DenseOperator::Identity(8, 8);
        for (int t = 0; t < 5; ++t) U5 = U1 * U5;
        const Eigen::Map<const Eigen::VectorXcd> v(psi.data(), 8);
        const Eigen::VectorXcd ref = U5 * v;
        const StateVector out = U.apply(psi, 5);
        for (int i = 0; i < 8; ++i) e = std::max(e, std::abs(ref(i) - out[i]));
    }
    return e;
}

double propagation_round_trip(std::mt19937_64& gen) {
    const HilbertDim dim(16);
    const Propagator U(dim, MapParams{2, {1e-3, 2e-3, -1e-3}});
    const StateVector psi = random_state(16, gen);
    return max_diff(U.apply(U.apply(psi, 7), -7), psi);
}

double weyl_round_trip(std::mt19937_64& gen) {
    double e = 0.0;
    for (int N : {8, 16}) {
        const HilbertDim dim(N);
        const StateVector psi = random_state(N, gen);
        const StateVector phi = random_state(N, gen);
        const GridFunction w = wigner(psi, dim);
        const Eigen::Map<const Eigen::VectorXcd> v(psi.data(), N);
        const DenseOperator rho = v * v.adjoint();
        e = std::max(e, (quantize(w) - rho).cwiseAbs().maxCoeff());
        e = std::max(e, std::abs(pairing(w, wigner(phi, dim)) - std::norm(inner(psi, phi))));
    }
    return e;
}

double egorov_pointwise(std::mt19937_64& gen) {
    double e = 0.0;
    for (int N : {8, 16}) {
        for (int k : {1, 2}) {
            const HilbertDim dim(N);
            const int S = dim.grid_side();
            const StateVector psi = random_state(N, gen);
            const Propagator U(dim, MapParams{k, {0.0, 0.0, 0.0}});
            const GridFunction before = wigner(psi, dim);
            const GridFunction after = wigner(U.apply(psi, 1), dim);
            for (int i = 0; i < S; ++i) {
                for (int j = 0; j < S; ++j) {
                    const int q = wrap_index(i - j, S);
                    const int p = wrap_index(j - static_cast<std::int64_t>(k) * q, S);
                    e = std::max(e, std::abs(after(i, j) - before(q, p)));
                }
            }
        }
    }
    return e;
}

double egorov_fidelity() {
    double e = 0.0;
    const HilbertDim dim(16);
    for (int k : {1, 2}) {
        const auto series = fidelity_series(Packet{0.3, 0.6}, MapParams{k, {0.0, 0.0, 0.0}}, dim, 10);
        for (const auto& s : series) e = std::max(e, std::abs(s.qcf - series.front().qcf));
    }
    return e;
}

double decomposition_identity() {
    double e = 0.0;
    const auto series = fidelity_series(Packet{0.41, 0.17}, MapParams{1, {1e-4, 0.0, 0.0}}, HilbertDim(16), 10);
    for (const auto& s : series) e = std::max(e, std::abs(s.qcf - (1.0 + s.i1 + s.i2 + s.cross)));
    return e;
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
    std::mt19937_64 gen(7);
    std::vector<SelfCheck> out;
    out.push_back({"dft round trip (N=8,16)", dft_round_trip(gen), 1e-12});
    out.push_back({"dense vs fft propagation (N=8, t=5, both conventions)", dense_vs_fft(gen), 1e-10});
    out.push_back({"propagation forward/backward round trip (N=16)", propagation_round_trip(gen), 1e-10});
    out.push_back({"quantize(wigner) and pairing overlap (N=8,16)", weyl_round_trip(gen), 1e-10});
    out.push_back({"pointwise Egorov for Wigner functions (N=8,16; k=1,2)", egorov_pointwise(gen), 1e-12});
    out.push_back({"F(t) constant at eps=0 (N=16, t<=10)", egorov_fidelity(), 1e-6});
    out.push_back({"F = 1 + I1 + I2 + cross (N=16, t<=10)", decomposition_identity(), 1e-10});
    return out;
}

}  // namespace catqcf
