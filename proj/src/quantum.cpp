#include "catqcf/quantum.hpp"

#include <cmath>
#include <stdexcept>

#include "catqcf/errors.hpp"

namespace catqcf {
namespace {

void require_dense(HilbertDim dim, const char* what) {
    if (dim.N() > kMaxDensePropagatorN) {
        throw std::invalid_argument(std::string(what) + ": dense mode limited to N <= " +
                                    std::to_string(kMaxDensePropagatorN));
    }
}

// pi * (c * n^2 mod 2N) / N, reduced exactly in integers.
double quadratic_phase(std::int64_t c, std::int64_t n, int N) {
    const std::int64_t twoN = 2 * static_cast<std::int64_t>(N);
    const std::int64_t r = ((c % twoN) * ((n * n) % twoN)) % twoN;
    return kPi * static_cast<double>(r < 0 ? r + twoN : r) / N;
}

}  // namespace

std::string to_string(Convention c) {
    return c == Convention::semiclassical ? "semiclassical" : "paper-literal";
}

Convention parse_convention(std::string_view name) {
    if (name == "semiclassical") return Convention::semiclassical;
    if (name == "paper-literal" || name == "paper_literal") return Convention::paper_literal;
    throw ConfigError("unknown convention '" + std::string(name) + "'");
}

std::array<std::vector<double>, 3> perturbation_generators(HilbertDim dim, Convention convention) {
    const int N = dim.N();
    std::array<std::vector<double>, 3> g;
    for (auto& v : g) v.resize(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        Vec3 v;
        if (convention == Convention::semiclassical) {
            v = v_potential(static_cast<double>(n) / N);
            for (auto& x : v) x *= kTwoPi;
        } else {
            v = v_potential(kTwoPi * n / N);
        }
        for (int j = 0; j < 3; ++j) g[j][n] = v[j];
    }
    return g;
}

Propagator::Propagator(HilbertDim dim, MapParams params, Convention convention)
    : dim_(dim), params_(params), convention_(convention) {
    params_.validate();
    const int N = dim.N();
    const auto gen = perturbation_generators(dim, convention);
    position_phase_.resize(static_cast<std::size_t>(N));
    kinetic_phase_.resize(static_cast<std::size_t>(N));
    position_factor_.resize(static_cast<std::size_t>(N));
    kinetic_factor_.resize(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        double theta = 0.0;
        for (int j = 0; j < 3; ++j) theta += params_.eps[j] * gen[j][n];
        position_phase_[n] = quadratic_phase(params_.k, n, N) + N * theta;
        kinetic_phase_[n] = -quadratic_phase(1, n, N);
        position_factor_[n] = std::polar(1.0, position_phase_[n]);
        kinetic_factor_[n] = std::polar(1.0, kinetic_phase_[n]);
    }
}

void Propagator::step(std::span<cplx> state) const {
    require_dim(state, dim_, "Propagator::step");
    for (std::size_t n = 0; n < state.size(); ++n) state[n] *= position_factor_[n];
    forward_dft_inplace(state);
    for (std::size_t m = 0; m < state.size(); ++m) state[m] *= kinetic_factor_[m];
    inverse_dft_inplace(state);
}

void Propagator::step_back(std::span<cplx> state) const {
    require_dim(state, dim_, "Propagator::step_back");
    forward_dft_inplace(state);
    for (std::size_t m = 0; m < state.size(); ++m) state[m] *= std::conj(kinetic_factor_[m]);
    inverse_dft_inplace(state);
    for (std::size_t n = 0; n < state.size(); ++n) state[n] *= std::conj(position_factor_[n]);
}

void Propagator::apply_inplace(std::span<cplx> state, int t) const {
    for (int s = 0; s < t; ++s) step(state);
    for (int s = 0; s > t; --s) step_back(state);
}

StateVector Propagator::apply(std::span<const cplx> state, int t) const {
    require_dim(state, dim_, "Propagator::apply");
    StateVector out(state.begin(), state.end());
    apply_inplace(out, t);
    return out;
}

DenseOperator Propagator::dense() const {
    require_dense(dim_, "Propagator::dense");
    // Explicit factor product, independent of the FFT path:
    // U = F^dagger diag(e^{i kinetic}) F diag(e^{i position}).
    const int N = dim_.N();
    DenseOperator F(N, N);
    const double inv_sqrt = 1.0 / std::sqrt(double(N));
    for (int m = 0; m < N; ++m) {
        for (int n = 0; n < N; ++n) {
            F(m, n) = std::polar(inv_sqrt, -kTwoPi * static_cast<double>((std::int64_t(n) * m) % N) / N);
        }
    }
    Eigen::VectorXcd kin(N), pos(N);
    for (int j = 0; j < N; ++j) {
        kin(j) = std::polar(1.0, kinetic_phase_[j]);
        pos(j) = std::polar(1.0, position_phase_[j]);
    }
    return F.adjoint() * kin.asDiagonal() * F * pos.asDiagonal();
}

Propagator build_propagator(HilbertDim dim, const MapParams& params, Convention convention) {
    return Propagator(dim, params, convention);
}

StateVector coherent_state(Packet packet, HilbertDim dim) {
    const int N = dim.N();
    StateVector psi(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        const double qn = static_cast<double>(n) / N;
        cplx amp = 0.0;
        for (int nu = -3; nu <= 3; ++nu) {
            const double w = qn - packet.q0 + nu;
            const double e = kPi * N * w * w;
            if (e > 700.0) continue;
            amp += std::polar(std::exp(-e), kTwoPi * N * packet.p0 * w);
        }
        psi[n] = amp;
    }
    normalize(psi);
    const int nearest = wrap_index(static_cast<std::int64_t>(std::llround(packet.q0 * N)), N);
    const cplx anchor = psi[nearest];
    if (std::abs(anchor) > 0.0) {
        const cplx rot = std::conj(anchor) / std::abs(anchor);
        for (auto& z : psi) z *= rot;
        psi[nearest] = std::abs(anchor);
    }
    return psi;
}

std::array<DenseOperator, 3> s_operator(HilbertDim dim, int k, int t, Convention convention) {
    require_dense(dim, "s_operator");
    if (t < 1) throw std::invalid_argument("s_operator: t must be >= 1");
    const DenseOperator U = Propagator(dim, MapParams{k, {0.0, 0.0, 0.0}}, convention).dense();
    const DenseOperator Ud = U.adjoint();
    const auto gen = perturbation_generators(dim, convention);
    std::array<DenseOperator, 3> S;
    for (int j = 0; j < 3; ++j) {
        DenseOperator term = DenseOperator::Zero(dim.N(), dim.N());
        for (int n = 0; n < dim.N(); ++n) term(n, n) = gen[j][n];
        S[j] = DenseOperator::Zero(dim.N(), dim.N());
        for (int s = 1; s <= t; ++s) {
            term = Ud * term * U;
            S[j] += term;
        }
    }
    return S;
}

}  // namespace catqcf
