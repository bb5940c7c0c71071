#include "catqcf/fidelity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace catqcf {
namespace {

// 1 - |<a|b>|^2 for unit vectors, evaluated as the squared distance of b from
// span{a} so that it stays accurate when the states nearly coincide.
double infidelity(std::span<const cplx> a, std::span<const cplx> b) {
    const cplx c = inner(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(b[i] - c * a[i]);
    return s;
}

double expectation_imag(const DenseOperator& op, std::span<const cplx> state) {
    const Eigen::Map<const Eigen::VectorXcd> v(state.data(), static_cast<Eigen::Index>(state.size()));
    return v.dot(op * v).imag();
}

}  // namespace

double qcf(std::span<const cplx> state, const GridFunction& density) {
    return kQcfScale * pairing(wigner(state, density.dim()), density);
}

cplx quantum_fidelity(Packet packet, const MapParams& params, HilbertDim dim, int t, Convention convention) {
    if (t < 0) throw std::invalid_argument("quantum_fidelity: t must be >= 0");
    if (t == 0) return 1.0;
    const StateVector phi = coherent_state(packet, dim);
    const StateVector cat = Propagator(dim, params.unperturbed_copy(), convention).apply(phi, t);
    const StateVector pert = Propagator(dim, params, convention).apply(phi, t);
    return inner(pert, cat);
}

double classical_fidelity(Packet packet, const MapParams& params, HilbertDim dim, int t) {
    if (t < 0) throw std::invalid_argument("classical_fidelity: t must be >= 0");
    GridPullback pullback(dim, params);
    for (int s = 0; s < t; ++s) pullback.advance();
    GridFunction rho_c(dim), drho(dim);
    pullback_density(PacketDensity(packet, dim), pullback, rho_c, drho);
    return pairing(rho_c, rho_c) + pairing(rho_c, drho);
}

double i1_prediction(Packet packet, const MapParams& params, HilbertDim dim, int t) {
    if (t < 0) throw std::invalid_argument("i1_prediction: t must be >= 0");
    const Deviation d = anchored_deviation(packet, params, t);
    return std::expm1(-kPi * dim.N() * (d.q * d.q + d.p * d.p));
}

double i2_leading(Packet packet, const MapParams& params, HilbertDim dim, int t, Convention convention) {
    if (dim.N() > kMaxDensePropagatorN) {
        throw std::invalid_argument("i2_leading: dense S^t limited to N <= " + std::to_string(kMaxDensePropagatorN));
    }
    if (t <= 0) return 0.0;
    const auto S = s_operator(dim, params.k, t, convention);
    const StateVector phi_c =
        Propagator(dim, params.unperturbed_copy(), convention).apply(coherent_state(packet, dim), t);
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (params.eps[j] != 0.0) s += params.eps[j] * expectation_imag(S[j], phi_c);
    }
    return 2.0 * dim.N() * s;
}

PacketTracker::PacketTracker(Packet packet, const Propagator& perturbed, const Propagator& unperturbed,
                             SeriesOptions options)
    : pert_(&perturbed), cat_(&unperturbed), options_(options), density_(packet, perturbed.dim()),
      initial_(coherent_state(packet, perturbed.dim())), state_(initial_), center_fwd_{packet.q0, packet.p0} {
    if (perturbed.dim() != unperturbed.dim()) throw std::invalid_argument("PacketTracker: dimension mismatch");
    if (options_.i2_leading) {
        const HilbertDim dim = perturbed.dim();
        if (dim.N() > kMaxDensePropagatorN) {
            throw std::invalid_argument("PacketTracker: i2 prediction needs N <= " +
                                        std::to_string(kMaxDensePropagatorN));
        }
        state_c_ = initial_;
        cat_dense_ = unperturbed.dense();
        const auto gen = perturbation_generators(dim, unperturbed.convention());
        for (int j = 0; j < 3; ++j) {
            s_term_[j] = DenseOperator::Zero(dim.N(), dim.N());
            for (int n = 0; n < dim.N(); ++n) s_term_[j](n, n) = gen[j][n];
            s_[j] = DenseOperator::Zero(dim.N(), dim.N());
        }
    }
}

void PacketTracker::advance() {
    pert_->step(state_);
    center_fwd_ = map_forward(center_fwd_, cat_->params());
    if (options_.i2_leading) {
        cat_->step(state_c_);
        for (int j = 0; j < 3; ++j) {
            s_term_[j] = cat_dense_.adjoint() * s_term_[j] * cat_dense_;
            s_[j] += s_term_[j];
        }
    }
    ++t_;
}

FidelitySample PacketTracker::sample(const GridPullback& pullback, FidelityWorkspace& ws) const {
    if (pullback.time() != t_) throw std::invalid_argument("PacketTracker::sample: pullback time mismatch");
    const MapParams& params = pert_->params();
    const int N = density_.dim().N();

    const int S = 2 * N;
    pullback_support(density_, pullback, ws.support);
    ws.rows.assign(static_cast<std::size_t>(N), 0);
    for (const auto& d : ws.support) ws.rows[(d.base / S) % N] = 1;

    ws.chi = state_;
    for (int k = 0; k < t_; ++k) cat_->step_back(ws.chi);
    wigner_block(ws.chi, ws.echo, ws.rows);

    double w_rho = 0.0, rho_rho = 0.0;
    for (const auto& d : ws.support) {
        const double rho = d.rho_c + d.drho;
        w_rho += ws.echo.at_flat(d.base) * rho;
        rho_rho += d.rho_c * rho;
    }

    FidelitySample s;
    s.t = t_;
    s.qcf = kQcfScale * w_rho;
    s.cf = rho_rho;
    // <phi_c^t|phi^t> = <phi|chi>
    s.i2 = -infidelity(initial_, ws.chi);
    s.qf_abs2 = std::norm(inner(initial_, ws.chi));

    PhasePoint base = center_fwd_;
    Deviation dev{};
    const MapParams cat = params.unperturbed_copy();
    for (int k = 0; k < t_; ++k) co_step_inverse(base, dev, cat, params);
    s.i1_pred = std::expm1(-kPi * N * (dev.q * dev.q + dev.p * dev.p));

    if (options_.decompose) {
        wigner_block(initial_, ws.initial, ws.rows);
        double acc = 0.0;
        for (const auto& d : ws.support) acc += ws.initial.at_flat(d.base) * d.drho;
        s.i1 = kQcfScale * acc;
        s.cross = s.qcf - 1.0 - s.i1 - s.i2;
    } else {
        s.i1 = std::numeric_limits<double>::quiet_NaN();
        s.cross = std::numeric_limits<double>::quiet_NaN();
    }
    s.cross_qf = s.qcf - s.qf_abs2 - s.cf + 1.0;

    if (options_.i2_leading) {
        double acc = 0.0;
        for (int j = 0; j < 3; ++j) {
            if (params.eps[j] != 0.0) acc += params.eps[j] * expectation_imag(s_[j], state_c_);
        }
        s.i2_pred = 2.0 * N * acc;
    }
    return s;
}

FidelitySample decompose(Packet packet, const MapParams& params, HilbertDim dim, int t, Convention convention) {
    if (t < 0) throw std::invalid_argument("decompose: t must be >= 0");
    const Propagator pert(dim, params, convention);
    const Propagator cat(dim, params.unperturbed_copy(), convention);
    PacketTracker tracker(packet, pert, cat);
    GridPullback pullback(dim, params);
    for (int s = 0; s < t; ++s) {
        tracker.advance();
        pullback.advance();
    }
    FidelityWorkspace ws(dim);
    return tracker.sample(pullback, ws);
}

std::vector<FidelitySample> fidelity_series(Packet packet, const MapParams& params, HilbertDim dim, int t_max,
                                            Convention convention, SeriesOptions options) {
    const Propagator pert(dim, params, convention);
    const Propagator cat(dim, params.unperturbed_copy(), convention);
    PacketTracker tracker(packet, pert, cat, options);
    GridPullback pullback(dim, params);
    FidelityWorkspace ws(dim);
    std::vector<FidelitySample> out;
    out.reserve(static_cast<std::size_t>(t_max) + 1);
    for (int t = 0; t <= t_max; ++t) {
        out.push_back(tracker.sample(pullback, ws));
        if (t == t_max) break;
        tracker.advance();
        pullback.advance();
    }
    return out;
}

}  // namespace catqcf
