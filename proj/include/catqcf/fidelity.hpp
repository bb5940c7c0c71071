#pragma once

// Quantum-classical fidelity F(t) between the Wigner function of U^t|phi> and
// the classical pullback rho o M^{-t}, plus its decomposition relative to the
// unperturbed (Egorov-exact) cat map:
//   F = 1 + I1 + I2 + cross,    I1 = tr{rho_c^t Q(delta rho^t)},  I2 = tr{delta rho^t rho_c^t}
//   F = |F_q|^2 + F_c - 1 + cross_qf

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "catqcf/classical.hpp"
#include "catqcf/quantum.hpp"
#include "catqcf/weyl.hpp"

namespace catqcf {

/// The 2N-grid Wigner function splits a localized state over its direct
/// image and three sign-modulated copies shifted by 1/2, while a classical
/// packet density has only the direct image. Doubling the pairing makes
/// F(0) = 1 - e^{-O(N)} and puts the long-time plateau at 1/N.
inline constexpr double kQcfScale = 2.0;

struct FidelitySample {
    int t = 0;
    double qcf = 0.0;      // F(t)
    double qf_abs2 = 0.0;  // |F_q(t)|^2
    double cf = 0.0;       // F_c(t)
    double i1 = 0.0;
    double i2 = 0.0;
    double cross = 0.0;     // F - 1 - I1 - I2
    double i1_pred = 0.0;   // exp(-pi N |delta phi~_t(q0,p0)|^2) - 1
    double cross_qf = 0.0;  // F - |F_q|^2 - F_c + 1
    std::optional<double> i2_pred;
};

double qcf(std::span<const cplx> state, const GridFunction& density);

/// <phi| U^{-t} U_c^t |phi>.
cplx quantum_fidelity(Packet packet, const MapParams& params, HilbertDim dim, int t,
                      Convention convention = Convention::semiclassical);
/// sum_x rho(M^{-t} x) rho(M_c^{-t} x).
double classical_fidelity(Packet packet, const MapParams& params, HilbertDim dim, int t);

FidelitySample decompose(Packet packet, const MapParams& params, HilbertDim dim, int t,
                         Convention convention = Convention::semiclassical);

double i1_prediction(Packet packet, const MapParams& params, HilbertDim dim, int t);

/// 2N eps . Im <phi_c^t| S^t |phi_c^t> (dense, N <= 128).
double i2_leading(Packet packet, const MapParams& params, HilbertDim dim, int t,
                  Convention convention = Convention::semiclassical);

struct SeriesOptions {
    /// Compute I1 (needs a second Wigner function per step) and the residuals.
    bool decompose = true;
    /// Track dense S^t for the first-order I2 prediction (N <= 128 only).
    bool i2_leading = false;
};

/// Scratch storage reused across samples; one per worker thread.
struct FidelityWorkspace {
    explicit FidelityWorkspace(HilbertDim dim) : echo(dim), initial(dim) {}
    WignerBlock echo, initial;
    std::vector<DensitySample> support;
    std::vector<unsigned char> rows;
    StateVector chi;
};

/// Incremental evolution of one packet under U, plus the forward image of the
/// packet centre under M_c.
///
/// Sums run over base points y = M_c^{-t}(x). Egorov holds pointwise on the
/// grid, W_{U_c^t psi}(x) = W_psi(M_c^{-t} x), so
///   F  = 2 sum_y W_chi(y) rho(y + d(y)),   chi = U_c^{-t} U^t phi,
///   I1 = 2 sum_y W_phi(y) delta rho(y),
/// and both Wigner functions are only needed on rows that carry density.
class PacketTracker {
public:
    PacketTracker(Packet packet, const Propagator& perturbed, const Propagator& unperturbed,
                  SeriesOptions options = {});

    int time() const { return t_; }
    Packet packet() const { return density_.packet(); }

    /// Sample at the current time; `pullback.time()` must equal time().
    FidelitySample sample(const GridPullback& pullback, FidelityWorkspace& ws) const;
    void advance();

private:
    const Propagator* pert_;
    const Propagator* cat_;
    SeriesOptions options_;
    PacketDensity density_;
    StateVector initial_;
    StateVector state_;
    StateVector state_c_;  // only kept for the I2 prediction
    PhasePoint center_fwd_;
    int t_ = 0;
    std::array<DenseOperator, 3> s_;
    DenseOperator cat_dense_;
    std::array<DenseOperator, 3> s_term_;
};

/// Per-packet series for t = 0..t_max.
std::vector<FidelitySample> fidelity_series(Packet packet, const MapParams& params, HilbertDim dim, int t_max,
                                            Convention convention = Convention::semiclassical,
                                            SeriesOptions options = {});

}  // namespace catqcf
