#pragma once

// Quantized perturbed cat map
//   U = exp(-i pi m^2 / N) exp(i pi k n^2 / N + i Theta(n)),  Theta(n) = N eps . Vhat(n),
// applied as a split step: position phases, DFT, momentum phases, inverse DFT.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catqcf/classical.hpp"
#include "catqcf/torus.hpp"
#include "catqcf/weyl.hpp"

namespace catqcf {

/// How the perturbation generator Vhat is read off V.
///   semiclassical:  Vhat(n) = 2 pi V(n/N), so the quantum kick reproduces eps . Vdot(q).
///   paper_literal:  Vhat(n) = V(2 pi n / N), the argument as printed.
enum class Convention { semiclassical, paper_literal };

std::string to_string(Convention c);
/// Accepts "semiclassical" and "paper-literal" (or "paper_literal").
Convention parse_convention(std::string_view name);

inline constexpr int kMaxDensePropagatorN = 128;

/// Diagonal entries of the three perturbation generators Vhat_j, j = 0,1,2.
std::array<std::vector<double>, 3> perturbation_generators(HilbertDim dim, Convention convention);

class Propagator {
public:
    Propagator(HilbertDim dim, MapParams params, Convention convention = Convention::semiclassical);

    HilbertDim dim() const { return dim_; }
    const MapParams& params() const { return params_; }
    Convention convention() const { return convention_; }

    /// Phases exp(i * position_phase[n]) applied first, in position basis.
    std::span<const double> position_phase() const { return position_phase_; }
    /// Phases exp(i * kinetic_phase[m]) = exp(-i pi m^2/N), in momentum basis.
    std::span<const double> kinetic_phase() const { return kinetic_phase_; }

    void step(std::span<cplx> state) const;
    /// Exact adjoint of step().
    void step_back(std::span<cplx> state) const;
    /// U^t psi in place; negative t applies the adjoint sequence.
    void apply_inplace(std::span<cplx> state, int t) const;
    StateVector apply(std::span<const cplx> state, int t) const;

    /// Dense N x N matrix of U (N <= kMaxDensePropagatorN).
    DenseOperator dense() const;

private:
    HilbertDim dim_;
    MapParams params_;
    Convention convention_;
    std::vector<double> position_phase_;
    std::vector<double> kinetic_phase_;
    std::vector<cplx> position_factor_;
    std::vector<cplx> kinetic_factor_;
};

Propagator build_propagator(HilbertDim dim, const MapParams& params,
                            Convention convention = Convention::semiclassical);

/// Torus coherent state centred at the packet, unit norm, with the amplitude
/// at the grid point nearest q0 real and positive.
StateVector coherent_state(Packet packet, HilbertDim dim);

/// The three components of S^t = sum_{j=1..t} U_c^{-j} Vhat U_c^{j} (dense, N <= 128).
std::array<DenseOperator, 3> s_operator(HilbertDim dim, int k, int t,
                                        Convention convention = Convention::semiclassical);

}  // namespace catqcf
