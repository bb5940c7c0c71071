#pragma once

// Classical perturbed cat map on the unit torus,
//   p' = p + k q + eps . Vdot(q)  (mod 1)
//   q' = q + p'                   (mod 1)
// with V(q) = (q^2/2, -cos(2 pi q)/(2 pi), q), plus Gaussian packet densities
// sampled on the 2N grid and their pullbacks rho o M^{-t}.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "catqcf/torus.hpp"
#include "catqcf/weyl.hpp"

namespace catqcf {

using Vec3 = std::array<double, 3>;

struct MapParams {
    int k = 1;
    Vec3 eps{0.0, 0.0, 0.0};

    /// Throws ConfigError for k < 1 or non-finite eps.
    void validate() const;
    /// Perturbation strength |eps|.
    double strength() const;
    bool unperturbed() const { return eps[0] == 0.0 && eps[1] == 0.0 && eps[2] == 0.0; }
    MapParams unperturbed_copy() const { return MapParams{k, {0.0, 0.0, 0.0}}; }
};

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

/// Center of a Gaussian packet, both coordinates in [0,1).
struct Packet {
    double q0 = 0.0;
    double p0 = 0.0;
};

/// Reduce into [0,1).
double wrap_unit(double x);
/// Nearest-image representative in (-1/2, 1/2].
double min_image(double x);

Vec3 v_potential(double q);
Vec3 v_dot(double q);
Vec3 v_ddot(double q);

PhasePoint map_forward(PhasePoint x, const MapParams& params);
PhasePoint map_inverse(PhasePoint x, const MapParams& params);

/// lambda(k) = log[(k + 2 + sqrt(k(k+4)))/2].
double lyapunov(int k);

/// Periodized Gaussian profile g(s) = sum_{|nu|<=3} exp(-2 pi N (s - s0 + nu)^2)
/// along one axis. `offset` is s - s0; `shift` is a displacement of the
/// evaluation point. Returns g at offset and g(offset+shift) - g(offset)
/// without cancellation.
struct ProfileValue {
    double base;
    double delta;
};
ProfileValue periodic_gaussian(double offset, double shift, int N);

/// Numerically normalized packet density, sum over the grid of rho^2 == 1.
class PacketDensity {
public:
    PacketDensity(Packet packet, HilbertDim dim);

    Packet packet() const { return packet_; }
    HilbertDim dim() const { return dim_; }
    /// Normalization constant D.
    double normalization() const { return norm_; }

    double operator()(PhasePoint x) const;
    /// Profile factors at grid index i along q and p (index in Z_{2N}).
    double q_factor(int i) const { return gq_[i]; }
    double p_factor(int j) const { return gp_[j]; }

private:
    Packet packet_;
    HilbertDim dim_;
    std::vector<double> gq_;
    std::vector<double> gp_;
    double norm_ = 0.0;
};

GridFunction gaussian_density(Packet packet, HilbertDim dim);

/// Pullback of every grid point under the inverse perturbed map, split into
/// an exact grid point y = M_c^{-t}(x) and a deviation d in (-1/2,1/2]^2 with
/// M^{-t}(x) = y + d. Arrays are indexed by the flat index of y.
/// advance() extends t -> t+1 in O((2N)^2).
class GridPullback {
public:
    GridPullback(HilbertDim dim, MapParams params);

    void advance();
    int time() const { return t_; }
    HilbertDim dim() const { return dim_; }
    const MapParams& params() const { return params_; }

    /// origin()[y] is the flat index of the grid point x with M_c^{-t}(x) = y.
    std::span<const std::uint32_t> origin() const { return origin_; }
    std::span<const double> dev_q() const { return dq_; }
    std::span<const double> dev_p() const { return dp_; }
    /// Largest |component| of any deviation on the grid.
    double max_deviation() const { return max_dev_; }

    /// True once deviations exceed `kCellMargin` grid cells; the displaced
    /// index below is only maintained from then on.
    bool displaced_index_ready() const { return indexed_; }
    /// Base points y whose displaced point y + d rounds to a grid cell in row
    /// `row` and columns [col_lo, col_hi] (no wrap; 0 <= col_lo <= col_hi < 2N).
    std::span<const std::uint32_t> displaced_in(int row, int col_lo, int col_hi) const;

    static constexpr int kCellMargin = 2;

private:
    void build_displaced_index();

    HilbertDim dim_;
    MapParams params_;
    int t_ = 0;
    std::vector<std::uint32_t> origin_, origin_next_;
    std::vector<double> dq_, dp_, dq_next_, dp_next_;
    double max_dev_ = 0.0;
    bool indexed_ = false;
    std::vector<std::uint32_t> cell_offsets_, cell_members_, cell_keys_;
};

/// rho_c^t and delta rho^t at one grid point x, stored under the flat index
/// of its pulled-back base point y = M_c^{-t}(x).
struct DensitySample {
    std::uint32_t base;
    double rho_c;
    double drho;
};

/// Collects every grid point where rho_c^t or delta rho^t is non-negligible
/// (beyond ~e^{-40} of the peak). Work is proportional to the support size
/// except for small N, where the whole grid is scanned.
void pullback_support(const PacketDensity& rho, const GridPullback& pullback, std::vector<DensitySample>& out);

/// Samples of rho_c^t = rho o M_c^{-t} and delta rho^t = rho o M^{-t} - rho_c^t.
void pullback_density(const PacketDensity& rho, const GridPullback& pullback, GridFunction& unperturbed,
                      GridFunction& deviation);

/// rho^t(x_{n,m}) = rho(M^{-t}(x_{n,m})).
GridFunction evolve_density(Packet packet, const MapParams& params, int t, HilbertDim dim);

struct Deviation {
    double q = 0.0;
    double p = 0.0;
    double norm() const;
};

/// One co-iteration step of phi_ref = M_ref^{-1} and phi_pert = M_pert^{-1}
/// (same k) in split form: `base` follows phi_ref and `dev` tracks
/// phi_pert(base + dev) - phi_ref(base) to full relative precision.
void co_step_inverse(PhasePoint& base, Deviation& dev, const MapParams& ref, const MapParams& pert);

struct DeviationSeries {
    std::vector<Deviation> exact;       // t = 1..t_max
    std::vector<Deviation> linearized;  // t = 1..t_max
};

/// delta phi_t(x) for the inverse maps of `ref` and `pert`, both from exact
/// co-iteration and from the linearized recursion
/// d_{t+1} = (grad phi)(phi^t x) d_t + delta phi(phi^t x).
DeviationSeries deviation_series(PhasePoint x, const MapParams& ref, const MapParams& pert, int t_max);

/// delta phi_t evaluated at M_c^t(x0), i.e. the pullback deviation anchored at
/// the packet center.
Deviation anchored_deviation(Packet packet, const MapParams& params, int t);

}  // namespace catqcf
