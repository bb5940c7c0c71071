#pragma once

// Ensemble averages over random packets, breaking times, the G(t)
// linearization and least-squares scaling fits.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "catqcf/fidelity.hpp"

namespace catqcf {

struct EnsembleConfig {
    int n_packets = 100;
    std::uint64_t seed = 1;
    HilbertDim dim{512};
    MapParams params;
    int t_max = 40;
    std::vector<double> p_thresholds{0.9, 0.8, 0.7};
    Convention convention = Convention::semiclassical;
    SeriesOptions series{.decompose = false, .i2_leading = false};
    /// Worker threads; 0 picks the hardware concurrency.
    int threads = 1;
    /// Stop once the running average <F(t)> drops below this value.
    std::optional<double> stop_below;
    /// Keep every per-packet series in the result.
    bool keep_packets = false;

    /// Throws ConfigError on invalid values.
    void validate() const;
};

/// Packet centres drawn i.i.d. uniform on [0,1)^2 from mt19937_64 seeded
/// with `seed`; each centre takes two draws (q first), each mapped to
/// (x >> 11) * 2^-53.
std::vector<Packet> sample_packets(int n, std::uint64_t seed);

struct EnsembleResult {
    std::vector<Packet> centers;
    /// Arithmetic mean over packets for t = 0..t_last.
    std::vector<FidelitySample> average;
    std::vector<std::vector<FidelitySample>> packets;  // only with keep_packets
};

EnsembleResult run_ensemble(const EnsembleConfig& config);
std::vector<FidelitySample> average_series(const EnsembleConfig& config);

struct BreakTimeRecord {
    double p = 0.0;
    std::optional<int> t_br;
    double eps_norm = 0.0;
    int dim_N = 0;
    int k = 0;
};

/// Smallest t with <F(t)> < p, if any.
BreakTimeRecord breaking_time(std::span<const FidelitySample> series, double p);

struct GPoint {
    int t;
    double g;
};

struct GTransform {
    std::vector<GPoint> points;
    std::vector<int> omitted;  // t with <F> outside (0,1)
};

/// G(t) = log(-log <F(t)>).
GTransform g_transform(std::span<const FidelitySample> series);

/// Bounds of the linear G(t) window. The lower bound on 1 - <F> keeps the
/// early points clear of rounding noise; below <F> ~ 1/2 the ensemble decay
/// bends away from the exponential law.
struct GWindow {
    double min_decay = 1e-6;     // 1 - <F> >= min_decay
    double min_f = 0.5;          // <F> >= min_f
    double floor_factor = 10.0;  // <F> >= floor_factor / N
};

/// Points of g_transform() inside the window, restricted to the first
/// contiguous run.
std::vector<GPoint> g_fit_window(std::span<const FidelitySample> series, int N, GWindow window = {});

struct Point2 {
    double x;
    double y;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;      // RMS of y - fit
    double slope_stderr = 0.0;  // 0 when exactly determined
    int n = 0;
};

/// Ordinary least squares over points[begin, end). Throws
/// std::invalid_argument for fewer than 3 points.
LinearFit fit_linear(std::span<const Point2> points, std::size_t begin, std::size_t end);
LinearFit fit_linear(std::span<const Point2> points);
LinearFit fit_g(std::span<const GPoint> points);

struct ScanPoint {
    double x;  // eps or N
    std::vector<BreakTimeRecord> records;  // one per threshold
    std::vector<FidelitySample> average;
};

struct ScanFit {
    double p;
    std::optional<LinearFit> fit;  // absent with fewer than 3 finite t_br
};

struct ScanResult {
    std::vector<ScanPoint> points;
    std::vector<ScanFit> fits;
};

/// t_br(p) for eps = e * direction, fitting lambda(k) t_br against -log e.
ScanResult tbr_vs_eps_scan(const EnsembleConfig& base, std::span<const double> eps_axis, Vec3 direction);

/// t_br(p) for each N at the fixed base eps, fitting lambda(k) t_br against log N.
ScanResult tbr_vs_n_scan(const EnsembleConfig& base, std::span<const int> dims);

}  // namespace catqcf
