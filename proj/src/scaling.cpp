#include "catqcf/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "catqcf/errors.hpp"

namespace catqcf {
namespace {

int resolve_threads(int requested, int work) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(n, 1, std::max(work, 1));
}

// Calls fn(i, worker) for i in [0, count), item i on worker i % threads.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += threads) fn(i, w);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void accumulate(FidelitySample& acc, const FidelitySample& s) {
    acc.qcf += s.qcf;
    acc.qf_abs2 += s.qf_abs2;
    acc.cf += s.cf;
    acc.i1 += s.i1;
    acc.i2 += s.i2;
    acc.cross += s.cross;
    acc.i1_pred += s.i1_pred;
    acc.cross_qf += s.cross_qf;
}

FidelitySample mean_of(std::span<const FidelitySample> samples) {
    FidelitySample acc;
    acc.t = samples.front().t;
    bool all_i2 = true;
    double i2_pred = 0.0;
    for (const auto& s : samples) {
        accumulate(acc, s);
        if (s.i2_pred) {
            i2_pred += *s.i2_pred;
        } else {
            all_i2 = false;
        }
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    acc.qcf *= inv;
    acc.qf_abs2 *= inv;
    acc.cf *= inv;
    acc.i1 *= inv;
    acc.i2 *= inv;
    acc.cross *= inv;
    acc.i1_pred *= inv;
    acc.cross_qf *= inv;
    if (all_i2) acc.i2_pred = i2_pred * inv;
    return acc;
}

std::vector<ScanFit> fit_scan(const std::vector<ScanPoint>& points, const std::vector<double>& ps, double lambda,
                              double (*abscissa)(double)) {
    std::vector<ScanFit> fits;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        std::vector<Point2> xy;
        for (const auto& pt : points) {
            const auto& r = pt.records[j];
            if (r.t_br) xy.push_back({abscissa(pt.x), lambda * *r.t_br});
        }
        ScanFit f{ps[j], std::nullopt};
        if (xy.size() >= 3) f.fit = fit_linear(xy);
        fits.push_back(f);
    }
    return fits;
}

double neg_log(double x) { return -std::log(x); }
double plain_log(double x) { return std::log(x); }

}  // namespace

void EnsembleConfig::validate() const {
    if (n_packets < 1) throw ConfigError("n_packets must be >= 1");
    if (t_max < 1) throw ConfigError("t_max must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    params.validate();
    for (double p : p_thresholds) {
        if (!(p > 0.0 && p < 1.0)) throw ConfigError("p thresholds must lie in (0,1)");
    }
}

std::vector<Packet> sample_packets(int n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample_packets: n must be >= 0");
    std::mt19937_64 gen(seed);
    auto draw = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<Packet> out(static_cast<std::size_t>(n));
    for (auto& p : out) {
        p.q0 = draw();
        p.p0 = draw();
    }
    return out;
}

EnsembleResult run_ensemble(const EnsembleConfig& config) {
    config.validate();
    const HilbertDim dim = config.dim;
    const Propagator pert(dim, config.params, config.convention);
    const Propagator cat(dim, config.params.unperturbed_copy(), config.convention);
    GridPullback pullback(dim, config.params);

    EnsembleResult result;
    result.centers = sample_packets(config.n_packets, config.seed);
    std::vector<PacketTracker> trackers;
    trackers.reserve(result.centers.size());
    for (const auto& c : result.centers) trackers.emplace_back(c, pert, cat, config.series);

    const int threads = resolve_threads(config.threads, config.n_packets);
    std::vector<FidelityWorkspace> workspaces;
    for (int w = 0; w < threads; ++w) workspaces.emplace_back(dim);
    if (config.keep_packets) result.packets.resize(trackers.size());

    std::vector<FidelitySample> step(trackers.size());
    for (int t = 0; t <= config.t_max; ++t) {
        parallel_for(config.n_packets, threads,
                     [&](int i, int w) { step[i] = trackers[i].sample(pullback, workspaces[w]); });
        result.average.push_back(mean_of(step));
        if (config.keep_packets) {
            for (std::size_t i = 0; i < step.size(); ++i) result.packets[i].push_back(step[i]);
        }
        if (t == config.t_max) break;
        if (config.stop_below && result.average.back().qcf < *config.stop_below) break;
        parallel_for(config.n_packets, threads, [&](int i, int) { trackers[i].advance(); });
        pullback.advance();
    }
    return result;
}

std::vector<FidelitySample> average_series(const EnsembleConfig& config) { return run_ensemble(config).average; }

BreakTimeRecord breaking_time(std::span<const FidelitySample> series, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("breaking_time: p must lie in (0,1)");
    BreakTimeRecord r;
    r.p = p;
    for (const auto& s : series) {
        if (s.qcf < p) {
            r.t_br = s.t;
            break;
        }
    }
    return r;
}

GTransform g_transform(std::span<const FidelitySample> series) {
    GTransform out;
    for (const auto& s : series) {
        if (s.qcf > 0.0 && s.qcf < 1.0) {
            out.points.push_back({s.t, std::log(-std::log(s.qcf))});
        } else {
            out.omitted.push_back(s.t);
        }
    }
    return out;
}

std::vector<GPoint> g_fit_window(std::span<const FidelitySample> series, int N, GWindow window) {
    std::vector<GPoint> out;
    const double floor = std::max(window.min_f, window.floor_factor / N);
    for (const auto& s : series) {
        const bool inside = 1.0 - s.qcf >= window.min_decay && s.qcf >= floor;
        if (inside) {
            out.push_back({s.t, std::log(-std::log(s.qcf))});
        } else if (!out.empty()) {
            break;
        }
    }
    return out;
}

LinearFit fit_linear(std::span<const Point2> points, std::size_t begin, std::size_t end) {
    if (end > points.size() || begin > end) throw std::invalid_argument("fit_linear: window out of range");
    const std::size_t n = end - begin;
    if (n < 3) throw std::invalid_argument("fit_linear: need at least 3 points, got " + std::to_string(n));
    double mx = 0.0, my = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        mx += points[i].x;
        my += points[i].y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double dx = points[i].x - mx;
        sxx += dx * dx;
        sxy += dx * (points[i].y - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_linear: all x values coincide");
    LinearFit f;
    f.n = static_cast<int>(n);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double r = points[i].y - (f.intercept + f.slope * points[i].x);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    f.slope_stderr = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
    return f;
}

LinearFit fit_linear(std::span<const Point2> points) { return fit_linear(points, 0, points.size()); }

LinearFit fit_g(std::span<const GPoint> points) {
    std::vector<Point2> xy;
    xy.reserve(points.size());
    for (const auto& p : points) xy.push_back({static_cast<double>(p.t), p.g});
    return fit_linear(xy);
}

ScanResult tbr_vs_eps_scan(const EnsembleConfig& base, std::span<const double> eps_axis, Vec3 direction) {
    const double norm = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] + direction[2] * direction[2]);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ConfigError("eps direction must be a nonzero finite vector");
    if (base.p_thresholds.empty()) throw ConfigError("at least one p threshold is required");
    ScanResult result;
    const double p_min = *std::min_element(base.p_thresholds.begin(), base.p_thresholds.end());
    for (double e : eps_axis) {
        if (!(e > 0.0)) throw ConfigError("eps axis values must be positive");
        EnsembleConfig cfg = base;
        for (int j = 0; j < 3; ++j) cfg.params.eps[j] = e * direction[j] / norm;
        cfg.stop_below = p_min;
        cfg.keep_packets = false;
        ScanPoint pt{e, {}, average_series(cfg)};
        for (double p : base.p_thresholds) {
            BreakTimeRecord r = breaking_time(pt.average, p);
            r.eps_norm = e;
            r.dim_N = cfg.dim.N();
            r.k = cfg.params.k;
            pt.records.push_back(r);
        }
        result.points.push_back(std::move(pt));
    }
    result.fits = fit_scan(result.points, base.p_thresholds, lyapunov(base.params.k), neg_log);
    return result;
}

ScanResult tbr_vs_n_scan(const EnsembleConfig& base, std::span<const int> dims) {
    if (base.p_thresholds.empty()) throw ConfigError("at least one p threshold is required");
    ScanResult result;
    const double p_min = *std::min_element(base.p_thresholds.begin(), base.p_thresholds.end());
    for (int N : dims) {
        EnsembleConfig cfg = base;
        cfg.dim = HilbertDim(N);
        cfg.stop_below = p_min;
        cfg.keep_packets = false;
        ScanPoint pt{static_cast<double>(N), {}, average_series(cfg)};
        for (double p : base.p_thresholds) {
            BreakTimeRecord r = breaking_time(pt.average, p);
            r.eps_norm = cfg.params.strength();
            r.dim_N = N;
            r.k = cfg.params.k;
            pt.records.push_back(r);
        }
        result.points.push_back(std::move(pt));
    }
    result.fits = fit_scan(result.points, base.p_thresholds, lyapunov(base.params.k), plain_log);
    return result;
}

}  // namespace catqcf
