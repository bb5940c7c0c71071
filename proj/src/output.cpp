#include "catqcf/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>

namespace catqcf {
namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string version_string() { return CATQCF_VERSION; }

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

void write_header(std::ostream& os, const OutputMeta& meta) {
    os << "# catqcf " << version_string() << '\n';
    os << "# convention: " << to_string(meta.convention) << '\n';
    os << "# rng: mt19937_64\n";
    os << "# config: " << meta.config.dump() << '\n';
    if (meta.wall_clock) {
        os << "# timestamp: " << utc_timestamp() << '\n';
        os << "# runtime_s: " << format_real(meta.runtime_s) << '\n';
    }
}

void write_series_csv(std::ostream& os, std::span<const FidelitySample> series, const OutputMeta& meta) {
    write_header(os, meta);
    os << "t,qcf,qf_abs2,cf,i1,i2,cross,i1_pred,cross_qf,i2_pred\n";
    for (const auto& s : series) {
        os << s.t;
        for (double v : {s.qcf, s.qf_abs2, s.cf, s.i1, s.i2, s.cross, s.i1_pred, s.cross_qf}) {
            os << ',' << format_real(v);
        }
        os << ',';
        if (s.i2_pred) os << format_real(*s.i2_pred);
        os << '\n';
    }
}

void write_scan_csv(std::ostream& os, const ScanResult& scan, const std::string& axis, int k, const OutputMeta& meta) {
    write_header(os, meta);
    const double lambda = lyapunov(k);
    for (const auto& f : scan.fits) {
        os << "# fit p=" << format_real(f.p) << ": ";
        if (f.fit) {
            os << "slope=" << format_real(f.fit->slope) << " intercept=" << format_real(f.fit->intercept)
               << " residual=" << format_real(f.fit->residual) << " slope_stderr=" << format_real(f.fit->slope_stderr)
               << " n=" << f.fit->n << '\n';
        } else {
            os << "none (fewer than 3 breaking times)\n";
        }
    }
    os << axis << ",p,t_br,lambda\n";
    for (const auto& pt : scan.points) {
        for (const auto& r : pt.records) {
            os << format_real(pt.x) << ',' << format_real(r.p) << ',';
            if (r.t_br) os << *r.t_br;
            os << ',' << format_real(lambda) << '\n';
        }
    }
}

nlohmann::ordered_json provenance(const OutputMeta& meta) {
    nlohmann::ordered_json j;
    j["version"] = version_string();
    j["convention"] = to_string(meta.convention);
    j["rng"] = "mt19937_64";
    j["seed"] = meta.config.value("seed", std::uint64_t{0});
    j["config"] = meta.config;
    if (meta.wall_clock) {
        j["timestamp"] = utc_timestamp();
        j["runtime_s"] = meta.runtime_s;
    }
    return j;
}

nlohmann::ordered_json to_json(const LinearFit& fit) {
    nlohmann::ordered_json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["residual"] = fit.residual;
    j["slope_stderr"] = fit.slope_stderr;
    j["n"] = fit.n;
    return j;
}

nlohmann::ordered_json to_json(const BreakTimeRecord& r) {
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["t_br"] = r.t_br ? nlohmann::ordered_json(*r.t_br) : nlohmann::ordered_json(nullptr);
    j["eps_norm"] = r.eps_norm;
    j["dim_N"] = r.dim_N;
    j["k"] = r.k;
    return j;
}

nlohmann::ordered_json scan_summary(const ScanResult& scan, const std::string& axis, const std::string& fit_against,
                                    int k, const OutputMeta& meta) {
    nlohmann::ordered_json j;
    j["provenance"] = provenance(meta);
    j["axis"] = axis;
    j["fit"] = "lambda*t_br vs " + fit_against;
    j["lambda"] = lyapunov(k);
    auto& fits = j["fits"] = nlohmann::ordered_json::array();
    for (const auto& f : scan.fits) {
        nlohmann::ordered_json e;
        e["p"] = f.p;
        e["fit"] = f.fit ? to_json(*f.fit) : nlohmann::ordered_json(nullptr);
        fits.push_back(e);
    }
    auto& recs = j["records"] = nlohmann::ordered_json::array();
    for (const auto& pt : scan.points) {
        for (const auto& r : pt.records) recs.push_back(to_json(r));
    }
    return j;
}

nlohmann::ordered_json series_summary(std::span<const FidelitySample> series, std::span<const double> p_thresholds,
                                      int N, const MapParams& params, const OutputMeta& meta) {
    const int k = params.k;
    nlohmann::ordered_json j;
    j["provenance"] = provenance(meta);
    j["lambda"] = lyapunov(k);
    auto& recs = j["breaking_times"] = nlohmann::ordered_json::array();
    for (double p : p_thresholds) {
        BreakTimeRecord r = breaking_time(series, p);
        r.eps_norm = params.strength();
        r.dim_N = N;
        r.k = k;
        recs.push_back(to_json(r));
    }
    const auto window = g_fit_window(series, N);
    nlohmann::ordered_json g;
    g["window"] = {{"min_decay", GWindow{}.min_decay}, {"min_f", GWindow{}.min_f}, {"floor_factor", GWindow{}.floor_factor}};
    auto& ts = g["t"] = nlohmann::ordered_json::array();
    for (const auto& p : window) ts.push_back(p.t);
    g["fit"] = window.size() >= 3 ? to_json(fit_g(window)) : nlohmann::ordered_json(nullptr);
    g["expected_slope"] = 2.0 * lyapunov(k);
    j["g_fit"] = g;
    return j;
}

}  // namespace catqcf
