#include "catqcf/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "catqcf/errors.hpp"
#include "catqcf/output.hpp"
#include "catqcf/selftest.hpp"

namespace catqcf {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
    auto os = open_output(path);
    os << j.dump(2) << '\n';
}

EnsembleConfig ensemble_from(const RunConfig& c) {
    EnsembleConfig e;
    e.n_packets = c.n_packets;
    e.seed = c.seed;
    e.dim = HilbertDim(c.dim_N);
    e.params = MapParams{c.k, c.eps};
    e.t_max = c.t_max;
    e.p_thresholds = c.p_thresholds;
    e.convention = c.convention;
    e.threads = c.threads;
    return e;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int run_selftest_mode(std::ostream& log) {
    bool ok = true;
    for (const auto& c : run_selftest()) {
        char line[256];
        std::snprintf(line, sizeof line, "%s %s: error %.3e (tolerance %.1e)", c.passed() ? "PASS" : "FAIL",
                      c.name.c_str(), c.error, c.tolerance);
        log << line << '\n';
        ok = ok && c.passed();
    }
    return ok ? kExitOk : kExitNumerical;
}

void run_series(const RunConfig& c, const OutputMeta& base, Clock::time_point start, std::ostream& log) {
    EnsembleConfig e = ensemble_from(c);
    e.keep_packets = true;
    if (c.mode == Mode::decompose) {
        e.series.decompose = true;
        e.series.i2_leading = c.dim_N <= kMaxDensePropagatorN;
    }
    const EnsembleResult r = run_ensemble(e);
    OutputMeta meta = base;
    meta.runtime_s = seconds_since(start);

    const fs::path dir(c.output_dir);
    fs::create_directories(dir / "packets");
    {
        auto os = open_output(dir / "avg_series.csv");
        write_series_csv(os, r.average, meta);
    }
    for (std::size_t i = 0; i < r.packets.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "packet_%04zu.csv", i);
        auto os = open_output(dir / "packets" / name);
        os << "# packet " << i << ": q0=" << format_real(r.centers[i].q0) << " p0=" << format_real(r.centers[i].p0)
           << '\n';
        write_series_csv(os, r.packets[i], meta);
    }
    write_json(dir / "summary.json", series_summary(r.average, c.p_thresholds, c.dim_N, e.params, meta));
    log << "wrote " << (dir / "avg_series.csv").string() << ", " << r.packets.size() << " packet series and "
        << (dir / "summary.json").string() << '\n';
}

void run_scan(const RunConfig& c, const OutputMeta& base, Clock::time_point start, std::ostream& log) {
    const EnsembleConfig e = ensemble_from(c);
    ScanResult scan;
    std::string axis, against;
    if (c.mode == Mode::scan_eps) {
        Vec3 dir = c.eps;
        if (dir[0] == 0.0 && dir[1] == 0.0 && dir[2] == 0.0) dir = {1.0, 0.0, 0.0};
        scan = tbr_vs_eps_scan(e, c.eps_axis, dir);
        axis = "eps";
        against = "-log eps";
    } else {
        scan = tbr_vs_n_scan(e, c.n_axis);
        axis = "N";
        against = "log N";
    }
    OutputMeta meta = base;
    meta.runtime_s = seconds_since(start);
    const fs::path dir(c.output_dir);
    fs::create_directories(dir);
    {
        auto os = open_output(dir / "breaktimes.csv");
        write_scan_csv(os, scan, axis, c.k, meta);
    }
    write_json(dir / "summary.json", scan_summary(scan, axis, against, c.k, meta));
    for (const auto& f : scan.fits) {
        if (f.fit) {
            log << "p=" << f.p << ": slope " << f.fit->slope << " +- " << f.fit->slope_stderr << '\n';
        } else {
            log << "p=" << f.p << ": fewer than 3 breaking times, no fit\n";
        }
    }
}

}  // namespace

int run(const RunConfig& config, const RunOptions& options, std::ostream& log, std::ostream& err) {
    const auto start = Clock::now();
    try {
        config.validate();
        if (config.mode == Mode::selftest) return run_selftest_mode(log);
        OutputMeta meta;
        meta.config = config.to_json();
        meta.convention = config.convention;
        meta.wall_clock = options.wall_clock;
        if (config.mode == Mode::series || config.mode == Mode::decompose) {
            run_series(config, meta, start, log);
        } else {
            run_scan(config, meta, start, log);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical assertion failed: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace catqcf
