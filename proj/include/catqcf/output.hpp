#pragma once

// CSV and JSON writers for fidelity series and breaking-time scans.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"

#include "catqcf/scaling.hpp"

namespace catqcf {

/// Provenance written into every output file.
struct OutputMeta {
    nlohmann::ordered_json config;
    Convention convention = Convention::semiclassical;
    /// Wall-clock data (timestamp and runtime) vary between identical runs;
    /// without them the output is byte-for-byte reproducible.
    bool wall_clock = true;
    double runtime_s = 0.0;
};

std::string version_string();
/// "%.16e", or "nan".
std::string format_real(double x);

/// "# key: value" comment lines.
void write_header(std::ostream& os, const OutputMeta& meta);

/// Columns t,qcf,qf_abs2,cf,i1,i2,cross,i1_pred,cross_qf,i2_pred; i2_pred is
/// empty when absent.
void write_series_csv(std::ostream& os, std::span<const FidelitySample> series, const OutputMeta& meta);

/// Columns <axis>,p,t_br,lambda with t_br empty when the threshold is never
/// crossed; fitted slopes go into the comment header.
void write_scan_csv(std::ostream& os, const ScanResult& scan, const std::string& axis, int k, const OutputMeta& meta);

nlohmann::ordered_json provenance(const OutputMeta& meta);
nlohmann::ordered_json to_json(const LinearFit& fit);
nlohmann::ordered_json to_json(const BreakTimeRecord& r);

nlohmann::ordered_json scan_summary(const ScanResult& scan, const std::string& axis, const std::string& fit_against,
                                    int k, const OutputMeta& meta);
nlohmann::ordered_json series_summary(std::span<const FidelitySample> series, std::span<const double> p_thresholds,
                                      int N, const MapParams& params, const OutputMeta& meta);

}  // namespace catqcf
