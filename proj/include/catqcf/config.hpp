#pragma once

// Run configuration for the command-line driver, read from a flat JSON object.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "catqcf/classical.hpp"
#include "catqcf/quantum.hpp"

namespace catqcf {

enum class Mode { series, decompose, scan_eps, scan_n, selftest };

std::string to_string(Mode m);
/// "series", "decompose", "scan-eps", "scan-n", "selftest". Throws ConfigError.
Mode parse_mode(std::string_view name);

struct RunConfig {
    Mode mode = Mode::series;
    int dim_N = 512;
    int k = 1;
    Vec3 eps{0.0, 0.0, 0.0};
    std::vector<double> eps_axis{1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};
    std::vector<int> n_axis{64, 128, 256, 512, 1024};
    int t_max = 40;
    int n_packets = 100;
    std::uint64_t seed = 1;
    std::vector<double> p_thresholds{0.9, 0.8, 0.7};
    Convention convention = Convention::semiclassical;
    std::string output_dir = "out";
    int threads = 0;  // 0 = auto

    /// Throws ConfigError.
    void validate() const;
    nlohmann::ordered_json to_json() const;
};

/// Parses a JSON object; missing keys keep their defaults and an empty
/// document yields the defaults. Unknown keys, wrong types and invalid
/// values throw ConfigError.
RunConfig parse_config(std::string_view text);

/// Applies one "key=value" override. The value is read as JSON when
/// possible and as a bare string otherwise.
void apply_override(RunConfig& config, std::string_view assignment);

}  // namespace catqcf
