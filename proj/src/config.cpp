#include "catqcf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "catqcf/errors.hpp"

namespace catqcf {
namespace {

using nlohmann::json;

[[noreturn]] void type_error(const std::string& key, const char* expected) {
    throw ConfigError("config key '" + key + "': expected " + expected);
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) type_error(key, "an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ConfigError("config key '" + key + "': value out of range");
    }
    return static_cast<int>(x);
}

double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) type_error(key, "a number");
    return v.get<double>();
}

std::vector<double> as_double_list(const json& v, const std::string& key) {
    if (!v.is_array()) type_error(key, "a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_double(e, key));
    return out;
}

std::vector<int> as_int_list(const json& v, const std::string& key) {
    if (!v.is_array()) type_error(key, "a list of integers");
    std::vector<int> out;
    for (const auto& e : v) out.push_back(as_int(e, key));
    return out;
}

void set_key(RunConfig& c, const std::string& key, const json& v) {
    if (key == "mode") {
        if (!v.is_string()) type_error(key, "a string");
        c.mode = parse_mode(v.get<std::string>());
    } else if (key == "dim_N") {
        c.dim_N = as_int(v, key);
    } else if (key == "k") {
        c.k = as_int(v, key);
    } else if (key == "eps") {
        const auto e = as_double_list(v, key);
        if (e.size() != 3) throw ConfigError("config key 'eps': expected 3 components");
        c.eps = {e[0], e[1], e[2]};
    } else if (key == "eps_axis") {
        c.eps_axis = as_double_list(v, key);
    } else if (key == "n_axis") {
        c.n_axis = as_int_list(v, key);
    } else if (key == "t_max") {
        c.t_max = as_int(v, key);
    } else if (key == "n_packets") {
        c.n_packets = as_int(v, key);
    } else if (key == "seed") {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            type_error(key, "a non-negative integer");
        }
        c.seed = v.get<std::uint64_t>();
    } else if (key == "p_thresholds") {
        c.p_thresholds = as_double_list(v, key);
    } else if (key == "convention") {
        if (!v.is_string()) type_error(key, "a string");
        c.convention = parse_convention(v.get<std::string>());
    } else if (key == "output_dir") {
        if (!v.is_string()) type_error(key, "a string");
        c.output_dir = v.get<std::string>();
    } else if (key == "threads") {
        if (v.is_string()) {
            if (v.get<std::string>() != "auto") type_error(key, "an integer or \"auto\"");
            c.threads = 0;
        } else {
            c.threads = as_int(v, key);
        }
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

}  // namespace

std::string to_string(Mode m) {
    switch (m) {
        case Mode::series: return "series";
        case Mode::decompose: return "decompose";
        case Mode::scan_eps: return "scan-eps";
        case Mode::scan_n: return "scan-n";
        case Mode::selftest: return "selftest";
    }
    return "unknown";
}

Mode parse_mode(std::string_view name) {
    for (Mode m : {Mode::series, Mode::decompose, Mode::scan_eps, Mode::scan_n, Mode::selftest}) {
        if (name == to_string(m)) return m;
    }
    throw ConfigError("unknown mode '" + std::string(name) + "'");
}

void RunConfig::validate() const {
    (void)HilbertDim(dim_N);
    MapParams{k, eps}.validate();
    if (t_max < 1) throw ConfigError("t_max must be >= 1");
    if (n_packets < 1) throw ConfigError("n_packets must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0 (0 = auto)");
    if (p_thresholds.empty()) throw ConfigError("p_thresholds must not be empty");
    for (double p : p_thresholds) {
        if (!(p > 0.0 && p < 1.0)) throw ConfigError("p thresholds must lie in (0,1)");
    }
    for (double e : eps_axis) {
        if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps_axis values must be positive and finite");
    }
    for (int n : n_axis) (void)HilbertDim(n);
    if (mode == Mode::scan_eps && eps_axis.size() < 3) throw ConfigError("scan-eps needs at least 3 eps values");
    if (mode == Mode::scan_n && n_axis.size() < 3) throw ConfigError("scan-n needs at least 3 N values");
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["mode"] = to_string(mode);
    j["dim_N"] = dim_N;
    j["k"] = k;
    j["eps"] = {eps[0], eps[1], eps[2]};
    j["eps_axis"] = eps_axis;
    j["n_axis"] = n_axis;
    j["t_max"] = t_max;
    j["n_packets"] = n_packets;
    j["seed"] = seed;
    j["p_thresholds"] = p_thresholds;
    j["convention"] = to_string(convention);
    j["output_dir"] = output_dir;
    if (threads == 0) {
        j["threads"] = "auto";
    } else {
        j["threads"] = threads;
    }
    return j;
}

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); });
    if (blank) return c;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) set_key(c, key, value);
    c.validate();
    return c;
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override must look like key=value, got '" + std::string(assignment) + "'");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    set_key(config, key, value);
}

}  // namespace catqcf
