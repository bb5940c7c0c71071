// catqcf <mode> --config <file> [--set key=value ...] --out <dir>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "catqcf/app.hpp"
#include "catqcf/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Quantum-classical fidelity of the perturbed cat map"};
    std::string mode;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::string threads;
    bool no_timestamp = false;
    app.add_option("mode", mode, "series | decompose | scan-eps | scan-n | selftest")->required();
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--set", overrides, "override a config key, key=value")->take_all();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (integer or auto)");
    app.add_flag("--no-timestamp", no_timestamp, "omit wall-clock lines so output is reproducible");
    app.set_version_flag("--version", std::string("catqcf ") + CATQCF_VERSION);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : catqcf::kExitConfig;
    }

    catqcf::RunConfig config;
    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw catqcf::ConfigError("cannot read config file " + config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        config = catqcf::parse_config(text);
        config.mode = catqcf::parse_mode(mode);
        for (const auto& o : overrides) catqcf::apply_override(config, o);
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (!threads.empty()) catqcf::apply_override(config, "threads=" + threads);
    } catch (const catqcf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return catqcf::kExitConfig;
    }
    return catqcf::run(config, catqcf::RunOptions{!no_timestamp}, std::cout, std::cerr);
}
