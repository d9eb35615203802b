#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>

#include <json.hpp>

namespace qpulse {

// Effective run configuration: values come from the config file when given,
// CLI flags override, and the result is echoed to output_dir/config.echo.json.
struct RunConfig {
    std::string out_dir = "out";
    std::uint64_t seed = 20240801ULL;
    std::string threads = "1"; // integer or "auto"
    // resource caps guarding paper-scale figure runs (CLI exit code 3)
    double cap_nbar = 1000.0;
    int cap_nmax = 2000;
    int cap_J2 = 12;

    unsigned thread_count() const {
        if (threads == "auto") {
            const unsigned hw = std::thread::hardware_concurrency();
            return hw == 0 ? 1 : hw;
        }
        const long v = std::stol(threads);
        if (v < 1) throw std::domain_error("threads must be >= 1 or 'auto'");
        return static_cast<unsigned>(v);
    }

    nlohmann::json echo() const {
        nlohmann::json j;
        j["out"] = out_dir;
        j["seed"] = seed;
        j["threads"] = threads;
        j["caps"] = {{"nbar", cap_nbar}, {"n_max", cap_nmax}, {"J2", cap_J2}};
        return j;
    }
};

inline nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

// Applies file values for keys the command line did not set.
inline void merge_config(RunConfig& cfg, const nlohmann::json& file,
                         bool out_given, bool seed_given, bool threads_given) {
    if (!out_given && file.contains("out")) cfg.out_dir = file["out"].get<std::string>();
    if (!seed_given && file.contains("seed")) cfg.seed = file["seed"].get<std::uint64_t>();
    if (!threads_given && file.contains("threads")) {
        if (file["threads"].is_string())
            cfg.threads = file["threads"].get<std::string>();
        else
            cfg.threads = std::to_string(file["threads"].get<long>());
    }
    if (file.contains("caps")) {
        const auto& c = file["caps"];
        if (c.contains("nbar")) cfg.cap_nbar = c["nbar"].get<double>();
        if (c.contains("n_max")) cfg.cap_nmax = c["n_max"].get<int>();
        if (c.contains("J2")) cfg.cap_J2 = c["J2"].get<int>();
    }
}

} // namespace qpulse
