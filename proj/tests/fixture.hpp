#pragma once

#include <string>

#include "forecast/cli_io.hpp"

inline std::string fixture_path(const std::string& rel) {
    return std::string(FIXTURE_DIR) + "/" + rel;
}

inline const traffic::io::ScenarioConfig& fixture_config() {
    static traffic::io::ScenarioConfig cfg = traffic::io::load_config(fixture_path("config.json"));
    return cfg;
}

inline const traffic::io::Resolved& fixture_resolved() {
    static traffic::io::Resolved r = traffic::io::resolve(fixture_config());
    return r;
}
