#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forecast/types.hpp"

namespace traffic::capacity {

/// How much more than the baseline-year peak-hour volume the macro layer can
/// absorb under a given technology/spectrum assumption.
struct CapacityAssumption {
    std::string name;
    double multiplier = 0;

    void validate() const;
};

/// Smallest year whose peak volume reaches multiplier x baseline peak;
/// nullopt when the horizon never crosses.
std::optional<int> capacity_crossing_year(const std::map<int, double>& peak_series,
                                          int baseline_year, const CapacityAssumption& assumption);

struct Crossing {
    std::string scenario;
    std::string assumption;
    double multiplier = 0;
    std::optional<int> year;
};

struct CrossingReport {
    std::vector<Crossing> rows;  // sorted by multiplier, then scenario
};

CrossingReport sweep(const std::map<std::string, std::map<int, double>>& peak_by_scenario,
                     int baseline_year, std::vector<CapacityAssumption> assumptions);

} // namespace traffic::capacity
