#include "forecast/capacity_timing.hpp"

#include <algorithm>

namespace traffic::capacity {

void CapacityAssumption::validate() const {
    if (!(multiplier > 0)) throw ParameterError("capacity assumption '" + name + "': multiplier must be positive");
}

std::optional<int> capacity_crossing_year(const std::map<int, double>& peak_series,
                                          int baseline_year,
                                          const CapacityAssumption& assumption) {
    assumption.validate();
    auto base = peak_series.find(baseline_year);
    if (base == peak_series.end())
        throw ParameterError("capacity: baseline year " + std::to_string(baseline_year) +
                             " missing from peak series");
    if (!(base->second > 0)) throw ParameterError("capacity: baseline peak must be positive");
    double threshold = assumption.multiplier * base->second;
    for (const auto& [year, peak] : peak_series) {
        if (year < baseline_year) continue;
        if (peak >= threshold) return year;
    }
    return std::nullopt;
}

CrossingReport sweep(const std::map<std::string, std::map<int, double>>& peak_by_scenario,
                     int baseline_year, std::vector<CapacityAssumption> assumptions) {
    std::stable_sort(assumptions.begin(), assumptions.end(),
                     [](const auto& a, const auto& b) { return a.multiplier < b.multiplier; });
    CrossingReport report;
    for (const auto& a : assumptions)
        for (const auto& [scenario, series] : peak_by_scenario)
            report.rows.push_back(
                {scenario, a.name, a.multiplier, capacity_crossing_year(series, baseline_year, a)});
    return report;
}

} // namespace traffic::capacity
