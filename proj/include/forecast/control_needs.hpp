#pragma once

#include <map>
#include <string>
#include <vector>

#include "forecast/forecast_engine.hpp"
#include "forecast/types.hpp"

namespace traffic::control {

/// Bottom-limited decreasing linear schedule between a base-year anchor and a
/// per-estimate target, constant outside the span.
struct LinearSchedule {
    double base = 0;
    int base_year = 0;
    double target_low = 0;
    double target_high = 0;
    int target_year = 0;

    double at(int year, EstimateKind kind) const;
    void validate(const std::string& context) const;
};

struct ControlParams {
    double t_r_min_hours = 0.25;            // minimum inter-request time
    LinearSchedule inter_request_hours;     // generic low-activity schedule
    LinearSchedule inter_site_km;
    std::map<std::string, double> speeds_kmh;            // per handover device
    std::map<std::string, double> inter_request_override; // per device, hours

    double inter_request_for(const std::string& device_id, int year, EstimateKind kind) const;
    void validate() const;
};

/// Attachment requests per hour per km2 from low-activity devices:
/// alpha_i = t_r_min / t_r_i, rate = (1/t_r_min) * sum d_i * alpha_i.
double attachment_rate(const std::map<std::string, double>& peak_densities,
                       const ControlParams& params, int year, EstimateKind kind);

/// Handovers per hour per km2 from moving devices:
/// t_h_min = l / max s_i, beta_i = t_h_min * s_i / l,
/// rate = (1/t_h_min) * sum d_i * beta_i.
double handover_rate(const std::map<std::string, double>& peak_densities,
                     const std::map<std::string, double>& speeds_kmh, double inter_site_km);

struct YearIndicators {
    int year = 0;
    int peak_hour = 0;
    double attachment = 0;  // requests/h/km2
    double handover = 0;    // handovers/h/km2
    std::map<std::string, double> attachment_contrib;
    std::map<std::string, double> handover_contrib;
};

struct ControlIndicators {
    std::string scenario;
    std::vector<YearIndicators> per_year;

    const YearIndicators& at(int year) const;
};

/// Evaluates both rates at each year's forecast peak hour.
ControlIndicators control_series(const std::vector<engine::DeviceSpec>& registry,
                                 const engine::ForecastResult& result,
                                 const engine::UrbanProfiles& profiles,
                                 const engine::Scenario& scenario,
                                 const ControlParams& params);

} // namespace traffic::control
