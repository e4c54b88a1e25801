#include "forecast/control_needs.hpp"

#include <algorithm>
#include <cmath>

namespace traffic::control {

double LinearSchedule::at(int year, EstimateKind kind) const {
    double target = kind == EstimateKind::High ? target_high : target_low;
    double f = std::clamp(static_cast<double>(year - base_year) /
                              static_cast<double>(target_year - base_year),
                          0.0, 1.0);
    return base + (target - base) * f;
}

void LinearSchedule::validate(const std::string& context) const {
    std::vector<std::string> bad;
    if (!(base > 0)) bad.push_back(context + ": base must be positive");
    if (!(target_low > 0) || !(target_high > 0)) bad.push_back(context + ": targets must be positive");
    if (target_year <= base_year) bad.push_back(context + ": target year not after base year");
    if (target_low > base || target_high > base)
        bad.push_back(context + ": schedule must be non-increasing toward its bottom limit");
    if (!bad.empty()) throw ValidationError(bad);
}

double ControlParams::inter_request_for(const std::string& device_id, int year,
                                        EstimateKind kind) const {
    auto it = inter_request_override.find(device_id);
    if (it != inter_request_override.end()) return it->second;
    return inter_request_hours.at(year, kind);
}

void ControlParams::validate() const {
    if (!(t_r_min_hours > 0)) throw ValidationError("control: minimum inter-request time must be positive");
    inter_request_hours.validate("inter-request schedule");
    inter_site_km.validate("inter-site schedule");
    if (inter_request_hours.target_low < t_r_min_hours ||
        inter_request_hours.target_high < t_r_min_hours)
        throw ValidationError("control: inter-request schedule drops below the minimum inter-request time");
    for (const auto& [id, s] : speeds_kmh)
        if (!(s > 0)) throw ValidationError("control: speed for '" + id + "' must be positive");
}

double attachment_rate(const std::map<std::string, double>& peak_densities,
                       const ControlParams& params, int year, EstimateKind kind) {
    double sum = 0;
    for (const auto& [id, d] : peak_densities) {
        if (d < 0) throw ValidationError("attachment: negative density for '" + id + "'");
        double t_r = params.inter_request_for(id, year, kind);
        if (t_r < params.t_r_min_hours)
            throw ValidationError("attachment: '" + id + "' inter-request time below the minimum");
        double alpha = params.t_r_min_hours / t_r;  // attachment probability per minimum window
        sum += d * alpha;
    }
    return sum / params.t_r_min_hours;
}

double handover_rate(const std::map<std::string, double>& peak_densities,
                     const std::map<std::string, double>& speeds_kmh, double inter_site_km) {
    if (peak_densities.empty()) return 0.0;
    if (!(inter_site_km > 0)) throw ValidationError("handover: inter-site distance must be positive");
    double s_max = 0;
    for (const auto& [id, d] : peak_densities) {
        auto it = speeds_kmh.find(id);
        if (it == speeds_kmh.end() || !(it->second > 0))
            throw ValidationError("handover: no positive speed for '" + id + "'");
        s_max = std::max(s_max, it->second);
    }
    double t_h_min = inter_site_km / s_max;  // fastest device crossing one site
    double sum = 0;
    for (const auto& [id, d] : peak_densities) {
        double beta = t_h_min * speeds_kmh.at(id) / inter_site_km;  // handover probability
        sum += d * beta;
    }
    return sum / t_h_min;
}

const YearIndicators& ControlIndicators::at(int year) const {
    for (const auto& y : per_year)
        if (y.year == year) return y;
    throw ModelError("no control indicators for year " + std::to_string(year));
}

ControlIndicators control_series(const std::vector<engine::DeviceSpec>& registry,
                                 const engine::ForecastResult& result,
                                 const engine::UrbanProfiles& profiles,
                                 const engine::Scenario& scenario,
                                 const ControlParams& params) {
    params.validate();
    ControlIndicators out;
    out.scenario = scenario.name;
    EstimateKind kind = scenario.default_estimate;
    for (int year = result.years.first; year <= result.years.last; ++year) {
        YearIndicators yi;
        yi.year = year;
        yi.peak_hour = engine::peak_hour(result, year).hour;
        std::map<std::string, double> att, ho;
        for (const auto& dev : registry) {
            double pen = dev.series_for(scenario.penetration_estimate(dev.id)).at(year);
            if (dev.control_role == engine::ControlRole::Attachment) {
                size_t di = result.device_index(dev.id);
                att[dev.id] = result.density_at(year, di, yi.peak_hour);
                (void)pen;
            } else if (dev.control_role == engine::ControlRole::Handover) {
                engine::Binding b = dev.handover_binding.value_or(dev.density_binding);
                ho[dev.id] = pen * profiles.binding(b)[yi.peak_hour];
            }
        }
        yi.attachment = attachment_rate(att, params, year, kind);
        double l = params.inter_site_km.at(year, kind);
        yi.handover = ho.empty() ? 0.0 : handover_rate(ho, params.speeds_kmh, l);
        for (const auto& [id, d] : att)
            yi.attachment_contrib[id] = d / params.inter_request_for(id, year, kind);
        for (const auto& [id, d] : ho)
            yi.handover_contrib[id] = d * params.speeds_kmh.at(id) / l;
        out.per_year.push_back(std::move(yi));
    }
    return out;
}

} // namespace traffic::control
