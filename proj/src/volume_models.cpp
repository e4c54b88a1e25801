#include "forecast/volume_models.hpp"

#include <cmath>

namespace traffic::volume {

double exponential_volume(double base, int base_year, double cagr, int year) {
    if (base < 0) throw ParameterError("exponential volume: negative base");
    if (cagr <= -1) throw ParameterError("exponential volume: cagr must exceed -1");
    return base * std::pow(1.0 + cagr, year - base_year);
}

double ceiling_linear_volume(double base, int base_year, double ceiling, int ceiling_year,
                             int year) {
    if (ceiling < base) throw ParameterError("ceiling-linear volume: ceiling below base");
    if (ceiling_year <= base_year) throw ParameterError("ceiling-linear volume: bad year span");
    if (year <= base_year) return base;
    if (year >= ceiling_year) return ceiling;
    return base + (ceiling - base) * static_cast<double>(year - base_year) /
                      static_cast<double>(ceiling_year - base_year);
}

double camera_daily_volume(int year, double daily_hours_delta, double hd_rate_gb_per_hour,
                           int start_year, double base_hours, int base_hours_year) {
    if (year < start_year) return 0.0;
    double hours = base_hours + (year - base_hours_year) * daily_hours_delta;
    return hours * hd_rate_gb_per_hour;
}

double constant_volume(double value) {
    if (value < 0) throw ValidationError("constant volume must be non-negative");
    return value;
}

void GrowthSpec::validate(const std::string& context) const {
    std::vector<std::string> bad;
    switch (kind) {
        case GrowthKind::Exponential:
            if (base < 0) bad.push_back(context + ": negative base volume");
            if (cagr_low <= -1 || cagr_high <= -1) bad.push_back(context + ": cagr must exceed -1");
            if (cagr_low > cagr_high)
                bad.push_back(context + ": low growth estimate exceeds high estimate");
            break;
        case GrowthKind::CeilingLinear:
            if (ceiling_low > ceiling_high)
                bad.push_back(context + ": low ceiling exceeds high ceiling");
            if (ceiling_low < base || ceiling_high < base)
                bad.push_back(context + ": ceiling below base volume");
            if (ceiling_year <= base_year) bad.push_back(context + ": ceiling year not after base year");
            break;
        case GrowthKind::Constant:
            if (constant < 0) bad.push_back(context + ": negative constant volume");
            break;
        case GrowthKind::CameraHours:
            if (camera_delta_low > camera_delta_high)
                bad.push_back(context + ": low hours delta exceeds high delta");
            if (camera_hd_rate <= 0) bad.push_back(context + ": non-positive stream rate");
            break;
    }
    if (!bad.empty()) throw ValidationError(bad);
}

double GrowthSpec::value(int year, EstimateKind est) const {
    bool low = est != EstimateKind::High;
    switch (kind) {
        case GrowthKind::Exponential:
            return exponential_volume(base, base_year, low ? cagr_low : cagr_high,
                                      std::max(year, base_year));
        case GrowthKind::CeilingLinear:
            return ceiling_linear_volume(base, base_year, low ? ceiling_low : ceiling_high,
                                         ceiling_year, year);
        case GrowthKind::Constant: return constant;
        case GrowthKind::CameraHours:
            return camera_daily_volume(year, low ? camera_delta_low : camera_delta_high,
                                       camera_hd_rate, camera_start_year, camera_base_hours,
                                       camera_base_hours_year);
    }
    return 0.0;
}

void ActivitySpec::validate(const std::string& context) const {
    std::vector<std::string> bad;
    if (kind == ActivityKind::UsageProfile && profile.empty())
        bad.push_back(context + ": usage-profile activity needs a profile id");
    if (kind == ActivityKind::UniformWindow) {
        if (window_start < 0 || window_end > 24 || window_end <= window_start)
            bad.push_back(context + ": operating window must satisfy 0 <= start < end <= 24");
        if (fleet_density < 0) bad.push_back(context + ": negative fleet density");
    }
    if (!bad.empty()) throw ValidationError(bad);
}

HourlyProfile allocate_hourly(double volume, const ActivitySpec& activity,
                              const std::map<std::string, HourlyProfile>& profiles) {
    if (volume < 0) throw ParameterError("allocate: negative volume");
    HourlyProfile out;
    switch (activity.kind) {
        case ActivityKind::UsageProfile: {
            auto it = profiles.find(activity.profile);
            if (it == profiles.end())
                throw ValidationError("allocate: unknown usage profile '" + activity.profile + "'");
            const HourlyProfile& share = it->second;
            if (std::abs(share.sum() - 1.0) > 1e-9)
                throw ValidationError("allocate: profile '" + activity.profile +
                                      "' is not normalized");
            for (int h = 0; h < 24; ++h) out[h] = volume * share[h];
            break;
        }
        case ActivityKind::UniformWindow: {
            int n = activity.window_end - activity.window_start;
            for (int h = activity.window_start; h < activity.window_end; ++h)
                out[h] = volume / n;
            break;
        }
        case ActivityKind::Uniform24h:
            for (int h = 0; h < 24; ++h) out[h] = volume / 24.0;
            break;
        case ActivityKind::PerMovingHour:
            throw ParameterError("allocate: per-moving-hour volumes attach to a moving density");
    }
    return out;
}

} // namespace traffic::volume
