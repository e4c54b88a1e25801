#pragma once

#include <map>
#include <string>

#include "forecast/types.hpp"

namespace traffic::volume {

/// base * (1+cagr)^(year - base_year); exact ratio between consecutive years.
double exponential_volume(double base, int base_year, double cagr, int year);

/// Linear from base to ceiling over [base_year, ceiling_year], constant
/// outside; never exceeds the ceiling.
double ceiling_linear_volume(double base, int base_year, double ceiling, int ceiling_year,
                             int year);

/// Streamed camera footage: hours(y) = base_hours + (y - base_hours_year) * delta,
/// converted at hd_rate GB/h. Years before start_year carry no volume. Hours may
/// exceed 24 (parallel analytic streams).
double camera_daily_volume(int year, double daily_hours_delta, double hd_rate_gb_per_hour,
                           int start_year = 2023, double base_hours = 7.0,
                           int base_hours_year = 2022);

double constant_volume(double value);

enum class GrowthKind { Exponential, CeilingLinear, Constant, CameraHours };

/// One application's volume growth with low/high variants.
struct GrowthSpec {
    GrowthKind kind = GrowthKind::Constant;
    double base = 0;
    int base_year = 0;
    double cagr_low = 0, cagr_high = 0;
    double ceiling_low = 0, ceiling_high = 0;
    int ceiling_year = 0;
    double constant = 0;
    int camera_start_year = 2023;
    double camera_base_hours = 7.0;
    int camera_base_hours_year = 2022;
    double camera_hd_rate = 4.5;
    double camera_delta_low = 0, camera_delta_high = 0;

    void validate(const std::string& context) const;

    /// Daily GB per device for the estimate. Growth is anchored at base_year:
    /// years before it hold the base value (the service has not ramped yet).
    double value(int year, EstimateKind kind) const;
};

enum class ActivityKind { UsageProfile, PerMovingHour, UniformWindow, Uniform24h };

struct ActivitySpec {
    ActivityKind kind = ActivityKind::Uniform24h;
    std::string profile;        // UsageProfile
    int window_start = 0;       // UniformWindow, [start, end)
    int window_end = 24;
    double fleet_density = 0;   // UniformWindow: fixed device basis when > 0

    void validate(const std::string& context) const;
};

/// Spreads a daily per-device volume over hours. usage_profile weights by a
/// share profile, uniform_window spreads evenly inside [start,end), uniform_24h
/// evenly over the day. The hourly values sum back to the input volume.
HourlyProfile allocate_hourly(double volume, const ActivitySpec& activity,
                              const std::map<std::string, HourlyProfile>& profiles);

} // namespace traffic::volume
