#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forecast/diffusion.hpp"
#include "forecast/types.hpp"
#include "forecast/volume_models.hpp"

namespace traffic::engine {

/// Urban density a device population is bound to (Eq. 1's u_i).
enum class Binding {
    ActivePopulation,
    NonWorkingPopulation,
    MovingPopulation,
    MovingCars,
    MovingBuses,
    MovingBikes,
    AreaUnit,    // penetration is already devices/km2
    Buildings,
    Retailers,
};

const char* to_string(Binding b);

enum class ControlRole { None, Attachment, Handover };

struct ApplicationSpec {
    std::string id;
    TrafficCategory category = TrafficCategory::Human;
    volume::GrowthSpec growth;
    volume::ActivitySpec activity;
};

struct DeviceSpec {
    std::string id;
    std::string adopting_body;
    Binding density_binding = Binding::ActivePopulation;
    ControlRole control_role = ControlRole::None;
    std::optional<Binding> handover_binding;  // defaults to density_binding
    std::map<EstimateKind, diffusion::PenetrationSeries> penetration;
    std::vector<ApplicationSpec> applications;

    /// Medium-only devices answer the medium series for any selection.
    const diffusion::PenetrationSeries& series_for(EstimateKind kind) const;
};

/// Sum of the device's application volumes for one estimate; low-activity
/// machine applications carry no user volume.
double device_daily_volume(const DeviceSpec& device, int year, EstimateKind estimate);

/// slow selects all-low, rapid all-high (medium where only medium exists);
/// custom may override per device / per application volume.
struct Scenario {
    std::string name;
    EstimateKind default_estimate = EstimateKind::Low;
    std::map<std::string, EstimateKind> device_overrides;   // penetration selection
    std::map<std::string, EstimateKind> volume_overrides;   // per application id

    static Scenario slow();
    static Scenario rapid();

    EstimateKind penetration_estimate(const std::string& device_id) const;
    EstimateKind volume_estimate(const std::string& application_id) const;
};

/// Resolved hourly densities and usage-share profiles for one area.
struct UrbanProfiles {
    std::map<Binding, HourlyProfile> bindings;
    std::map<std::string, HourlyProfile> usage_shares;

    const HourlyProfile& binding(Binding b) const;
};

/// Volume tensor (year x device x application x hour) in GB/km2 and density
/// tensor (year x device x hour) in devices/km2, with fixed index order.
struct ForecastResult {
    YearRange years;
    std::string scenario;
    std::vector<std::string> device_ids;
    std::vector<std::vector<std::string>> app_ids;            // per device
    std::vector<std::vector<TrafficCategory>> app_categories; // per device
    std::vector<double> volume;   // [year][device][app][hour]
    std::vector<double> density;  // [year][device][hour]
    std::vector<size_t> app_offset;  // per device, into per-year app-hour block
    size_t apps_total = 0;

    int year_index(int year) const;
    double volume_at(int year, size_t dev, size_t app, int hour) const;
    double density_at(int year, size_t dev, int hour) const;

    /// Sum over devices and applications, fixed ascending order.
    HourlyProfile hourly_total(int year) const;
    double daily_total(int year) const;
    double device_daily(int year, size_t dev) const;
    HourlyProfile density_total(int year) const;
    HourlyProfile device_density_profile(int year, size_t dev) const;
    size_t device_index(const std::string& id) const;
};

/// Hourly device density: penetration times the bound urban density.
HourlyProfile device_density(double penetration, const HourlyProfile& urban_density);

enum class Execution { Serial, Parallel };

/// Composes penetration, densities, and volumes. Deterministic: identical
/// inputs produce bit-identical tensors for either execution mode.
ForecastResult forecast(const std::vector<DeviceSpec>& registry, const Scenario& scenario,
                        YearRange years, const UrbanProfiles& profiles,
                        Execution mode = Execution::Parallel);

struct CategoryRollup {
    std::map<TrafficCategory, double> totals;  // GB/km2 per day
    std::map<TrafficCategory, double> shares;
    double grand_total = 0;
};

CategoryRollup category_rollup(const ForecastResult& result, int year);

struct PeakHour {
    int hour = 0;
    double volume = 0;  // GB/km2 in that hour
    double share = 0;   // of the daily total
};

PeakHour peak_hour(const ForecastResult& result, int year);

/// (v_end / v_start)^(1/years) - 1
double cagr(double v_start, double v_end, int years);

struct MedianDensity {
    double total = 0;  // devices/km2
    std::map<std::string, double> per_device;
};

MedianDensity median_density(const ForecastResult& result, int year);

} // namespace traffic::engine
