#include "forecast/forecast_engine.hpp"

#include <cmath>

namespace traffic::engine {

const char* to_string(Binding b) {
    switch (b) {
        case Binding::ActivePopulation: return "active_population";
        case Binding::NonWorkingPopulation: return "non_working_population";
        case Binding::MovingPopulation: return "moving_population";
        case Binding::MovingCars: return "moving_cars";
        case Binding::MovingBuses: return "moving_buses";
        case Binding::MovingBikes: return "moving_bikes";
        case Binding::AreaUnit: return "area_unit";
        case Binding::Buildings: return "buildings";
        case Binding::Retailers: return "retailers";
    }
    return "?";
}

const diffusion::PenetrationSeries& DeviceSpec::series_for(EstimateKind kind) const {
    auto it = penetration.find(kind);
    if (it == penetration.end()) it = penetration.find(EstimateKind::Medium);
    if (it == penetration.end())
        throw ValidationError(id + ": no penetration series for estimate '" +
                              std::string(to_string(kind)) + "'");
    return it->second;
}

double device_daily_volume(const DeviceSpec& device, int year, EstimateKind estimate) {
    double total = 0;
    for (const auto& app : device.applications) {
        if (app.category == TrafficCategory::MachineLowActivity) continue;
        total += app.growth.value(year, estimate);
    }
    return total;
}

Scenario Scenario::slow() { return {"slow", EstimateKind::Low, {}, {}}; }
Scenario Scenario::rapid() { return {"rapid", EstimateKind::High, {}, {}}; }

EstimateKind Scenario::penetration_estimate(const std::string& device_id) const {
    auto it = device_overrides.find(device_id);
    return it == device_overrides.end() ? default_estimate : it->second;
}

EstimateKind Scenario::volume_estimate(const std::string& application_id) const {
    auto it = volume_overrides.find(application_id);
    return it == volume_overrides.end() ? default_estimate : it->second;
}

const HourlyProfile& UrbanProfiles::binding(Binding b) const {
    auto it = bindings.find(b);
    if (it == bindings.end())
        throw ValidationError(std::string("unresolved density binding '") + to_string(b) + "'");
    return it->second;
}

int ForecastResult::year_index(int year) const {
    if (!years.contains(year))
        throw ModelError("year " + std::to_string(year) + " outside forecast horizon");
    return year - years.first;
}

double ForecastResult::volume_at(int year, size_t dev, size_t app, int hour) const {
    size_t yi = static_cast<size_t>(year_index(year));
    return volume[(yi * apps_total + app_offset[dev] + app) * 24 + static_cast<size_t>(hour)];
}

double ForecastResult::density_at(int year, size_t dev, int hour) const {
    size_t yi = static_cast<size_t>(year_index(year));
    return density[(yi * device_ids.size() + dev) * 24 + static_cast<size_t>(hour)];
}

HourlyProfile ForecastResult::hourly_total(int year) const {
    HourlyProfile t;
    for (size_t d = 0; d < device_ids.size(); ++d)
        for (size_t a = 0; a < app_ids[d].size(); ++a)
            for (int h = 0; h < 24; ++h) t[h] += volume_at(year, d, a, h);
    return t;
}

double ForecastResult::daily_total(int year) const { return hourly_total(year).sum(); }

double ForecastResult::device_daily(int year, size_t dev) const {
    double s = 0;
    for (size_t a = 0; a < app_ids[dev].size(); ++a)
        for (int h = 0; h < 24; ++h) s += volume_at(year, dev, a, h);
    return s;
}

HourlyProfile ForecastResult::density_total(int year) const {
    HourlyProfile t;
    for (size_t d = 0; d < device_ids.size(); ++d)
        for (int h = 0; h < 24; ++h) t[h] += density_at(year, d, h);
    return t;
}

HourlyProfile ForecastResult::device_density_profile(int year, size_t dev) const {
    HourlyProfile t;
    for (int h = 0; h < 24; ++h) t[h] = density_at(year, dev, h);
    return t;
}

size_t ForecastResult::device_index(const std::string& id) const {
    for (size_t d = 0; d < device_ids.size(); ++d)
        if (device_ids[d] == id) return d;
    throw ModelError("unknown device '" + id + "'");
}

namespace {

// One (year, device) cell: fills the device's density row and its
// application volume rows. Cells are independent, so the parallel path
// writes the exact bytes the serial path writes.
void fill_cell(const DeviceSpec& dev, size_t di, int year, size_t yi, const Scenario& scenario,
               const UrbanProfiles& profiles, ForecastResult& r) {
    EstimateKind pen_kind = scenario.penetration_estimate(dev.id);
    double pen = dev.series_for(pen_kind).at(year);
    const HourlyProfile& u = profiles.binding(dev.density_binding);

    double* drow = &r.density[(yi * r.device_ids.size() + di) * 24];
    for (int h = 0; h < 24; ++h) drow[h] = pen * u[h];

    for (size_t a = 0; a < dev.applications.size(); ++a) {
        const ApplicationSpec& app = dev.applications[a];
        double* vrow = &r.volume[(yi * r.apps_total + r.app_offset[di] + a) * 24];
        if (app.category == TrafficCategory::MachineLowActivity) continue;  // stays zero
        EstimateKind vol_kind = scenario.volume_estimate(app.id);
        double v = app.growth.value(year, vol_kind);
        switch (app.activity.kind) {
            case volume::ActivityKind::UsageProfile: {
                auto it = profiles.usage_shares.find(app.activity.profile);
                if (it == profiles.usage_shares.end())
                    throw ValidationError(dev.id + "/" + app.id + ": unresolved usage profile '" +
                                          app.activity.profile + "'");
                const HourlyProfile& share = it->second;
                for (int h = 0; h < 24; ++h) vrow[h] = pen * u[h] * v * share[h];
                break;
            }
            case volume::ActivityKind::PerMovingHour:
                // v is GB per device-hour of movement
                for (int h = 0; h < 24; ++h) vrow[h] = pen * u[h] * v;
                break;
            case volume::ActivityKind::UniformWindow: {
                int n = app.activity.window_end - app.activity.window_start;
                for (int h = app.activity.window_start; h < app.activity.window_end; ++h) {
                    double basis = app.activity.fleet_density > 0 ? app.activity.fleet_density : u[h];
                    vrow[h] = pen * basis * v / n;
                }
                break;
            }
            case volume::ActivityKind::Uniform24h:
                for (int h = 0; h < 24; ++h) vrow[h] = pen * u[h] * v / 24.0;
                break;
        }
    }
}

} // namespace

ForecastResult forecast(const std::vector<DeviceSpec>& registry, const Scenario& scenario,
                        YearRange years, const UrbanProfiles& profiles, Execution mode) {
    years.validate();
    if (registry.empty()) throw ValidationError("forecast: empty device registry");

    ForecastResult r;
    r.years = years;
    r.scenario = scenario.name;
    size_t nd = registry.size();
    r.device_ids.reserve(nd);
    r.app_offset.assign(nd, 0);
    size_t off = 0;
    for (size_t d = 0; d < nd; ++d) {
        r.device_ids.push_back(registry[d].id);
        std::vector<std::string> ids;
        std::vector<TrafficCategory> cats;
        for (const auto& a : registry[d].applications) {
            ids.push_back(a.id);
            cats.push_back(a.category);
        }
        r.app_ids.push_back(std::move(ids));
        r.app_categories.push_back(std::move(cats));
        r.app_offset[d] = off;
        off += registry[d].applications.size();
    }
    r.apps_total = off;
    size_t ny = static_cast<size_t>(years.count());
    r.volume.assign(ny * r.apps_total * 24, 0.0);
    r.density.assign(ny * nd * 24, 0.0);

    long cells = static_cast<long>(ny * nd);
    if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long c = 0; c < cells; ++c) {
            size_t yi = static_cast<size_t>(c) / nd;
            size_t di = static_cast<size_t>(c) % nd;
            fill_cell(registry[di], di, years.first + static_cast<int>(yi), yi, scenario,
                      profiles, r);
        }
    } else {
        for (long c = 0; c < cells; ++c) {
            size_t yi = static_cast<size_t>(c) / nd;
            size_t di = static_cast<size_t>(c) % nd;
            fill_cell(registry[di], di, years.first + static_cast<int>(yi), yi, scenario,
                      profiles, r);
        }
    }
    return r;
}

HourlyProfile device_density(double penetration, const HourlyProfile& urban_density) {
    if (penetration < 0) throw ParameterError("device density: negative penetration");
    return penetration * urban_density;
}

CategoryRollup category_rollup(const ForecastResult& result, int year) {
    CategoryRollup roll;
    for (TrafficCategory c : {TrafficCategory::Human, TrafficCategory::MachineLowActivity,
                              TrafficCategory::MachineHighActivity, TrafficCategory::HighPriority})
        roll.totals[c] = 0;
    for (size_t d = 0; d < result.device_ids.size(); ++d)
        for (size_t a = 0; a < result.app_ids[d].size(); ++a) {
            double s = 0;
            for (int h = 0; h < 24; ++h) s += result.volume_at(year, d, a, h);
            roll.totals[result.app_categories[d][a]] += s;
        }
    for (const auto& [c, v] : roll.totals) roll.grand_total += v;
    for (const auto& [c, v] : roll.totals)
        roll.shares[c] = roll.grand_total > 0 ? v / roll.grand_total : 0.0;
    return roll;
}

PeakHour peak_hour(const ForecastResult& result, int year) {
    HourlyProfile t = result.hourly_total(year);
    PeakHour p;
    p.hour = t.argmax();
    p.volume = t[p.hour];
    double total = t.sum();
    p.share = total > 0 ? p.volume / total : 0.0;
    return p;
}

double cagr(double v_start, double v_end, int years) {
    if (v_start <= 0) throw ParameterError("cagr: start value must be positive");
    if (years < 1) throw ParameterError("cagr: need at least one year");
    return std::pow(v_end / v_start, 1.0 / years) - 1.0;
}

MedianDensity median_density(const ForecastResult& result, int year) {
    MedianDensity m;
    m.total = result.density_total(year).median();
    for (size_t d = 0; d < result.device_ids.size(); ++d)
        m.per_device[result.device_ids[d]] = result.device_density_profile(year, d).median();
    return m;
}

} // namespace traffic::engine
