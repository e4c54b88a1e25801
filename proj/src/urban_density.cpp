#include "forecast/urban_density.hpp"

#include <cmath>

namespace traffic::density {

void AreaProfile::validate() const {
    std::vector<std::string> bad;
    if (!(area_km2 > 0)) bad.push_back("area_km2 must be positive");
    for (auto [v, n] : {std::pair{population_density, "population_density"},
                        {resident_employed_density, "resident_employed_density"},
                        {workplace_density, "workplace_density"},
                        {retailer_density, "retailer_density"},
                        {building_density, "building_density"}})
        if (v < 0) bad.push_back(std::string(n) + " must be non-negative");
    if (resident_employed_density > population_density)
        bad.push_back("resident_employed_density exceeds population_density");
    if (service_workplace_fraction < 0 || service_workplace_fraction > 1)
        bad.push_back("service_workplace_fraction must be in [0,1]");
    if (!bad.empty()) throw ValidationError(bad);
}

void CrossingCounts::validate(double balance_tolerance) const {
    if (!inbound.non_negative() || !outbound.non_negative())
        throw ValidationError("crossing counts must be non-negative");
    double in = inbound.sum(), out = outbound.sum();
    if (std::abs(in - out) > balance_tolerance * std::max(in, 1.0))
        throw ValidationError("crossing counts do not balance over the day");
}

void TransportParams::validate() const {
    std::vector<std::string> bad;
    if (car_mode_share < 0 || car_mode_share > 1) bad.push_back("car_mode_share must be in [0,1]");
    if (bike_mode_share < 0 || bike_mode_share > 1) bad.push_back("bike_mode_share must be in [0,1]");
    if (!(car_occupancy > 0)) bad.push_back("car_occupancy must be positive");
    if (car_ownership_per_inhabitant < 0) bad.push_back("car_ownership_per_inhabitant must be non-negative");
    if (bus_to_car_ratio < 0) bad.push_back("bus_to_car_ratio must be non-negative");
    if (bikes_per_inhabitant < 0) bad.push_back("bikes_per_inhabitant must be non-negative");
    if (!bad.empty()) throw ValidationError(bad);
}

HourlyProfile included_people_pattern(const CrossingCounts& counts) {
    HourlyProfile cum;
    double s = 0;
    for (int h = 0; h < 24; ++h) {
        s += counts.inbound[h] - counts.outbound[h];
        cum[h] = s;
    }
    double lo = cum.min(), hi = cum.max();
    if (hi - lo <= 0)
        throw DegenerateInputError("included-people pattern: net flow is identically zero");
    HourlyProfile p;
    for (int h = 0; h < 24; ++h) p[h] = (cum[h] - lo) / (hi - lo);
    return p;
}

ActivePopulation active_population(const AreaProfile& area, const HourlyProfile& pattern) {
    ActivePopulation out;
    for (int h = 0; h < 24; ++h) {
        double f = pattern[h];
        out.working[h] = area.workplace_density * area.service_workplace_fraction * f;
        out.non_working[h] = area.population_density - area.resident_employed_density * f;
        if (out.non_working[h] < 0)
            throw ModelError("active population: non-working density negative at hour " +
                             std::to_string(h) + " (inconsistent area facts)");
        out.active[h] = out.working[h] + out.non_working[h];
    }
    return out;
}

HourlyProfile moving_population(const HourlyProfile& active) {
    HourlyProfile out;
    for (int h = 0; h < 24; ++h) out[h] = std::abs(active[h] - active[(h + 23) % 24]);
    return out;
}

namespace {

// inflow weights over [0,14), outflow weights over [14,24)
struct FlowWindows {
    HourlyProfile in_w, out_w;
};

FlowWindows window_weights(const CrossingCounts& counts) {
    FlowWindows w;
    double si = 0, so = 0;
    for (int h = 0; h < 14; ++h) si += counts.inbound[h];
    for (int h = 14; h < 24; ++h) so += counts.outbound[h];
    if (si <= 0 || so <= 0)
        throw DegenerateInputError("crossing counts: empty commute window");
    for (int h = 0; h < 14; ++h) w.in_w[h] = counts.inbound[h] / si;
    for (int h = 14; h < 24; ++h) w.out_w[h] = counts.outbound[h] / so;
    return w;
}

// |hourly change| of a stock that fills along in_w and drains along out_w
HourlyProfile stock_movement(double baseline, double commuters, const FlowWindows& w) {
    HourlyProfile stock;
    double s = baseline;
    for (int h = 0; h < 24; ++h) {
        s += commuters * (w.in_w[h] - w.out_w[h]);
        if (s < -1e-9 * std::max(1.0, baseline))
            throw ModelError("vehicle stock negative at hour " + std::to_string(h));
        stock[h] = s;
    }
    HourlyProfile moving;
    for (int h = 0; h < 24; ++h) moving[h] = std::abs(stock[h] - stock[(h + 23) % 24]);
    return moving;
}

} // namespace

HourlyProfile moving_car_density(const AreaProfile& area, const CrossingCounts& counts,
                                 const TransportParams& params, double resident_cars) {
    // The arriving/leaving flow corresponds to the workforce deficit,
    // workplaces minus employed residents.
    double deficit = area.workplace_density - area.resident_employed_density;
    if (deficit < 0)
        throw ModelError("moving cars: workforce deficit is negative (inconsistent parameters)");
    double commuter_cars = deficit * params.car_mode_share / params.car_occupancy;
    if (resident_cars < 0) throw ModelError("moving cars: negative resident car stock");
    return stock_movement(resident_cars, commuter_cars, window_weights(counts));
}

HourlyProfile moving_bus_density(const HourlyProfile& moving_cars, double ratio) {
    if (ratio < 0) throw ParameterError("bus ratio must be non-negative");
    return ratio * moving_cars;
}

HourlyProfile moving_bike_density(const AreaProfile& area, const CrossingCounts& counts,
                                  const TransportParams& params) {
    double deficit = area.workplace_density - area.resident_employed_density;
    if (deficit < 0)
        throw ModelError("moving bikes: workforce deficit is negative (inconsistent parameters)");
    auto w = window_weights(counts);
    double commuter_bikes = deficit * params.bike_mode_share;  // occupancy 1
    double bike_stock = params.bikes_per_inhabitant * area.population_density;
    HourlyProfile moving = stock_movement(bike_stock, commuter_bikes, w);
    // residents employed inside the area ride the same patterns but do not
    // change the cordon stock
    double internal = area.resident_employed_density * params.bike_mode_share;
    for (int h = 0; h < 24; ++h) moving[h] += internal * (w.in_w[h] + w.out_w[h]);
    return moving;
}

} // namespace traffic::density
