#pragma once

#include "forecast/types.hpp"

namespace traffic::density {

/// Static census and geography facts of the study area.
struct AreaProfile {
    double area_km2 = 0;
    double population_density = 0;          // 1/km2
    double resident_employed_density = 0;   // 1/km2
    double workplace_density = 0;           // 1/km2
    double service_workplace_fraction = 0;  // dimensionless
    double retailer_density = 0;            // 1/km2
    double building_density = 0;            // 1/km2

    void validate() const;
};

/// Hourly cordon crossings (counts per hour, both directions).
struct CrossingCounts {
    HourlyProfile inbound;
    HourlyProfile outbound;

    /// People return home: daily totals must balance within tolerance
    /// (a fraction of total inbound).
    void validate(double balance_tolerance = 0.01) const;
};

struct TransportParams {
    double car_mode_share = 0;
    double car_occupancy = 0;
    double car_ownership_per_inhabitant = 0;
    double bus_to_car_ratio = 0;
    double bikes_per_inhabitant = 0;
    double bike_mode_share = 0;

    void validate() const;
};

/// Normalized cumulative net inflow over 0-23h; min 0, max 1.
HourlyProfile included_people_pattern(const CrossingCounts& counts);

struct ActivePopulation {
    HourlyProfile active;       // 1/km2
    HourlyProfile working;      // 1/km2
    HourlyProfile non_working;  // 1/km2
};

ActivePopulation active_population(const AreaProfile& area, const HourlyProfile& pattern);

/// Absolute difference of the active profile between consecutive hours.
HourlyProfile moving_population(const HourlyProfile& active);

/// Commuter-car inflow fills 0-14h along the inbound pattern and drains over
/// 14-23h along the outbound pattern; the moving density is the hourly change
/// of the resulting car stock.
HourlyProfile moving_car_density(const AreaProfile& area, const CrossingCounts& counts,
                                 const TransportParams& params, double resident_cars);

HourlyProfile moving_bus_density(const HourlyProfile& moving_cars, double ratio);

/// Same construction as cars (occupancy 1) plus round trips of residents
/// employed inside the area.
HourlyProfile moving_bike_density(const AreaProfile& area, const CrossingCounts& counts,
                                  const TransportParams& params);

} // namespace traffic::density
