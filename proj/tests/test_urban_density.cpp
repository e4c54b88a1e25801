#include <doctest.h>

#include <cmath>

#include "forecast/urban_density.hpp"

using namespace traffic;
using namespace traffic::density;

namespace {

AreaProfile helsinki_area() {
    AreaProfile a;
    a.area_km2 = 2.35;
    a.population_density = 7770.0;
    a.resident_employed_density = 4262.0;
    a.workplace_density = 19785.0;
    a.service_workplace_fraction = 0.94;
    a.retailer_density = 269.5;
    a.building_density = 269.5;
    return a;
}

TransportParams helsinki_transport() {
    TransportParams t;
    t.car_mode_share = 0.27;
    t.car_occupancy = 1.3;
    t.car_ownership_per_inhabitant = 0.329;
    t.bus_to_car_ratio = 0.08;
    t.bikes_per_inhabitant = 0.6;
    t.bike_mode_share = 0.10;
    return t;
}

// morning inflow 6-13h, evening outflow 14-23h; balances exactly
CrossingCounts synthetic_counts() {
    CrossingCounts c;
    const double in_w[] = {0.05, 0.17, 0.33, 0.25, 0.13, 0.045, 0.015, 0.01};
    const double out_w[] = {0.005, 0.045, 0.14, 0.18, 0.16, 0.135, 0.105, 0.085, 0.07, 0.075};
    for (int i = 0; i < 8; ++i) c.inbound[6 + i] = 343000.0 * in_w[i];
    for (int i = 0; i < 10; ++i) c.outbound[14 + i] = 343000.0 * out_w[i];
    return c;
}

} // namespace

TEST_CASE("included-people pattern follows cumulative net inflow") {
    CrossingCounts c;
    for (int h = 6; h < 10; ++h) c.inbound[h] = 100.0;
    for (int h = 14; h < 18; ++h) c.outbound[h] = 100.0;
    auto p = included_people_pattern(c);
    for (int h = 0; h < 6; ++h) CHECK(p[h] == 0.0);
    CHECK(p[6] == doctest::Approx(0.25));
    CHECK(p[7] == doctest::Approx(0.50));
    CHECK(p[8] == doctest::Approx(0.75));
    for (int h = 9; h < 14; ++h) CHECK(p[h] == doctest::Approx(1.0));
    CHECK(p[14] == doctest::Approx(0.75));
    CHECK(p[16] == doctest::Approx(0.25));
    for (int h = 17; h < 24; ++h) CHECK(p[h] == 0.0);
}

TEST_CASE("included-people pattern is normalized and scale invariant") {
    auto counts = synthetic_counts();
    auto p = included_people_pattern(counts);
    CHECK(p.min() == 0.0);
    CHECK(p.max() == 1.0);

    CrossingCounts scaled = counts;
    for (int h = 0; h < 24; ++h) {
        scaled.inbound[h] *= 3.7;
        scaled.outbound[h] *= 3.7;
    }
    auto p2 = included_people_pattern(scaled);
    for (int h = 0; h < 24; ++h) CHECK(p2[h] == doctest::Approx(p[h]).epsilon(1e-12));
}

TEST_CASE("included-people pattern rejects zero net flow") {
    CrossingCounts c;
    for (int h = 0; h < 24; ++h) c.inbound[h] = c.outbound[h] = 50.0;
    CHECK_THROWS_AS(included_people_pattern(c), DegenerateInputError);
}

TEST_CASE("crossing counts must balance over the day") {
    CrossingCounts c;
    c.inbound[8] = 1000.0;
    c.outbound[16] = 800.0;
    CHECK_THROWS_AS(c.validate(0.01), ValidationError);
    c.outbound[16] = 995.0;
    CHECK_NOTHROW(c.validate(0.01));
}

TEST_CASE("active population interpolates between night and workday") {
    auto area = helsinki_area();
    auto night = active_population(area, HourlyProfile::constant(0.0));
    for (int h = 0; h < 24; ++h) CHECK(night.active[h] == doctest::Approx(7770.0));

    auto day = active_population(area, HourlyProfile::constant(1.0));
    // workplace inflow minus commuted-out residents on top of the census base
    CHECK(day.active[0] == doctest::Approx(19785.0 * 0.94 + 7770.0 - 4262.0).epsilon(1e-12));
    CHECK(std::abs(day.active[0] - 22106.0) < 1.0);

    AreaProfile rural = area;
    rural.workplace_density = 0.0;
    auto out = active_population(rural, HourlyProfile::constant(0.5));
    for (int h = 0; h < 24; ++h)
        CHECK(out.active[h] == doctest::Approx(7770.0 - 4262.0 * 0.5));
}

TEST_CASE("active population is affine in the pattern") {
    auto area = helsinki_area();
    HourlyProfile p1, p2;
    for (int h = 0; h < 24; ++h) {
        p1[h] = h / 24.0;
        p2[h] = h / 48.0;
    }
    auto a1 = active_population(area, p1);
    auto a2 = active_population(area, p2);
    auto a0 = active_population(area, HourlyProfile::constant(0.0));
    for (int h = 0; h < 24; ++h)
        CHECK(a1.active[h] - a0.active[h] == doctest::Approx(2.0 * (a2.active[h] - a0.active[h])));
}

TEST_CASE("inconsistent census figures are an error, not a clamp") {
    AreaProfile bad = helsinki_area();
    bad.resident_employed_density = 9000.0;  // exceeds the population
    CHECK_THROWS_AS(active_population(bad, HourlyProfile::constant(1.0)), ModelError);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("moving population is the hourly change of the active profile") {
    CHECK(moving_population(HourlyProfile::constant(5.0)).sum() == 0.0);

    HourlyProfile act;
    act[1] = 10.0;
    act[2] = 10.0;
    auto mov = moving_population(act);
    CHECK(mov[0] == 0.0);
    CHECK(mov[1] == 10.0);
    CHECK(mov[2] == 0.0);
    CHECK(mov[3] == 10.0);
    for (int h = 4; h < 24; ++h) CHECK(mov[h] == 0.0);

    // cycle closure: signed changes telescope to zero over the day
    auto area = helsinki_area();
    auto p = included_people_pattern(synthetic_counts());
    auto a = active_population(area, p);
    double signed_sum = 0;
    for (int h = 0; h < 24; ++h) signed_sum += a.active[h] - a.active[(h + 23) % 24];
    CHECK(signed_sum == doctest::Approx(0.0).epsilon(1e-9));

    // invariant under adding a constant
    HourlyProfile shifted = a.active;
    for (int h = 0; h < 24; ++h) shifted[h] += 123.0;
    auto m1 = moving_population(a.active);
    auto m2 = moving_population(shifted);
    for (int h = 0; h < 24; ++h) CHECK(m1[h] == doctest::Approx(m2[h]));
}

TEST_CASE("moving car density matches the published average level") {
    auto area = helsinki_area();
    auto counts = synthetic_counts();
    auto params = helsinki_transport();
    double resident_cars = params.car_ownership_per_inhabitant * area.population_density;
    auto mc = moving_car_density(area, counts, params, resident_cars);
    CHECK(mc.non_negative());
    double mean = mc.sum() / 24.0;
    CHECK(std::abs(mean - 273.0) / 273.0 < 0.05);
    // cycle closure: the stock is back at its baseline overnight
    CHECK(mc[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("moving car density scales with mode share and occupancy") {
    auto area = helsinki_area();
    auto counts = synthetic_counts();
    auto params = helsinki_transport();
    double resident_cars = params.car_ownership_per_inhabitant * area.population_density;

    auto none = params;
    none.car_mode_share = 0.0;
    auto quiet = moving_car_density(area, counts, none, resident_cars);
    for (int h = 0; h < 24; ++h) CHECK(quiet[h] == 0.0);

    auto full = moving_car_density(area, counts, params, resident_cars);
    auto doubled = params;
    doubled.car_occupancy *= 2.0;
    auto half = moving_car_density(area, counts, doubled, resident_cars);
    for (int h = 0; h < 24; ++h) CHECK(half[h] == doctest::Approx(0.5 * full[h]));
}

TEST_CASE("moving bus density is a fixed share of moving cars") {
    HourlyProfile mc;
    for (int h = 0; h < 24; ++h) mc[h] = h * 1.5;
    auto buses = moving_bus_density(mc, 0.08);
    for (int h = 0; h < 24; ++h) CHECK(buses[h] == doctest::Approx(0.08 * mc[h]));
    auto zero = moving_bus_density(mc, 0.0);
    CHECK(zero.sum() == 0.0);
    auto same = moving_bus_density(mc, 1.0);
    for (int h = 0; h < 24; ++h) CHECK(same[h] == mc[h]);
}

TEST_CASE("moving bike density shows commute lobes and ignores ownership level") {
    auto area = helsinki_area();
    auto counts = synthetic_counts();
    auto params = helsinki_transport();

    auto none = params;
    none.bike_mode_share = 0.0;
    CHECK(moving_bike_density(area, counts, none).sum() == 0.0);

    auto bikes = moving_bike_density(area, counts, params);
    CHECK(bikes.non_negative());
    int morning = 0, evening = 14;
    for (int h = 0; h < 14; ++h)
        if (bikes[h] > bikes[morning]) morning = h;
    for (int h = 14; h < 24; ++h)
        if (bikes[h] > bikes[evening]) evening = h;
    CHECK(morning >= 7);
    CHECK(morning <= 9);
    CHECK(evening >= 15);
    CHECK(evening <= 18);

    auto fewer = params;
    fewer.bikes_per_inhabitant *= 0.5;  // stock level, not flow
    auto bikes2 = moving_bike_density(area, counts, fewer);
    for (int h = 0; h < 24; ++h) CHECK(bikes2[h] == doctest::Approx(bikes[h]));
}
