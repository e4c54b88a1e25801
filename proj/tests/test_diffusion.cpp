#include <doctest.h>

#include <cmath>
#include <random>

#include "forecast/diffusion.hpp"

using namespace traffic;
using namespace traffic::diffusion;

namespace {
const BassParams kSyntheticBass{0.03, 0.40, 1.0, 2000};

std::map<int, double> sample_series(const BassParams& b, int first, int last) {
    std::map<int, double> out;
    for (int y = first; y <= last; ++y) out[y] = bass_value(b, y);
    return out;
}
} // namespace

TEST_CASE("bass projection saturates at the carrying capacity") {
    BassParams b{0.05, 0.3, 2.5, 2010};
    CHECK(bass_value(b, 2010) == doctest::Approx(0.0));
    CHECK(bass_value(b, 2500) == doctest::Approx(2.5).epsilon(1e-9));
    for (int y = 2010; y < 2060; ++y) {
        CHECK(bass_value(b, y) < b.m);
        CHECK(bass_value(b, y + 1) > bass_value(b, y));  // dF/dt > 0
    }
}

TEST_CASE("bass projection rejects bad parameters") {
    CHECK_THROWS_AS(bass_project({0.0, 0.1, 1.0, 2000}, {2000, 2010}), ParameterError);
    CHECK_THROWS_AS(bass_project({0.05, 0.1, -1.0, 2000}, {2000, 2010}), ParameterError);
    CHECK_THROWS_AS(bass_project({0.05, 0.1, 1.0, 2000}, {2010, 2000}), std::invalid_argument);
}

TEST_CASE("smartphone-style curve stays anchored across the horizon") {
    // fixture parameters: 1.48 in 2018, near-saturation growth to ~1.66 by 2030
    BassParams b{0.1908116312339922, 0.01, 1.6815454903195162, 2007.1680811189308};
    auto series = bass_project(b, {2018, 2030});
    CHECK(series.at(2018) == doctest::Approx(1.48).epsilon(0.007));
    CHECK(std::abs(series.at(2030) - 1.66) < 0.03);
    CHECK(series.non_decreasing());
}

TEST_CASE("bass fit round-trips a noiseless synthetic series") {
    auto history = sample_series(kSyntheticBass, 2000, 2020);
    auto fit = bass_fit(history);
    CHECK(std::abs(fit.params.p - 0.03) < 1e-3);
    CHECK(std::abs(fit.params.q - 0.40) < 1e-3);
    CHECK(std::abs(fit.params.m - 1.0) < 1e-3);
}

TEST_CASE("bass fit survives mild multiplicative noise") {
    auto history = sample_series(kSyntheticBass, 2000, 2020);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> du(-0.01, 0.01);
    for (auto& [y, v] : history) v *= 1.0 + du(rng);
    auto fit = bass_fit(history);
    CHECK(std::abs(fit.params.p - 0.03) / 0.03 < 0.05);
    CHECK(std::abs(fit.params.q - 0.40) / 0.40 < 0.05);
    CHECK(std::abs(fit.params.m - 1.0) < 0.05);
}

TEST_CASE("bass fit rejects unusable histories") {
    CHECK_THROWS_AS(bass_fit({{2000, 0.1}, {2001, 0.2}, {2002, 0.3}}), InsufficientDataError);
    std::map<int, double> flat;
    for (int y = 2000; y <= 2010; ++y) flat[y] = 0.7;
    CHECK_THROWS_AS(bass_fit(flat), DegenerateInputError);
}

TEST_CASE("replacement model reproduces the connected-car development") {
    StockModel cars;
    cars.annual_sales = YearSeries::constant_of(55000.0);
    cars.start_year = 2018;
    cars.lifetime_years = 0;  // no decommissioning inside the horizon
    cars.body_kind = StockModel::BodyKind::StockLinear;
    cars.initial_stock = 710457.0;
    cars.annual_net_growth = 7836.0;
    cars.body_base_year = 2018;

    auto high = replacement_penetration(cars, {2018, 2030}, EstimateKind::High);
    CHECK(high.at(2030) == doctest::Approx(0.89).epsilon(0.006));

    cars.annual_sales = YearSeries::constant_of(50000.0);
    auto low = replacement_penetration(cars, {2018, 2030}, EstimateKind::Low);
    CHECK(low.at(2018) == doctest::Approx(0.07).epsilon(0.07));
    CHECK(std::abs(low.at(2025) - 0.52) < 0.01);
    CHECK(std::abs(low.at(2030) - 0.81) < 0.01);

    // brute-force accumulation oracle for the unbounded-lifetime model
    for (int y = 2018; y <= 2030; ++y) {
        double conn = 0;
        for (int s = 2018; s <= y; ++s) conn += 50000.0;
        double stock = 710457.0 + 7836.0 * (y - 2018);
        CHECK(low.at(y) == doctest::Approx(conn / stock));
    }
}

TEST_CASE("replacement model with zero connected share adopts nothing") {
    StockModel m;
    m.annual_sales = YearSeries::constant_of(10000.0);
    m.connected_share = YearSeries::constant_of(0.0);
    m.start_year = 2018;
    m.body_kind = StockModel::BodyKind::Population;
    m.body_size = 100000.0;
    auto series = replacement_penetration(m, {2018, 2030});
    for (const auto& [y, v] : series.values) CHECK(v == 0.0);
}

TEST_CASE("replacement model retires units past their lifetime") {
    StockModel m;
    m.annual_sales = YearSeries::constant_of(100.0);
    m.start_year = 2020;
    m.lifetime_years = 2;
    m.body_kind = StockModel::BodyKind::Population;
    m.body_size = 1000.0;
    auto series = replacement_penetration(m, {2019, 2025});
    CHECK(series.at(2019) == 0.0);
    CHECK(series.at(2020) == doctest::Approx(0.1));
    CHECK(series.at(2021) == doctest::Approx(0.2));
    CHECK(series.at(2025) == doctest::Approx(0.2));  // steady state: two cohorts alive
}

TEST_CASE("replacement model rejects a non-positive body") {
    StockModel m;
    m.annual_sales = YearSeries::constant_of(10.0);
    m.start_year = 2018;
    m.body_kind = StockModel::BodyKind::StockLinear;
    m.initial_stock = 100.0;
    m.annual_net_growth = -60.0;
    m.body_base_year = 2018;
    CHECK_THROWS_AS(replacement_penetration(m, {2018, 2025}), ModelError);
}

TEST_CASE("coverage rollout follows the deployment schedule and cap") {
    auto cameras = coverage_rollout({128.0, 0.10, 2023}, {2018, 2030});
    CHECK(cameras.at(2022) == 0.0);
    CHECK(std::abs(cameras.at(2030) - 102.0) <= 1.0);

    auto sensors = coverage_rollout({1629.0, 0.20, 2023}, {2018, 2030});
    CHECK(std::abs(sensors.at(2023) - 325.0) <= 1.0);
    for (int y = 2027; y <= 2030; ++y) CHECK(sensors.at(y) == doctest::Approx(1629.0));

    auto idle = coverage_rollout({500.0, 0.0, 2020}, {2018, 2030});
    for (const auto& [y, v] : idle.values) CHECK(v == 0.0);

    // piecewise linear then flat, never above the cap
    double prev = -1;
    for (const auto& [y, v] : sensors.values) {
        CHECK(v <= 1629.0);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(coverage_rollout({100.0, 1.5, 2020}, {2018, 2030}), ParameterError);
}

TEST_CASE("linear rollout interpolates and clamps") {
    // smart meters: electricity connection plus a five-year water-meter ramp
    auto meters = linear_rollout(1.0, 2.0, 2022, 5, {2018, 2030});
    CHECK(meters.at(2019) == doctest::Approx(1.0));
    CHECK(meters.at(2027) == doctest::Approx(2.0));
    CHECK(meters.at(2030) == doctest::Approx(2.0));

    auto pos = linear_rollout(4.0, 16.0, 2020, 10, {2018, 2030});
    CHECK(pos.at(2021) == doctest::Approx(5.2));
    CHECK(pos.at(2030) == doctest::Approx(16.0));

    auto fixed = linear_rollout(3.0, 3.0, 2020, 4, {2018, 2030});
    for (const auto& [y, v] : fixed.values) CHECK(v == doctest::Approx(3.0));

    CHECK_THROWS_AS(linear_rollout(1.0, 2.0, 2020, 0, {2018, 2030}), ParameterError);
}

TEST_CASE("year series variants evaluate per year") {
    auto geo = YearSeries::geometric(13500.0, 2023, 0.5, 270000.0);
    CHECK(geo.at(2022) == 0.0);
    CHECK(geo.at(2023) == doctest::Approx(13500.0));
    CHECK(geo.at(2024) == doctest::Approx(20250.0));
    CHECK(geo.at(2040) == doctest::Approx(270000.0));  // capped

    auto tab = YearSeries::table_of({{2022, 30.0}, {2023, 60.0}});
    CHECK(tab.at(2021) == 0.0);
    CHECK(tab.at(2023) == 60.0);
}
