#include <doctest.h>

#include <cmath>

#include "forecast/volume_models.hpp"

using namespace traffic;
using namespace traffic::volume;

TEST_CASE("exponential volume compounds from its base year") {
    CHECK(exponential_volume(0.294, 2018, 0.23, 2019) == doctest::Approx(0.36162));
    CHECK(exponential_volume(0.5, 2020, 0.0, 2030) == doctest::Approx(0.5));
    CHECK(exponential_volume(0.1, 2019, 0.28, 2030) == doctest::Approx(1.513).epsilon(5e-4));
    // exact year-on-year ratio, no drift
    for (int y = 2019; y < 2060; ++y) {
        double r = exponential_volume(0.294, 2018, 0.23, y + 1) /
                   exponential_volume(0.294, 2018, 0.23, y);
        CHECK(r == doctest::Approx(1.23).epsilon(1e-14));
    }
    CHECK_THROWS_AS(exponential_volume(-1.0, 2018, 0.2, 2019), ParameterError);
    CHECK_THROWS_AS(exponential_volume(1.0, 2018, -1.2, 2019), ParameterError);
}

TEST_CASE("ceiling-limited linear volume saturates") {
    CHECK(ceiling_linear_volume(0.072, 2019, 0.362, 2030, 2030) == doctest::Approx(0.362));
    CHECK(ceiling_linear_volume(0.072, 2019, 0.362, 2030, 2019) == doctest::Approx(0.072));
    CHECK(ceiling_linear_volume(0.072, 2019, 0.362, 2030, 2024) ==
          doctest::Approx(0.072 + (0.362 - 0.072) * 5.0 / 11.0));
    double prev = 0;
    for (int y = 2015; y <= 2040; ++y) {
        double v = ceiling_linear_volume(0.072, 2019, 0.362, 2030, y);
        CHECK(v <= 0.362);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(ceiling_linear_volume(1.0, 2019, 0.5, 2030, 2020), ParameterError);
    CHECK_THROWS_AS(ceiling_linear_volume(0.1, 2030, 0.5, 2020, 2025), ParameterError);
}

TEST_CASE("camera volume grows with streamed hours") {
    CHECK(camera_daily_volume(2030, 1.0, 4.5) == doctest::Approx(67.5));
    CHECK(camera_daily_volume(2030, 4.0, 4.5) == doctest::Approx(175.5));
    CHECK(camera_daily_volume(2022, 1.0, 4.5) == 0.0);  // pre-deployment
    // published per-camera quotients
    CHECK(std::abs(camera_daily_volume(2030, 1.0, 4.5) - 6912.0 / 102.0) / (6912.0 / 102.0) < 0.01);
    CHECK(std::abs(camera_daily_volume(2030, 4.0, 4.5) - 35942.0 / 205.0) / (35942.0 / 205.0) <
          0.01);
    // hours may exceed 24 under heavy analytics
    CHECK(camera_daily_volume(2030, 4.0, 4.5) / 4.5 == doctest::Approx(39.0));
}

TEST_CASE("constant volume validates its input") {
    CHECK(constant_volume(5.0) == 5.0);
    CHECK(constant_volume(0.0) == 0.0);
    CHECK_THROWS_AS(constant_volume(-1.0), ValidationError);
}

TEST_CASE("growth spec holds its base before the base year") {
    GrowthSpec g;
    g.kind = GrowthKind::Exponential;
    g.base = 0.1;
    g.base_year = 2019;
    g.cagr_low = 0.244;
    g.cagr_high = 0.300;
    CHECK(g.value(2018, EstimateKind::Low) == doctest::Approx(0.1));
    CHECK(g.value(2018, EstimateKind::High) == doctest::Approx(0.1));
    CHECK(g.value(2020, EstimateKind::High) == doctest::Approx(0.13));
    for (int y = 2015; y <= 2035; ++y)
        CHECK(g.value(y, EstimateKind::Low) <= g.value(y, EstimateKind::High));
}

TEST_CASE("growth spec rejects inverted bounds") {
    GrowthSpec g;
    g.kind = GrowthKind::Exponential;
    g.base = 0.1;
    g.base_year = 2019;
    g.cagr_low = 0.3;
    g.cagr_high = 0.2;
    CHECK_THROWS_AS(g.validate("app"), ValidationError);

    GrowthSpec c;
    c.kind = GrowthKind::CeilingLinear;
    c.base = 0.1;
    c.base_year = 2019;
    c.ceiling_year = 2030;
    c.ceiling_low = 0.9;
    c.ceiling_high = 0.5;
    CHECK_THROWS_AS(c.validate("app"), ValidationError);
}

TEST_CASE("hourly allocation spreads and conserves the daily volume") {
    std::map<std::string, HourlyProfile> profiles;

    ActivitySpec flat;
    flat.kind = ActivityKind::Uniform24h;
    auto a = allocate_hourly(24.0, flat, profiles);
    for (int h = 0; h < 24; ++h) CHECK(a[h] == doctest::Approx(1.0));

    ActivitySpec window;
    window.kind = ActivityKind::UniformWindow;
    window.window_start = 8;
    window.window_end = 18;
    auto w = allocate_hourly(5.0, window, profiles);
    for (int h = 0; h < 24; ++h) CHECK(w[h] == doctest::Approx(h >= 8 && h < 18 ? 0.5 : 0.0));

    HourlyProfile share;
    double sum = 0;
    for (int h = 0; h < 24; ++h) sum += (share[h] = 1.0 + ((h * 7) % 5));
    for (int h = 0; h < 24; ++h) share[h] /= sum;
    profiles["evening"] = share;
    ActivitySpec usage;
    usage.kind = ActivityKind::UsageProfile;
    usage.profile = "evening";
    for (double v : {0.01, 3.7, 240.0}) {
        CHECK(allocate_hourly(v, usage, profiles).sum() == doctest::Approx(v).epsilon(1e-9));
        CHECK(allocate_hourly(v, window, profiles).sum() == doctest::Approx(v).epsilon(1e-9));
        CHECK(allocate_hourly(v, flat, profiles).sum() == doctest::Approx(v).epsilon(1e-9));
    }
}

TEST_CASE("hourly allocation rejects unknown or unnormalized profiles") {
    std::map<std::string, HourlyProfile> profiles;
    ActivitySpec usage;
    usage.kind = ActivityKind::UsageProfile;
    usage.profile = "missing";
    CHECK_THROWS_AS(allocate_hourly(1.0, usage, profiles), ValidationError);

    profiles["missing"] = HourlyProfile::constant(0.1);  // sums to 2.4
    CHECK_THROWS_AS(allocate_hourly(1.0, usage, profiles), ValidationError);
}
