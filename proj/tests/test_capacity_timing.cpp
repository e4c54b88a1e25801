#include <doctest.h>

#include <cmath>

#include "forecast/capacity_timing.hpp"

using namespace traffic;
using namespace traffic::capacity;

namespace {

// published-style peak trajectory: 678 GB/km2 in 2019 growing at 26%/year
std::map<int, double> geometric_peaks(double base, double growth) {
    std::map<int, double> s;
    for (int y = 2019; y <= 2030; ++y) s[y] = base * std::pow(1.0 + growth, y - 2019);
    return s;
}

} // namespace

TEST_CASE("crossing year is the first year at or above the threshold") {
    auto peaks = geometric_peaks(678.0, 0.26);
    CHECK(capacity_crossing_year(peaks, 2019, {"macro", 4.0}) == 2025);
    CHECK(capacity_crossing_year(peaks, 2019, {"refarm", 10.0}) == 2029);
    CHECK(capacity_crossing_year(peaks, 2019, {"dream", 100.0}) == std::nullopt);
    CHECK(capacity_crossing_year(peaks, 2019, {"now", 1.0}) == 2019);
}

TEST_CASE("crossing year validates its inputs") {
    auto peaks = geometric_peaks(678.0, 0.26);
    CHECK_THROWS_AS(capacity_crossing_year(peaks, 1999, {"macro", 4.0}), ParameterError);
    CHECK_THROWS_AS(capacity_crossing_year(peaks, 2019, {"macro", 0.0}), ParameterError);
}

TEST_CASE("crossing year is monotone in multiplier and demand") {
    auto slow = geometric_peaks(678.0, 0.26);
    auto rapid = geometric_peaks(678.0, 0.33);
    int prev = 2019;
    for (double m : {1.0, 2.0, 4.0, 7.0, 10.0}) {
        auto y = capacity_crossing_year(slow, 2019, {"x", m});
        REQUIRE(y.has_value());
        CHECK(*y >= prev);
        prev = *y;
        auto yr = capacity_crossing_year(rapid, 2019, {"x", m});
        REQUIRE(yr.has_value());
        CHECK(*yr <= *y);  // rapid peaks cross no later
    }
}

TEST_CASE("sweep covers the assumption-scenario cross product sorted by multiplier") {
    std::map<std::string, std::map<int, double>> peaks{
        {"slow", geometric_peaks(678.0, 0.26)}, {"rapid", geometric_peaks(678.0, 0.33)}};
    auto report = sweep(peaks, 2019,
                        {{"refarm", 10.0}, {"macro", 4.0}, {"midband", 7.0}});
    REQUIRE(report.rows.size() == 6);
    CHECK(report.rows[0].multiplier == 4.0);
    CHECK(report.rows[2].multiplier == 7.0);
    CHECK(report.rows[4].multiplier == 10.0);
    for (const auto& row : report.rows) {
        if (row.scenario == "slow" && row.multiplier == 4.0) CHECK(row.year == 2025);
        if (row.scenario == "slow" && row.multiplier == 7.0) {
            REQUIRE(row.year.has_value());
            CHECK(std::abs(*row.year - 2028) <= 1);
        }
        if (row.scenario == "slow" && row.multiplier == 10.0) CHECK(row.year == 2029);
    }

    auto single = sweep({{"slow", geometric_peaks(678.0, 0.26)}}, 2019, {{"macro", 4.0}});
    CHECK(single.rows.size() == 1);
}
