#pragma once

#include <limits>
#include <map>
#include <string>

#include "forecast/types.hpp"

namespace traffic::diffusion {

/// S-curve diffusion parameters. Cumulative adoption starts at zero in t0 and
/// saturates at the carrying capacity m.
struct BassParams {
    double p = 0;   // innovation coefficient, 1/year
    double q = 0;   // imitation coefficient, 1/year
    double m = 0;   // carrying capacity, penetration units
    double t0 = 0;  // reference year of zero cumulative adoption

    void validate() const;
};

/// m * F(year - t0) with F(t) = (1 - e^{-(p+q)t}) / (1 + (q/p) e^{-(p+q)t}).
/// Years before t0 evaluate to zero.
double bass_value(const BassParams& params, double year);

struct PenetrationSeries {
    std::string device_id;
    EstimateKind kind = EstimateKind::Medium;
    std::map<int, double> values;

    double at(int year) const;
    bool non_decreasing() const;
};

PenetrationSeries bass_project(const BassParams& params, YearRange years);

struct BassFit {
    BassParams params;
    double residual_norm = 0;  // sqrt(SSE / n)
    bool converged = true;
};

/// Deterministic least squares over a fixed multi-start grid
/// (p in [0.001, 0.1], q in [0.01, 1]) with a 400-step simplex budget per start.
struct ConvergenceError : ForecastError {
    BassFit best;
    explicit ConvergenceError(const std::string& msg, BassFit b)
        : ForecastError(msg), best(std::move(b)) {}
};

BassFit bass_fit(const std::map<int, double>& history);

/// Per-year scalar input: a constant, an explicit table, or a geometric ramp
/// capped at a maximum.
struct YearSeries {
    enum class Kind { Constant, Table, Geometric };
    Kind kind = Kind::Constant;
    double constant = 0;
    std::map<int, double> table;                 // absent years are zero
    double first = 0, annual_growth_rate = 0;    // geometric
    double cap = std::numeric_limits<double>::infinity();
    int start_year = 0;

    static YearSeries constant_of(double v);
    static YearSeries table_of(std::map<int, double> t);
    static YearSeries geometric(double first, int start_year, double rate, double cap);

    double at(int year) const;
};

/// Replacement-purchase stock model: connected units accumulate from sales
/// within the device lifetime and are measured against an adopting body.
struct StockModel {
    YearSeries annual_sales;
    YearSeries connected_share;   // clamped to [0,1]
    int start_year = 0;           // first year connected sales occur
    int lifetime_years = 0;       // 0 = unbounded

    enum class BodyKind { Population, StockLinear, StockConstant, StockGrowthRate };
    BodyKind body_kind = BodyKind::Population;
    double body_size = 0;          // Population / StockConstant
    double initial_stock = 0;      // StockLinear / StockGrowthRate
    double annual_net_growth = 0;  // StockLinear
    double annual_growth_rate = 0; // StockGrowthRate
    int body_base_year = 0;

    bool body_is_stock() const { return body_kind != BodyKind::Population; }
    double body(int year) const;
    double connected_count(int year) const;
};

PenetrationSeries replacement_penetration(const StockModel& model, YearRange years,
                                          EstimateKind kind = EstimateKind::Medium);

/// Coverage-based rollout: a fixed fraction of the maximum level deployed per
/// year from start_year, capped at the maximum. Level units follow the
/// adopting body (devices/km2 for area-bodied devices, per member otherwise).
struct RolloutSchedule {
    double max_level = 0;
    double annual_fraction = 0;  // in [0,1]
    int start_year = 0;
};

PenetrationSeries coverage_rollout(const RolloutSchedule& sched, YearRange years,
                                   EstimateKind kind = EstimateKind::Medium);

/// Linear interpolation from base at start_year to target at
/// start_year + duration, constant before and after.
PenetrationSeries linear_rollout(double base, double target, int start_year,
                                 int duration_years, YearRange years,
                                 EstimateKind kind = EstimateKind::Medium);

} // namespace traffic::diffusion
