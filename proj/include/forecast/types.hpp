#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace traffic {

struct YearRange {
    int first = 0;
    int last = 0;

    int count() const { return last - first + 1; }
    bool contains(int year) const { return year >= first && year <= last; }
    void validate() const {
        if (last < first) throw std::invalid_argument("empty year range");
    }
};

enum class EstimateKind { Low, High, Medium };

inline const char* to_string(EstimateKind k) {
    switch (k) {
        case EstimateKind::Low: return "low";
        case EstimateKind::High: return "high";
        default: return "medium";
    }
}

enum class TrafficCategory { Human, MachineLowActivity, MachineHighActivity, HighPriority };

inline const char* to_string(TrafficCategory c) {
    switch (c) {
        case TrafficCategory::Human: return "human";
        case TrafficCategory::MachineLowActivity: return "machine_low_activity";
        case TrafficCategory::MachineHighActivity: return "machine_high_activity";
        default: return "high_priority";
    }
}

/// A 24-slot non-negative series over hours 0-23.
struct HourlyProfile {
    std::array<double, 24> values{};

    double& operator[](int h) { return values[static_cast<size_t>(h)]; }
    double operator[](int h) const { return values[static_cast<size_t>(h)]; }

    static HourlyProfile constant(double c) {
        HourlyProfile p;
        p.values.fill(c);
        return p;
    }

    double sum() const {
        double s = 0;
        for (double v : values) s += v;
        return s;
    }
    double min() const { return *std::min_element(values.begin(), values.end()); }
    double max() const { return *std::max_element(values.begin(), values.end()); }

    // lowest hour wins ties
    int argmax() const {
        int best = 0;
        for (int h = 1; h < 24; ++h)
            if (values[static_cast<size_t>(h)] > values[static_cast<size_t>(best)]) best = h;
        return best;
    }

    // even count: mean of the two central values
    double median() const {
        std::array<double, 24> s = values;
        std::sort(s.begin(), s.end());
        return 0.5 * (s[11] + s[12]);
    }

    bool non_negative() const {
        return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
    }
};

inline HourlyProfile operator*(double k, const HourlyProfile& p) {
    HourlyProfile r;
    for (int h = 0; h < 24; ++h) r[h] = k * p[h];
    return r;
}

inline HourlyProfile operator+(const HourlyProfile& a, const HourlyProfile& b) {
    HourlyProfile r;
    for (int h = 0; h < 24; ++h) r[h] = a[h] + b[h];
    return r;
}

// ---- error taxonomy ----

struct ForecastError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad model parameters (non-positive rates, inverted bounds, ...).
struct ParameterError : ForecastError {
    using ForecastError::ForecastError;
};

/// Inconsistent model state discovered while evaluating (negative stock, ...).
struct ModelError : ForecastError {
    using ForecastError::ForecastError;
};

/// Input carries no usable signal (constant history, zero net flow, ...).
struct DegenerateInputError : ForecastError {
    using ForecastError::ForecastError;
};

struct InsufficientDataError : ForecastError {
    using ForecastError::ForecastError;
};

/// Configuration problems; collects every issue found, not just the first.
struct ValidationError : ForecastError {
    std::vector<std::string> issues;

    explicit ValidationError(std::vector<std::string> list)
        : ForecastError(join(list)), issues(std::move(list)) {}
    explicit ValidationError(const std::string& one)
        : ForecastError(one), issues{one} {}

private:
    static std::string join(const std::vector<std::string>& list) {
        std::string s;
        for (const auto& e : list) {
            if (!s.empty()) s += "; ";
            s += e;
        }
        return s.empty() ? std::string("validation failed") : s;
    }
};

struct IoError : ForecastError {
    using ForecastError::ForecastError;
};

} // namespace traffic
