#include "forecast/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace traffic::diffusion {

void BassParams::validate() const {
    if (!(p > 0)) throw ParameterError("bass: innovation coefficient must be positive");
    if (q < 0) throw ParameterError("bass: imitation coefficient must be non-negative");
    if (!(m > 0)) throw ParameterError("bass: carrying capacity must be positive");
}

double bass_value(const BassParams& b, double year) {
    double t = std::max(0.0, year - b.t0);
    double s = b.p + b.q;
    double e = std::exp(-s * t);
    return b.m * (1.0 - e) / (1.0 + (b.q / b.p) * e);
}

double PenetrationSeries::at(int year) const {
    auto it = values.find(year);
    if (it == values.end())
        throw ModelError(device_id + ": no penetration value for year " + std::to_string(year));
    return it->second;
}

bool PenetrationSeries::non_decreasing() const {
    double prev = -1;
    for (const auto& [y, v] : values) {
        if (v < prev - 1e-12) return false;
        prev = v;
    }
    return true;
}

PenetrationSeries bass_project(const BassParams& params, YearRange years) {
    params.validate();
    years.validate();
    PenetrationSeries out;
    out.kind = EstimateKind::Medium;
    for (int y = years.first; y <= years.last; ++y) out.values[y] = bass_value(params, y);
    return out;
}

// ---- least-squares fit ----

namespace {

struct FitData {
    std::vector<double> years, values;
    double scale = 0;  // sum v^2
};

// best m for fixed (p,q,t0) is linear least squares
double sse_with_best_m(const FitData& d, double p, double q, double t0, double* m_out) {
    BassParams b{p, q, 1.0, t0};
    double ff = 0, fv = 0;
    std::vector<double> f(d.years.size());
    for (size_t i = 0; i < d.years.size(); ++i) {
        f[i] = bass_value(b, d.years[i]);
        ff += f[i] * f[i];
        fv += f[i] * d.values[i];
    }
    if (ff <= 0) return 1e300;
    double m = fv / ff;
    if (m <= 0) return 1e300;
    double sse = 0;
    for (size_t i = 0; i < d.years.size(); ++i) {
        double r = m * f[i] - d.values[i];
        sse += r * r;
    }
    if (m_out) *m_out = m;
    return sse;
}

// deterministic Nelder-Mead on x = (log p, log q, t0)
struct Simplex {
    std::array<double, 3> x;
    double f = 0;
};

double objective(const FitData& d, const std::array<double, 3>& x) {
    double p = std::exp(x[0]), q = std::exp(x[1]);
    if (p > 50 || q > 50) return 1e300;
    return sse_with_best_m(d, p, q, x[2], nullptr);
}

std::array<double, 3> nelder_mead(const FitData& d, std::array<double, 3> x0, int budget,
                                  double* f_out) {
    std::vector<Simplex> s(4);
    s[0] = {x0, objective(d, x0)};
    for (int i = 0; i < 3; ++i) {
        auto x = x0;
        x[static_cast<size_t>(i)] += (i == 2) ? 1.0 : 0.25;
        s[static_cast<size_t>(i) + 1] = {x, objective(d, x)};
    }
    auto order = [&] {
        std::sort(s.begin(), s.end(), [](const Simplex& a, const Simplex& b) { return a.f < b.f; });
    };
    order();
    for (int it = 0; it < budget; ++it) {
        if (s[3].f - s[0].f < 1e-15 * (1.0 + std::abs(s[0].f))) break;
        std::array<double, 3> c{};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) c[static_cast<size_t>(k)] += s[static_cast<size_t>(i)].x[static_cast<size_t>(k)] / 3.0;
        auto mix = [&](double t) {
            std::array<double, 3> x{};
            for (int k = 0; k < 3; ++k)
                x[static_cast<size_t>(k)] = c[static_cast<size_t>(k)] + t * (c[static_cast<size_t>(k)] - s[3].x[static_cast<size_t>(k)]);
            return x;
        };
        auto xr = mix(1.0);
        double fr = objective(d, xr);
        if (fr < s[0].f) {
            auto xe = mix(2.0);
            double fe = objective(d, xe);
            s[3] = fe < fr ? Simplex{xe, fe} : Simplex{xr, fr};
        } else if (fr < s[2].f) {
            s[3] = {xr, fr};
        } else {
            auto xc = mix(fr < s[3].f ? 0.5 : -0.5);
            double fc = objective(d, xc);
            if (fc < std::min(fr, s[3].f)) {
                s[3] = {xc, fc};
            } else {
                for (int i = 1; i < 4; ++i) {
                    for (int k = 0; k < 3; ++k)
                        s[static_cast<size_t>(i)].x[static_cast<size_t>(k)] =
                            0.5 * (s[static_cast<size_t>(i)].x[static_cast<size_t>(k)] + s[0].x[static_cast<size_t>(k)]);
                    s[static_cast<size_t>(i)].f = objective(d, s[static_cast<size_t>(i)].x);
                }
            }
        }
        order();
    }
    if (f_out) *f_out = s[0].f;
    return s[0].x;
}

} // namespace

BassFit bass_fit(const std::map<int, double>& history) {
    if (history.size() < 4) throw InsufficientDataError("bass fit needs at least 4 data points");
    FitData d;
    for (const auto& [y, v] : history) {
        if (v < 0) throw ParameterError("bass fit: negative history value");
        d.years.push_back(y);
        d.values.push_back(v);
        d.scale += v * v;
    }
    double lo = *std::min_element(d.values.begin(), d.values.end());
    double hi = *std::max_element(d.values.begin(), d.values.end());
    if (hi - lo <= 1e-12 * std::max(1.0, hi))
        throw DegenerateInputError("bass fit: history carries no growth signal");

    const double p_grid[] = {0.001, 0.005, 0.02, 0.1};
    const double q_grid[] = {0.01, 0.05, 0.25, 1.0};
    double span = d.years.back() - d.years.front();
    const double t0_grid[] = {d.years.front(), d.years.front() - 0.5 * span,
                              d.years.front() - 2.0 * span};

    double best_f = 1e300;
    std::array<double, 3> best_x{};
    for (double p0 : p_grid) {
        for (double q0 : q_grid) {
            for (double t0 : t0_grid) {
                double f = 0;
                auto x = nelder_mead(d, {std::log(p0), std::log(q0), t0}, 400, &f);
                if (f < best_f) {
                    best_f = f;
                    best_x = x;
                }
                if (best_f < 1e-18 * std::max(1.0, d.scale)) goto done;
            }
        }
    }
done:
    // polish from the winner
    {
        double f = 0;
        auto x = nelder_mead(d, best_x, 400, &f);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    BassFit fit;
    fit.params.p = std::exp(best_x[0]);
    fit.params.q = std::exp(best_x[1]);
    fit.params.t0 = best_x[2];
    sse_with_best_m(d, fit.params.p, fit.params.q, fit.params.t0, &fit.params.m);
    fit.residual_norm = std::sqrt(best_f / static_cast<double>(d.years.size()));
    double rel = fit.residual_norm / std::max(1e-12, std::sqrt(d.scale / static_cast<double>(d.years.size())));
    if (rel > 0.5) {
        fit.converged = false;
        throw ConvergenceError("bass fit did not converge on this history", fit);
    }
    return fit;
}

// ---- year series ----

YearSeries YearSeries::constant_of(double v) {
    YearSeries s;
    s.kind = Kind::Constant;
    s.constant = v;
    return s;
}

YearSeries YearSeries::table_of(std::map<int, double> t) {
    YearSeries s;
    s.kind = Kind::Table;
    s.table = std::move(t);
    return s;
}

YearSeries YearSeries::geometric(double first, int start_year, double rate, double cap) {
    YearSeries s;
    s.kind = Kind::Geometric;
    s.first = first;
    s.start_year = start_year;
    s.annual_growth_rate = rate;
    s.cap = cap;
    return s;
}

double YearSeries::at(int year) const {
    switch (kind) {
        case Kind::Constant: return constant;
        case Kind::Table: {
            auto it = table.find(year);
            return it == table.end() ? 0.0 : it->second;
        }
        case Kind::Geometric:
            if (year < start_year) return 0.0;
            return std::min(cap, first * std::pow(1.0 + annual_growth_rate, year - start_year));
    }
    return 0.0;
}

// ---- replacement purchase ----

double StockModel::body(int year) const {
    switch (body_kind) {
        case BodyKind::Population:
        case BodyKind::StockConstant: return body_size;
        case BodyKind::StockLinear:
            return initial_stock + annual_net_growth * (year - body_base_year);
        case BodyKind::StockGrowthRate:
            return initial_stock * std::pow(1.0 + annual_growth_rate, year - body_base_year);
    }
    return 0.0;
}

double StockModel::connected_count(int year) const {
    int from = start_year;
    if (lifetime_years > 0) from = std::max(from, year - lifetime_years + 1);
    double total = 0;
    for (int s = from; s <= year; ++s) {
        double share = std::clamp(connected_share.at(s), 0.0, 1.0);
        total += annual_sales.at(s) * share;
    }
    return total;
}

PenetrationSeries replacement_penetration(const StockModel& model, YearRange years,
                                          EstimateKind kind) {
    years.validate();
    if (model.lifetime_years < 0)
        throw ParameterError("replacement: lifetime must be >= 1 or 0 for unbounded");
    PenetrationSeries out;
    out.kind = kind;
    for (int y = years.first; y <= years.last; ++y) {
        double b = model.body(y);
        if (b <= 0) throw ModelError("replacement: adopting body is not positive in " + std::to_string(y));
        double pen = model.connected_count(y) / b;
        if (model.body_is_stock()) pen = std::clamp(pen, 0.0, 1.0);
        out.values[y] = pen;
    }
    return out;
}

PenetrationSeries coverage_rollout(const RolloutSchedule& sched, YearRange years,
                                   EstimateKind kind) {
    years.validate();
    if (sched.annual_fraction < 0 || sched.annual_fraction > 1)
        throw ParameterError("coverage rollout: annual fraction must be in [0,1]");
    if (sched.max_level < 0) throw ParameterError("coverage rollout: negative maximum level");
    PenetrationSeries out;
    out.kind = kind;
    for (int y = years.first; y <= years.last; ++y) {
        double v = 0;
        if (y >= sched.start_year)
            v = std::min(sched.max_level,
                         sched.max_level * sched.annual_fraction * (y - sched.start_year + 1));
        out.values[y] = v;
    }
    return out;
}

PenetrationSeries linear_rollout(double base, double target, int start_year, int duration_years,
                                 YearRange years, EstimateKind kind) {
    years.validate();
    if (duration_years < 1) throw ParameterError("linear rollout: duration must be >= 1");
    PenetrationSeries out;
    out.kind = kind;
    for (int y = years.first; y <= years.last; ++y) {
        double f = std::clamp(static_cast<double>(y - start_year) / duration_years, 0.0, 1.0);
        out.values[y] = base + (target - base) * f;
    }
    return out;
}

} // namespace traffic::diffusion
