#include "forecast/cli_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "forecast/csv.hpp"

namespace fs = std::filesystem;

namespace traffic::io {

namespace {

// ---- parse helpers; every problem lands in `errs` so the caller sees all of
// them at once ----

const json* need(const json& j, const char* key, const std::string& ctx,
                 std::vector<std::string>& errs) {
    if (!j.is_object() || !j.contains(key)) {
        errs.push_back(ctx + ": missing field '" + key + "'");
        return nullptr;
    }
    return &j.at(key);
}

double need_num(const json& j, const char* key, const std::string& ctx,
                std::vector<std::string>& errs, double fallback = 0) {
    const json* v = need(j, key, ctx, errs);
    if (!v) return fallback;
    if (!v->is_number()) {
        errs.push_back(ctx + ": field '" + key + "' must be a number");
        return fallback;
    }
    return v->get<double>();
}

int need_int(const json& j, const char* key, const std::string& ctx,
             std::vector<std::string>& errs, int fallback = 0) {
    const json* v = need(j, key, ctx, errs);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
        errs.push_back(ctx + ": field '" + key + "' must be an integer");
        return fallback;
    }
    return v->get<int>();
}

std::string need_str(const json& j, const char* key, const std::string& ctx,
                     std::vector<std::string>& errs) {
    const json* v = need(j, key, ctx, errs);
    if (!v) return {};
    if (!v->is_string()) {
        errs.push_back(ctx + ": field '" + key + "' must be a string");
        return {};
    }
    return v->get<std::string>();
}

double opt_num(const json& j, const char* key, double def) {
    return j.is_object() && j.contains(key) && j.at(key).is_number() ? j.at(key).get<double>()
                                                                     : def;
}

int opt_int(const json& j, const char* key, int def) {
    return j.is_object() && j.contains(key) && j.at(key).is_number_integer()
               ? j.at(key).get<int>()
               : def;
}

std::optional<EstimateKind> parse_estimate(const std::string& s) {
    if (s == "low") return EstimateKind::Low;
    if (s == "high") return EstimateKind::High;
    if (s == "medium") return EstimateKind::Medium;
    return std::nullopt;
}

std::optional<engine::Binding> parse_binding(const std::string& s) {
    using engine::Binding;
    if (s == "active_population") return Binding::ActivePopulation;
    if (s == "non_working_population") return Binding::NonWorkingPopulation;
    if (s == "moving_population") return Binding::MovingPopulation;
    if (s == "moving_cars") return Binding::MovingCars;
    if (s == "moving_buses") return Binding::MovingBuses;
    if (s == "moving_bikes") return Binding::MovingBikes;
    if (s == "area_unit") return Binding::AreaUnit;
    if (s == "buildings") return Binding::Buildings;
    if (s == "retailers") return Binding::Retailers;
    return std::nullopt;
}

std::optional<TrafficCategory> parse_category(const std::string& s) {
    if (s == "human") return TrafficCategory::Human;
    if (s == "machine_low_activity") return TrafficCategory::MachineLowActivity;
    if (s == "machine_high_activity") return TrafficCategory::MachineHighActivity;
    if (s == "high_priority") return TrafficCategory::HighPriority;
    return std::nullopt;
}

std::map<int, double> parse_year_table(const json& j, const std::string& ctx,
                                       std::vector<std::string>& errs) {
    std::map<int, double> out;
    if (!j.is_object()) {
        errs.push_back(ctx + ": expected an object of year -> value");
        return out;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        try {
            out[std::stoi(it.key())] = it.value().get<double>();
        } catch (...) {
            errs.push_back(ctx + ": bad year key '" + it.key() + "'");
        }
    }
    return out;
}

control::LinearSchedule parse_schedule(const json& j, const std::string& ctx,
                                       std::vector<std::string>& errs) {
    control::LinearSchedule s;
    s.base = need_num(j, "base", ctx, errs);
    s.base_year = need_int(j, "base_year", ctx, errs);
    s.target_low = need_num(j, "low", ctx, errs);
    s.target_high = need_num(j, "high", ctx, errs);
    s.target_year = need_int(j, "target_year", ctx, errs);
    return s;
}

volume::GrowthSpec parse_growth(const json& j, const std::string& ctx,
                                std::vector<std::string>& errs) {
    volume::GrowthSpec g;
    std::string kind = need_str(j, "kind", ctx, errs);
    if (kind == "exponential") {
        g.kind = volume::GrowthKind::Exponential;
        g.base = need_num(j, "base_gb_per_day", ctx, errs);
        g.base_year = need_int(j, "base_year", ctx, errs);
        if (const json* c = need(j, "cagr", ctx, errs)) {
            g.cagr_low = need_num(*c, "low", ctx + ".cagr", errs);
            g.cagr_high = need_num(*c, "high", ctx + ".cagr", errs);
        }
    } else if (kind == "ceiling_linear") {
        g.kind = volume::GrowthKind::CeilingLinear;
        g.base = need_num(j, "base_gb_per_day", ctx, errs);
        g.base_year = need_int(j, "base_year", ctx, errs);
        g.ceiling_year = need_int(j, "ceiling_year", ctx, errs);
        if (const json* c = need(j, "ceiling_gb_per_day", ctx, errs)) {
            g.ceiling_low = need_num(*c, "low", ctx + ".ceiling", errs);
            g.ceiling_high = need_num(*c, "high", ctx + ".ceiling", errs);
        }
    } else if (kind == "constant") {
        g.kind = volume::GrowthKind::Constant;
        g.constant = need_num(j, "gb_per_day", ctx, errs);
    } else if (kind == "camera_hours") {
        g.kind = volume::GrowthKind::CameraHours;
        g.camera_start_year = need_int(j, "start_year", ctx, errs);
        g.camera_base_hours = need_num(j, "base_hours_per_day", ctx, errs);
        g.camera_base_hours_year = need_int(j, "base_hours_year", ctx, errs);
        g.camera_hd_rate = need_num(j, "hd_rate_gb_per_hour", ctx, errs);
        if (const json* c = need(j, "daily_hours_delta", ctx, errs)) {
            g.camera_delta_low = need_num(*c, "low", ctx + ".delta", errs);
            g.camera_delta_high = need_num(*c, "high", ctx + ".delta", errs);
        }
    } else {
        errs.push_back(ctx + ": unknown growth kind '" + kind + "'");
    }
    try {
        g.validate(ctx);
    } catch (const ValidationError& e) {
        errs.insert(errs.end(), e.issues.begin(), e.issues.end());
    }
    return g;
}

volume::ActivitySpec parse_activity(const json& j, const std::string& ctx,
                                    std::vector<std::string>& errs) {
    volume::ActivitySpec a;
    std::string kind = need_str(j, "kind", ctx, errs);
    if (kind == "usage_profile") {
        a.kind = volume::ActivityKind::UsageProfile;
        a.profile = need_str(j, "profile", ctx, errs);
    } else if (kind == "per_moving_hour") {
        a.kind = volume::ActivityKind::PerMovingHour;
    } else if (kind == "uniform_window") {
        a.kind = volume::ActivityKind::UniformWindow;
        a.window_start = need_int(j, "window_start", ctx, errs);
        a.window_end = need_int(j, "window_end", ctx, errs);
        a.fleet_density = opt_num(j, "fleet_density_per_km2", 0.0);
    } else if (kind == "uniform_24h") {
        a.kind = volume::ActivityKind::Uniform24h;
    } else {
        errs.push_back(ctx + ": unknown activity kind '" + kind + "'");
    }
    try {
        a.validate(ctx);
    } catch (const ValidationError& e) {
        errs.insert(errs.end(), e.issues.begin(), e.issues.end());
    }
    return a;
}

diffusion::YearSeries parse_sales(const json& v, const std::string& ctx,
                                  std::vector<std::string>& errs, int* start_year) {
    using diffusion::YearSeries;
    if (v.contains("annual_sales"))
        return YearSeries::constant_of(need_num(v, "annual_sales", ctx, errs));
    if (v.contains("connected_sales_by_year")) {
        auto t = parse_year_table(v.at("connected_sales_by_year"), ctx, errs);
        if (!t.empty() && *start_year == 0) *start_year = t.begin()->first;
        return YearSeries::table_of(std::move(t));
    }
    if (v.contains("sales_geometric")) {
        const json& g = v.at("sales_geometric");
        double first = need_num(g, "first", ctx, errs);
        int sy = need_int(g, "start_year", ctx, errs);
        double rate = need_num(g, "annual_growth_rate", ctx, errs);
        double cap = opt_num(g, "cap", std::numeric_limits<double>::infinity());
        if (*start_year == 0) *start_year = sy;
        return YearSeries::geometric(first, sy, rate, cap);
    }
    errs.push_back(ctx + ": replacement variant needs annual_sales, connected_sales_by_year, "
                         "or sales_geometric");
    return YearSeries::constant_of(0.0);
}

PenetrationConfig parse_penetration(const json& j, const std::string& ctx,
                                    std::vector<std::string>& errs) {
    PenetrationConfig pc;
    std::string model = need_str(j, "model", ctx, errs);
    pc.medium_only = j.contains("estimate") && j.at("estimate") == "medium";
    if (model == "bass") {
        pc.model = PenetrationConfig::Model::Bass;
        pc.medium_only = true;
        pc.bass.p = need_num(j, "p", ctx, errs);
        pc.bass.q = need_num(j, "q", ctx, errs);
        pc.bass.m = need_num(j, "m", ctx, errs);
        pc.bass.t0 = need_num(j, "t0", ctx, errs);
        if (j.contains("history")) pc.history_ref = j.at("history").get<std::string>();
        try {
            pc.bass.validate();
        } catch (const ForecastError& e) {
            errs.push_back(ctx + ": " + e.what());
        }
    } else if (model == "replacement") {
        pc.model = PenetrationConfig::Model::Replacement;
        pc.lifetime_years = opt_int(j, "lifetime_years", 0);
        pc.start_year = opt_int(j, "start_year", 0);
        if (const json* b = need(j, "body", ctx, errs)) {
            std::string kind = need_str(*b, "kind", ctx + ".body", errs);
            using BK = diffusion::StockModel::BodyKind;
            if (kind == "population") {
                pc.body_kind = BK::Population;
                pc.body_size = need_num(*b, "size", ctx + ".body", errs);
            } else if (kind == "stock_constant") {
                pc.body_kind = BK::StockConstant;
                pc.body_size = need_num(*b, "size", ctx + ".body", errs);
            } else if (kind == "stock_linear") {
                pc.body_kind = BK::StockLinear;
                pc.initial_stock = need_num(*b, "initial", ctx + ".body", errs);
                pc.annual_net_growth = need_num(*b, "annual_net_growth", ctx + ".body", errs);
                pc.body_base_year = need_int(*b, "base_year", ctx + ".body", errs);
            } else if (kind == "stock_growth_rate") {
                pc.body_kind = BK::StockGrowthRate;
                pc.initial_stock = need_num(*b, "initial", ctx + ".body", errs);
                pc.annual_growth_rate = need_num(*b, "annual_growth_rate", ctx + ".body", errs);
                pc.body_base_year = need_int(*b, "base_year", ctx + ".body", errs);
            } else {
                errs.push_back(ctx + ".body: unknown kind '" + kind + "'");
            }
        }
        if (const json* vs = need(j, "variants", ctx, errs)) {
            for (auto it = vs->begin(); it != vs->end(); ++it) {
                auto est = parse_estimate(it.key());
                if (!est) {
                    errs.push_back(ctx + ": unknown variant '" + it.key() + "'");
                    continue;
                }
                PenetrationConfig::ReplacementVariant rv;
                rv.start_year = opt_int(it.value(), "start_year", pc.start_year);
                rv.sales = parse_sales(it.value(), ctx + "." + it.key(), errs, &rv.start_year);
                if (it.value().contains("connected_share_by_year"))
                    rv.share = diffusion::YearSeries::table_of(parse_year_table(
                        it.value().at("connected_share_by_year"), ctx + ".share", errs));
                else
                    rv.share = diffusion::YearSeries::constant_of(
                        opt_num(it.value(), "connected_share", 1.0));
                if (rv.start_year == 0)
                    errs.push_back(ctx + "." + it.key() + ": no start year resolvable");
                pc.replacement[*est] = std::move(rv);
            }
        }
    } else if (model == "coverage") {
        pc.model = PenetrationConfig::Model::Coverage;
        if (const json* vs = need(j, "variants", ctx, errs)) {
            for (auto it = vs->begin(); it != vs->end(); ++it) {
                auto est = parse_estimate(it.key());
                if (!est) {
                    errs.push_back(ctx + ": unknown variant '" + it.key() + "'");
                    continue;
                }
                diffusion::RolloutSchedule rs;
                rs.max_level = need_num(it.value(), "max_level", ctx, errs);
                rs.annual_fraction = need_num(it.value(), "annual_fraction", ctx, errs);
                rs.start_year = need_int(it.value(), "start_year", ctx, errs);
                pc.coverage[*est] = rs;
            }
        }
    } else if (model == "linear") {
        pc.model = PenetrationConfig::Model::Linear;
        auto parse_linear = [&](const json& v, const std::string& c) {
            PenetrationConfig::LinearSpec ls;
            ls.base = need_num(v, "base", c, errs);
            ls.target = need_num(v, "target", c, errs);
            ls.start_year = need_int(v, "start_year", c, errs);
            ls.duration_years = need_int(v, "duration_years", c, errs);
            return ls;
        };
        if (pc.medium_only) {
            pc.linear[EstimateKind::Medium] = parse_linear(j, ctx);
        } else if (const json* vs = need(j, "variants", ctx, errs)) {
            for (auto it = vs->begin(); it != vs->end(); ++it) {
                auto est = parse_estimate(it.key());
                if (!est) {
                    errs.push_back(ctx + ": unknown variant '" + it.key() + "'");
                    continue;
                }
                pc.linear[*est] = parse_linear(it.value(), ctx + "." + it.key());
            }
        }
    } else {
        errs.push_back(ctx + ": unknown penetration model '" + model + "'");
    }
    if (!pc.medium_only && pc.model != PenetrationConfig::Model::Bass) {
        bool has_low = pc.replacement.count(EstimateKind::Low) ||
                       pc.coverage.count(EstimateKind::Low) || pc.linear.count(EstimateKind::Low);
        bool has_high = pc.replacement.count(EstimateKind::High) ||
                        pc.coverage.count(EstimateKind::High) || pc.linear.count(EstimateKind::High);
        if (!has_low || !has_high)
            errs.push_back(ctx + ": needs low and high variants (or estimate: medium)");
    }
    return pc;
}

} // namespace

ScenarioConfig load_config_json(const json& j, const std::string& base_dir) {
    std::vector<std::string> errs;
    ScenarioConfig cfg;
    cfg.base_dir = base_dir;
    cfg.name = j.value("name", "unnamed");

    if (const json* h = need(j, "horizon", "horizon", errs)) {
        cfg.horizon.first = need_int(*h, "first_year", "horizon", errs);
        cfg.horizon.last = need_int(*h, "last_year", "horizon", errs);
        if (cfg.horizon.last < cfg.horizon.first) errs.push_back("horizon: empty year range");
    }
    if (const json* a = need(j, "area", "area", errs)) {
        cfg.area.area_km2 = need_num(*a, "area_km2", "area", errs);
        cfg.area.population_density = need_num(*a, "population_density", "area", errs);
        cfg.area.resident_employed_density = need_num(*a, "resident_employed_density", "area", errs);
        cfg.area.workplace_density = need_num(*a, "workplace_density", "area", errs);
        cfg.area.service_workplace_fraction =
            need_num(*a, "service_workplace_fraction", "area", errs);
        cfg.area.retailer_density = need_num(*a, "retailer_density", "area", errs);
        cfg.area.building_density = need_num(*a, "building_density", "area", errs);
        try {
            cfg.area.validate();
        } catch (const ValidationError& e) {
            for (const auto& i : e.issues) errs.push_back("area: " + i);
        }
    }
    if (const json* t = need(j, "transport", "transport", errs)) {
        cfg.transport.car_mode_share = need_num(*t, "car_mode_share", "transport", errs);
        cfg.transport.car_occupancy = need_num(*t, "car_occupancy", "transport", errs);
        cfg.transport.car_ownership_per_inhabitant =
            need_num(*t, "car_ownership_per_inhabitant", "transport", errs);
        cfg.transport.bus_to_car_ratio = need_num(*t, "bus_to_car_ratio", "transport", errs);
        cfg.transport.bikes_per_inhabitant = need_num(*t, "bikes_per_inhabitant", "transport", errs);
        cfg.transport.bike_mode_share = need_num(*t, "bike_mode_share", "transport", errs);
        cfg.crossing_counts_path = need_str(*t, "crossing_counts", "transport", errs);
        cfg.balance_tolerance = opt_num(*t, "daily_balance_tolerance", 0.01);
        try {
            cfg.transport.validate();
        } catch (const ValidationError& e) {
            for (const auto& i : e.issues) errs.push_back("transport: " + i);
        }
    }
    if (const json* p = need(j, "profiles", "profiles", errs)) {
        for (auto it = p->begin(); it != p->end(); ++it)
            cfg.profile_paths[it.key()] = it.value().get<std::string>();
    }
    if (j.contains("adoption_histories"))
        for (auto it = j.at("adoption_histories").begin(); it != j.at("adoption_histories").end();
             ++it)
            cfg.history_paths[it.key()] = it.value().get<std::string>();

    if (const json* c = need(j, "control", "control", errs)) {
        cfg.control.t_r_min_hours = need_num(*c, "min_inter_request_hours", "control", errs);
        if (const json* s = need(*c, "inter_request_hours", "control", errs))
            cfg.control.inter_request_hours = parse_schedule(*s, "control.inter_request_hours", errs);
        if (const json* s = need(*c, "inter_site_km", "control", errs))
            cfg.control.inter_site_km = parse_schedule(*s, "control.inter_site_km", errs);
        if (const json* s = need(*c, "speeds_kmh", "control", errs))
            for (auto it = s->begin(); it != s->end(); ++it)
                cfg.control.speeds_kmh[it.key()] = it.value().get<double>();
        try {
            cfg.control.validate();
        } catch (const ValidationError& e) {
            for (const auto& i : e.issues) errs.push_back("control: " + i);
        }
    }
    if (const json* c = need(j, "capacity", "capacity", errs)) {
        cfg.capacity_baseline_year = need_int(*c, "baseline_year", "capacity", errs);
        if (const json* as = need(*c, "assumptions", "capacity", errs)) {
            for (const auto& a : *as) {
                capacity::CapacityAssumption ca;
                ca.name = need_str(a, "name", "capacity.assumptions", errs);
                ca.multiplier = need_num(a, "multiplier", "capacity.assumptions", errs);
                try {
                    ca.validate();
                } catch (const ForecastError& e) {
                    errs.push_back(e.what());
                }
                cfg.capacity_assumptions.push_back(ca);
            }
        }
    }
    if (j.contains("policies")) {
        for (auto lever = j.at("policies").begin(); lever != j.at("policies").end(); ++lever) {
            for (auto dev = lever.value().begin(); dev != lever.value().end(); ++dev) {
                PolicyEffect eff;
                if (dev.value().contains("penetration")) {
                    auto e = parse_estimate(dev.value().at("penetration").get<std::string>());
                    if (!e || *e == EstimateKind::Medium)
                        errs.push_back("policy '" + lever.key() +
                                       "': penetration effect must select low or high");
                    else
                        eff.penetration = e;
                }
                if (dev.value().contains("volume")) {
                    auto e = parse_estimate(dev.value().at("volume").get<std::string>());
                    if (!e || *e == EstimateKind::Medium)
                        errs.push_back("policy '" + lever.key() +
                                       "': volume effect must select low or high");
                    else
                        eff.volume = e;
                }
                if (!eff.penetration && !eff.volume)
                    errs.push_back("policy '" + lever.key() + "': no effect on '" + dev.key() + "'");
                cfg.policies[lever.key()][dev.key()] = eff;
            }
        }
    }

    std::set<std::string> device_ids;
    if (const json* ds = need(j, "devices", "devices", errs)) {
        for (size_t i = 0; i < ds->size(); ++i) {
            const json& d = (*ds)[i];
            DeviceConfig dc;
            std::string ctx = "devices[" + std::to_string(i) + "]";
            dc.id = need_str(d, "id", ctx, errs);
            if (!dc.id.empty()) ctx = "device '" + dc.id + "'";
            if (!device_ids.insert(dc.id).second) errs.push_back(ctx + ": duplicate device id");
            dc.adopting_body = need_str(d, "adopting_body", ctx, errs);
            std::string bs = need_str(d, "density_binding", ctx, errs);
            if (auto b = parse_binding(bs))
                dc.density_binding = *b;
            else
                errs.push_back(ctx + ": unknown density binding '" + bs + "'");
            if (const json* c = need(d, "control", ctx, errs)) {
                std::string ind = need_str(*c, "indicator", ctx + ".control", errs);
                if (ind == "attachment")
                    dc.control_role = engine::ControlRole::Attachment;
                else if (ind == "handover")
                    dc.control_role = engine::ControlRole::Handover;
                else if (ind == "none")
                    dc.control_role = engine::ControlRole::None;
                else
                    errs.push_back(ctx + ": unknown control indicator '" + ind + "'");
                if (c->contains("handover_binding")) {
                    auto hb = parse_binding(c->at("handover_binding").get<std::string>());
                    if (hb)
                        dc.handover_binding = hb;
                    else
                        errs.push_back(ctx + ": unknown handover binding");
                }
            }
            if (const json* p = need(d, "penetration", ctx, errs))
                dc.penetration = parse_penetration(*p, ctx + ".penetration", errs);
            if (const json* as = need(d, "applications", ctx, errs)) {
                for (const auto& a : *as) {
                    engine::ApplicationSpec app;
                    std::string actx = ctx + ".app";
                    app.id = need_str(a, "id", actx, errs);
                    if (!app.id.empty()) actx = "application '" + app.id + "'";
                    std::string cat = need_str(a, "category", actx, errs);
                    if (auto c = parse_category(cat))
                        app.category = *c;
                    else
                        errs.push_back(actx + ": unknown traffic category '" + cat + "'");
                    if (const json* g = need(a, "growth", actx, errs))
                        app.growth = parse_growth(*g, actx + ".growth", errs);
                    if (const json* act = need(a, "activity", actx, errs))
                        app.activity = parse_activity(*act, actx + ".activity", errs);
                    dc.applications.push_back(std::move(app));
                }
            }
            cfg.devices.push_back(std::move(dc));
        }
        if (cfg.devices.empty()) errs.push_back("devices: registry is empty");
    }

    // cross references
    for (const auto& d : cfg.devices) {
        for (const auto& a : d.applications)
            if (a.activity.kind == volume::ActivityKind::UsageProfile &&
                !cfg.profile_paths.count(a.activity.profile))
                errs.push_back("application '" + a.id + "' references unknown usage profile '" +
                               a.activity.profile + "'");
        if (d.penetration.model == PenetrationConfig::Model::Bass &&
            !d.penetration.history_ref.empty() &&
            !cfg.history_paths.count(d.penetration.history_ref))
            errs.push_back("device '" + d.id + "' references unknown adoption history '" +
                           d.penetration.history_ref + "'");
        if (d.control_role == engine::ControlRole::Handover &&
            !cfg.control.speeds_kmh.count(d.id))
            errs.push_back("device '" + d.id + "' needs a speed entry for handover estimation");
    }
    for (const auto& [lever, effects] : cfg.policies)
        for (const auto& [dev, eff] : effects)
            if (!device_ids.count(dev))
                errs.push_back("policy '" + lever + "' targets unknown device '" + dev + "'");

    if (!errs.empty()) throw ValidationError(errs);

    // data files
    auto path_of = [&](const std::string& rel) {
        return (fs::path(base_dir) / rel).string();
    };
    csv::read_hourly_pair(path_of(cfg.crossing_counts_path), cfg.crossings.inbound,
                          cfg.crossings.outbound);
    cfg.crossings.validate(cfg.balance_tolerance);
    for (const auto& [id, rel] : cfg.profile_paths)
        cfg.usage_profiles[id] = csv::read_share_profile(path_of(rel));
    for (const auto& [id, rel] : cfg.history_paths)
        cfg.adoption_histories[id] = csv::read_year_series(path_of(rel));

    resolve(cfg);  // surfaces model-level violations (bounds, monotonicity) at load time
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return load_config_json(j, fs::path(path).parent_path().string());
}

// ---- serialization (round-trip) ----

namespace {

json estimate_map(double low, double high) { return json{{"low", low}, {"high", high}}; }

json save_year_series_sales(const diffusion::YearSeries& s, json& variant) {
    using K = diffusion::YearSeries::Kind;
    switch (s.kind) {
        case K::Constant: variant["annual_sales"] = s.constant; break;
        case K::Table: {
            json t = json::object();
            for (const auto& [y, v] : s.table) t[std::to_string(y)] = v;
            variant["connected_sales_by_year"] = t;
            break;
        }
        case K::Geometric: {
            json g{{"first", s.first},
                   {"start_year", s.start_year},
                   {"annual_growth_rate", s.annual_growth_rate}};
            if (std::isfinite(s.cap)) g["cap"] = s.cap;
            variant["sales_geometric"] = g;
            break;
        }
    }
    return variant;
}

json save_growth(const volume::GrowthSpec& g) {
    switch (g.kind) {
        case volume::GrowthKind::Exponential:
            return {{"kind", "exponential"},
                    {"base_gb_per_day", g.base},
                    {"base_year", g.base_year},
                    {"cagr", estimate_map(g.cagr_low, g.cagr_high)}};
        case volume::GrowthKind::CeilingLinear:
            return {{"kind", "ceiling_linear"},
                    {"base_gb_per_day", g.base},
                    {"base_year", g.base_year},
                    {"ceiling_year", g.ceiling_year},
                    {"ceiling_gb_per_day", estimate_map(g.ceiling_low, g.ceiling_high)}};
        case volume::GrowthKind::Constant:
            return {{"kind", "constant"}, {"gb_per_day", g.constant}};
        case volume::GrowthKind::CameraHours:
            return {{"kind", "camera_hours"},
                    {"start_year", g.camera_start_year},
                    {"base_hours_per_day", g.camera_base_hours},
                    {"base_hours_year", g.camera_base_hours_year},
                    {"hd_rate_gb_per_hour", g.camera_hd_rate},
                    {"daily_hours_delta", estimate_map(g.camera_delta_low, g.camera_delta_high)}};
    }
    return {};
}

json save_activity(const volume::ActivitySpec& a) {
    switch (a.kind) {
        case volume::ActivityKind::UsageProfile:
            return {{"kind", "usage_profile"}, {"profile", a.profile}};
        case volume::ActivityKind::PerMovingHour: return {{"kind", "per_moving_hour"}};
        case volume::ActivityKind::UniformWindow: {
            json j{{"kind", "uniform_window"},
                   {"window_start", a.window_start},
                   {"window_end", a.window_end}};
            if (a.fleet_density > 0) j["fleet_density_per_km2"] = a.fleet_density;
            return j;
        }
        case volume::ActivityKind::Uniform24h: return {{"kind", "uniform_24h"}};
    }
    return {};
}

json save_penetration(const PenetrationConfig& pc) {
    json j;
    using M = PenetrationConfig::Model;
    using BK = diffusion::StockModel::BodyKind;
    switch (pc.model) {
        case M::Bass:
            j = {{"model", "bass"}, {"estimate", "medium"}, {"p", pc.bass.p},
                 {"q", pc.bass.q},  {"m", pc.bass.m},       {"t0", pc.bass.t0}};
            if (!pc.history_ref.empty()) j["history"] = pc.history_ref;
            break;
        case M::Replacement: {
            j["model"] = "replacement";
            if (pc.lifetime_years > 0) j["lifetime_years"] = pc.lifetime_years;
            if (pc.start_year > 0) j["start_year"] = pc.start_year;
            json body;
            switch (pc.body_kind) {
                case BK::Population: body = {{"kind", "population"}, {"size", pc.body_size}}; break;
                case BK::StockConstant:
                    body = {{"kind", "stock_constant"}, {"size", pc.body_size}};
                    break;
                case BK::StockLinear:
                    body = {{"kind", "stock_linear"},
                            {"initial", pc.initial_stock},
                            {"annual_net_growth", pc.annual_net_growth},
                            {"base_year", pc.body_base_year}};
                    break;
                case BK::StockGrowthRate:
                    body = {{"kind", "stock_growth_rate"},
                            {"initial", pc.initial_stock},
                            {"annual_growth_rate", pc.annual_growth_rate},
                            {"base_year", pc.body_base_year}};
                    break;
            }
            j["body"] = body;
            json variants = json::object();
            for (const auto& [est, rv] : pc.replacement) {
                json v = json::object();
                save_year_series_sales(rv.sales, v);
                if (rv.share.kind == diffusion::YearSeries::Kind::Table) {
                    json t = json::object();
                    for (const auto& [y, x] : rv.share.table) t[std::to_string(y)] = x;
                    v["connected_share_by_year"] = t;
                } else if (rv.share.constant != 1.0) {
                    v["connected_share"] = rv.share.constant;
                }
                if (rv.start_year > 0) v["start_year"] = rv.start_year;
                variants[to_string(est)] = v;
            }
            j["variants"] = variants;
            break;
        }
        case M::Coverage: {
            j["model"] = "coverage";
            json variants = json::object();
            for (const auto& [est, rs] : pc.coverage)
                variants[to_string(est)] = {{"max_level", rs.max_level},
                                            {"annual_fraction", rs.annual_fraction},
                                            {"start_year", rs.start_year}};
            j["variants"] = variants;
            break;
        }
        case M::Linear: {
            j["model"] = "linear";
            auto one = [](const PenetrationConfig::LinearSpec& ls) {
                return json{{"base", ls.base},
                            {"target", ls.target},
                            {"start_year", ls.start_year},
                            {"duration_years", ls.duration_years}};
            };
            if (pc.medium_only) {
                j["estimate"] = "medium";
                json inner = one(pc.linear.at(EstimateKind::Medium));
                j.update(inner);
            } else {
                json variants = json::object();
                for (const auto& [est, ls] : pc.linear) variants[to_string(est)] = one(ls);
                j["variants"] = variants;
            }
            break;
        }
    }
    return j;
}

} // namespace

json save_config(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["horizon"] = {{"first_year", cfg.horizon.first}, {"last_year", cfg.horizon.last}};
    j["area"] = {{"area_km2", cfg.area.area_km2},
                 {"population_density", cfg.area.population_density},
                 {"resident_employed_density", cfg.area.resident_employed_density},
                 {"workplace_density", cfg.area.workplace_density},
                 {"service_workplace_fraction", cfg.area.service_workplace_fraction},
                 {"retailer_density", cfg.area.retailer_density},
                 {"building_density", cfg.area.building_density}};
    j["transport"] = {{"car_mode_share", cfg.transport.car_mode_share},
                      {"car_occupancy", cfg.transport.car_occupancy},
                      {"car_ownership_per_inhabitant", cfg.transport.car_ownership_per_inhabitant},
                      {"bus_to_car_ratio", cfg.transport.bus_to_car_ratio},
                      {"bikes_per_inhabitant", cfg.transport.bikes_per_inhabitant},
                      {"bike_mode_share", cfg.transport.bike_mode_share},
                      {"crossing_counts", cfg.crossing_counts_path},
                      {"daily_balance_tolerance", cfg.balance_tolerance}};
    j["profiles"] = cfg.profile_paths;
    j["adoption_histories"] = cfg.history_paths;
    auto sched = [](const control::LinearSchedule& s) {
        return json{{"base", s.base},
                    {"base_year", s.base_year},
                    {"target_year", s.target_year},
                    {"low", s.target_low},
                    {"high", s.target_high}};
    };
    j["control"] = {{"min_inter_request_hours", cfg.control.t_r_min_hours},
                    {"inter_request_hours", sched(cfg.control.inter_request_hours)},
                    {"inter_site_km", sched(cfg.control.inter_site_km)},
                    {"speeds_kmh", cfg.control.speeds_kmh}};
    json assumptions = json::array();
    for (const auto& a : cfg.capacity_assumptions)
        assumptions.push_back({{"name", a.name}, {"multiplier", a.multiplier}});
    j["capacity"] = {{"baseline_year", cfg.capacity_baseline_year}, {"assumptions", assumptions}};
    json policies = json::object();
    for (const auto& [lever, effects] : cfg.policies) {
        json l = json::object();
        for (const auto& [dev, eff] : effects) {
            json e = json::object();
            if (eff.penetration) e["penetration"] = to_string(*eff.penetration);
            if (eff.volume) e["volume"] = to_string(*eff.volume);
            l[dev] = e;
        }
        policies[lever] = l;
    }
    j["policies"] = policies;
    json devices = json::array();
    for (const auto& d : cfg.devices) {
        json dj;
        dj["id"] = d.id;
        dj["adopting_body"] = d.adopting_body;
        dj["density_binding"] = engine::to_string(d.density_binding);
        json ctrl;
        ctrl["indicator"] = d.control_role == engine::ControlRole::Attachment ? "attachment"
                            : d.control_role == engine::ControlRole::Handover ? "handover"
                                                                              : "none";
        if (d.handover_binding) ctrl["handover_binding"] = engine::to_string(*d.handover_binding);
        dj["control"] = ctrl;
        dj["penetration"] = save_penetration(d.penetration);
        json apps = json::array();
        for (const auto& a : d.applications)
            apps.push_back({{"id", a.id},
                            {"category", to_string(a.category)},
                            {"growth", save_growth(a.growth)},
                            {"activity", save_activity(a.activity)}});
        dj["applications"] = apps;
        devices.push_back(dj);
    }
    j["devices"] = devices;
    return j;
}

// ---- resolution ----

namespace {

diffusion::PenetrationSeries evaluate_penetration(const PenetrationConfig& pc, EstimateKind est,
                                                  YearRange years) {
    using M = PenetrationConfig::Model;
    switch (pc.model) {
        case M::Bass: return diffusion::bass_project(pc.bass, years);
        case M::Replacement: {
            const auto& rv = pc.replacement.at(est);
            diffusion::StockModel sm;
            sm.annual_sales = rv.sales;
            sm.connected_share = rv.share;
            sm.start_year = rv.start_year;
            sm.lifetime_years = pc.lifetime_years;
            sm.body_kind = pc.body_kind;
            sm.body_size = pc.body_size;
            sm.initial_stock = pc.initial_stock;
            sm.annual_net_growth = pc.annual_net_growth;
            sm.annual_growth_rate = pc.annual_growth_rate;
            sm.body_base_year = pc.body_base_year;
            return diffusion::replacement_penetration(sm, years, est);
        }
        case M::Coverage: return diffusion::coverage_rollout(pc.coverage.at(est), years, est);
        case M::Linear: {
            const auto& ls = pc.linear.at(est);
            return diffusion::linear_rollout(ls.base, ls.target, ls.start_year, ls.duration_years,
                                             years, est);
        }
    }
    throw ModelError("unreachable penetration model");
}

} // namespace

Resolved resolve(const ScenarioConfig& cfg) {
    Resolved r;
    std::vector<std::string> errs;

    HourlyProfile pattern = density::included_people_pattern(cfg.crossings);
    auto pop = density::active_population(cfg.area, pattern);
    using engine::Binding;
    r.profiles.bindings[Binding::ActivePopulation] = pop.active;
    r.profiles.bindings[Binding::NonWorkingPopulation] = pop.non_working;
    r.profiles.bindings[Binding::MovingPopulation] = density::moving_population(pop.active);
    double resident_cars =
        cfg.transport.car_ownership_per_inhabitant * cfg.area.population_density;
    HourlyProfile mc =
        density::moving_car_density(cfg.area, cfg.crossings, cfg.transport, resident_cars);
    r.profiles.bindings[Binding::MovingCars] = mc;
    r.profiles.bindings[Binding::MovingBuses] =
        density::moving_bus_density(mc, cfg.transport.bus_to_car_ratio);
    r.profiles.bindings[Binding::MovingBikes] =
        density::moving_bike_density(cfg.area, cfg.crossings, cfg.transport);
    r.profiles.bindings[Binding::AreaUnit] = HourlyProfile::constant(1.0);
    r.profiles.bindings[Binding::Buildings] = HourlyProfile::constant(cfg.area.building_density);
    r.profiles.bindings[Binding::Retailers] = HourlyProfile::constant(cfg.area.retailer_density);
    r.profiles.usage_shares = cfg.usage_profiles;

    for (const auto& dc : cfg.devices) {
        engine::DeviceSpec dev;
        dev.id = dc.id;
        dev.adopting_body = dc.adopting_body;
        dev.density_binding = dc.density_binding;
        dev.control_role = dc.control_role;
        dev.handover_binding = dc.handover_binding;
        dev.applications = dc.applications;
        try {
            if (dc.penetration.medium_only) {
                auto s = evaluate_penetration(dc.penetration, EstimateKind::Medium, cfg.horizon);
                s.device_id = dev.id;
                dev.penetration[EstimateKind::Medium] = std::move(s);
            } else {
                for (EstimateKind est : {EstimateKind::Low, EstimateKind::High}) {
                    auto s = evaluate_penetration(dc.penetration, est, cfg.horizon);
                    s.device_id = dev.id;
                    dev.penetration[est] = std::move(s);
                }
            }
        } catch (const ForecastError& e) {
            errs.push_back("device '" + dev.id + "': " + e.what());
            continue;
        }
        for (const auto& [est, series] : dev.penetration) {
            for (const auto& [y, v] : series.values)
                if (v < 0) errs.push_back("device '" + dev.id + "': negative penetration in " +
                                          std::to_string(y));
            if (!series.non_decreasing())
                errs.push_back("device '" + dev.id + "': penetration decreases over years (" +
                               std::string(to_string(est)) + ")");
        }
        if (dev.penetration.count(EstimateKind::Low) && dev.penetration.count(EstimateKind::High)) {
            const auto& lo = dev.penetration.at(EstimateKind::Low).values;
            const auto& hi = dev.penetration.at(EstimateKind::High).values;
            for (const auto& [y, v] : lo)
                if (v > hi.at(y) + 1e-12)
                    errs.push_back("device '" + dev.id + "': low estimate exceeds high estimate in " +
                                   std::to_string(y) +
                                   " (bounded estimates must satisfy low <= high)");
        }
        r.registry.push_back(std::move(dev));
    }
    if (!errs.empty()) throw ValidationError(errs);
    return r;
}

engine::Scenario make_scenario(const ScenarioConfig& cfg, const std::string& name,
                               const std::vector<std::string>& active_policies) {
    engine::Scenario s;
    if (name == "slow")
        s = engine::Scenario::slow();
    else if (name == "rapid")
        s = engine::Scenario::rapid();
    else
        throw ValidationError("unknown scenario '" + name + "' (use slow or rapid)");
    for (const auto& lever : active_policies) {
        auto it = cfg.policies.find(lever);
        if (it == cfg.policies.end()) throw ValidationError("unknown policy lever '" + lever + "'");
        for (const auto& [dev_id, eff] : it->second) {
            if (eff.penetration) s.device_overrides[dev_id] = *eff.penetration;
            if (eff.volume)
                for (const auto& d : cfg.devices)
                    if (d.id == dev_id)
                        for (const auto& a : d.applications) s.volume_overrides[a.id] = *eff.volume;
        }
        s.name += "+" + lever;
    }
    return s;
}

RunOutputs run_pipeline(const ScenarioConfig& cfg, const Resolved& resolved,
                        const engine::Scenario& scenario, std::optional<YearRange> years) {
    YearRange span = years.value_or(cfg.horizon);
    RunOutputs out{
        engine::forecast(resolved.registry, scenario, span, resolved.profiles),
        {},
        {}};
    out.indicators = control::control_series(resolved.registry, out.result, resolved.profiles,
                                             scenario, cfg.control);
    if (span.contains(cfg.capacity_baseline_year)) {
        std::map<int, double> peaks;
        for (int y = span.first; y <= span.last; ++y)
            peaks[y] = engine::peak_hour(out.result, y).volume;
        out.capacity = capacity::sweep({{scenario.name, peaks}}, cfg.capacity_baseline_year,
                                       cfg.capacity_assumptions);
    }
    return out;
}

// ---- reports ----

void write_text_file(const std::string& path, const std::string& content) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

namespace {

std::string fmt(double v) { return csv::format_number(v); }

TrafficCategory device_category(const engine::DeviceSpec& d) {
    return d.applications.empty() ? TrafficCategory::MachineLowActivity
                                  : d.applications.front().category;
}

std::string forecast_csv(const Resolved& resolved, const engine::ForecastResult& r) {
    std::ostringstream os;
    os << "year,scenario,device,application,category,hour,volume_gb_km2,density_per_km2\n";
    for (int y = r.years.first; y <= r.years.last; ++y)
        for (size_t d = 0; d < r.device_ids.size(); ++d) {
            size_t napps = r.app_ids[d].size();
            if (napps == 0) {
                for (int h = 0; h < 24; ++h)
                    os << y << ',' << r.scenario << ',' << r.device_ids[d] << ",-,"
                       << to_string(device_category(resolved.registry[d])) << ',' << h << ",0,"
                       << fmt(r.density_at(y, d, h)) << '\n';
            } else {
                for (size_t a = 0; a < napps; ++a)
                    for (int h = 0; h < 24; ++h)
                        os << y << ',' << r.scenario << ',' << r.device_ids[d] << ','
                           << r.app_ids[d][a] << ',' << to_string(r.app_categories[d][a]) << ','
                           << h << ',' << fmt(r.volume_at(y, d, a, h)) << ','
                           << fmt(r.density_at(y, d, h)) << '\n';
            }
        }
    return os.str();
}

std::string control_csv(const control::ControlIndicators& ind) {
    std::set<std::string> devs;
    for (const auto& y : ind.per_year) {
        for (const auto& [id, v] : y.attachment_contrib) devs.insert(id);
        for (const auto& [id, v] : y.handover_contrib) devs.insert(id);
    }
    std::ostringstream os;
    os << "year,scenario,indicator,value,unit";
    for (const auto& d : devs) os << ",contrib_" << d;
    os << '\n';
    for (const auto& y : ind.per_year) {
        os << y.year << ',' << ind.scenario << ",attachment_rate," << fmt(y.attachment)
           << ",requests_per_hour_km2";
        for (const auto& d : devs) {
            auto it = y.attachment_contrib.find(d);
            os << ',' << (it == y.attachment_contrib.end() ? "0" : fmt(it->second));
        }
        os << '\n';
        os << y.year << ',' << ind.scenario << ",handover_rate," << fmt(y.handover)
           << ",handovers_per_hour_km2";
        for (const auto& d : devs) {
            auto it = y.handover_contrib.find(d);
            os << ',' << (it == y.handover_contrib.end() ? "0" : fmt(it->second));
        }
        os << '\n';
    }
    return os.str();
}

std::string capacity_csv(const capacity::CrossingReport& rep) {
    std::ostringstream os;
    os << "scenario,assumption,multiplier,crossing_year\n";
    for (const auto& row : rep.rows)
        os << row.scenario << ',' << row.assumption << ',' << fmt(row.multiplier) << ','
           << (row.year ? std::to_string(*row.year) : std::string("none")) << '\n';
    return os.str();
}

std::string summary_table(const ScenarioConfig& cfg, const engine::ForecastResult& r) {
    int y0 = cfg.capacity_baseline_year;
    if (!r.years.contains(y0)) y0 = r.years.first;
    int y1 = r.years.last;
    int span = std::max(1, y1 - y0);
    auto roll0 = engine::category_rollup(r, y0);
    auto roll1 = engine::category_rollup(r, y1);
    std::ostringstream os;
    os << "daily user volume, scenario " << r.scenario << " [GB/km2]\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-34s %14d %7s %14d %7s %7s\n", "category / application", y0,
                  "share", y1, "share", "cagr");
    os << line;
    auto pct = [](double x) { return x * 100.0; };
    for (TrafficCategory c : {TrafficCategory::HighPriority, TrafficCategory::Human,
                              TrafficCategory::MachineHighActivity,
                              TrafficCategory::MachineLowActivity}) {
        double v0 = roll0.totals.at(c), v1 = roll1.totals.at(c);
        double g = v0 > 0 ? engine::cagr(v0, v1, span) : 0.0;
        std::snprintf(line, sizeof line, "%-34s %14.0f %6.0f%% %14.0f %6.0f%% %6.0f%%\n",
                      to_string(c), v0, pct(roll0.shares.at(c)), v1, pct(roll1.shares.at(c)),
                      pct(g));
        os << line;
        for (size_t d = 0; d < r.device_ids.size(); ++d)
            for (size_t a = 0; a < r.app_ids[d].size(); ++a) {
                if (r.app_categories[d][a] != c) continue;
                double a0 = 0, a1 = 0;
                for (int h = 0; h < 24; ++h) {
                    a0 += r.volume_at(y0, d, a, h);
                    a1 += r.volume_at(y1, d, a, h);
                }
                double ag = a0 > 0 ? engine::cagr(a0, a1, span) : 0.0;
                std::snprintf(line, sizeof line, "  %-32s %14.0f %6.1f%% %14.0f %6.1f%% %6.0f%%\n",
                              r.app_ids[d][a].c_str(), a0,
                              pct(roll0.grand_total > 0 ? a0 / roll0.grand_total : 0), a1,
                              pct(roll1.grand_total > 0 ? a1 / roll1.grand_total : 0), pct(ag));
                os << line;
            }
    }
    double g = engine::cagr(roll0.grand_total, roll1.grand_total, span);
    std::snprintf(line, sizeof line, "%-34s %14.0f %6.0f%% %14.0f %6.0f%% %6.0f%%\n", "total",
                  roll0.grand_total, 100.0, roll1.grand_total, 100.0, pct(g));
    os << line;

    auto p0 = engine::peak_hour(r, y0);
    auto p1 = engine::peak_hour(r, y1);
    std::snprintf(line, sizeof line,
                  "peak hour %02d-%02dh: %.0f GB/km2 (%.1f%%) in %d; %.0f GB/km2 (%.1f%%) in %d\n",
                  p1.hour, p1.hour + 1, p0.volume, 100 * p0.share, y0, p1.volume, 100 * p1.share,
                  y1);
    os << line;

    os << "\ndaily median device density [devices/km2]\n";
    auto m0 = engine::median_density(r, y0);
    auto m1 = engine::median_density(r, y1);
    for (size_t d = 0; d < r.device_ids.size(); ++d) {
        const std::string& id = r.device_ids[d];
        std::snprintf(line, sizeof line, "  %-32s %14.1f %14.1f\n", id.c_str(),
                      m0.per_device.at(id), m1.per_device.at(id));
        os << line;
    }
    std::snprintf(line, sizeof line, "  %-32s %14.1f %14.1f\n", "total", m0.total, m1.total);
    os << line;
    os << "area: " << fmt(cfg.area.area_km2) << " km2; absolute daily total " << y1 << ": "
       << fmt(roll1.grand_total * cfg.area.area_km2) << " GB\n";
    return os.str();
}

json plot_data(const engine::ForecastResult& r) {
    json j;
    j["scenario"] = r.scenario;
    json years = json::array();
    for (int y = r.years.first; y <= r.years.last; ++y) years.push_back(y);
    j["years"] = years;
    json hv = json::object(), hd = json::object();
    for (int y = r.years.first; y <= r.years.last; ++y) {
        json yv = json::object(), yd = json::object();
        for (size_t d = 0; d < r.device_ids.size(); ++d) {
            for (size_t a = 0; a < r.app_ids[d].size(); ++a) {
                json arr = json::array();
                for (int h = 0; h < 24; ++h) arr.push_back(r.volume_at(y, d, a, h));
                yv[r.app_ids[d][a]] = arr;
            }
            json darr = json::array();
            for (int h = 0; h < 24; ++h) darr.push_back(r.density_at(y, d, h));
            yd[r.device_ids[d]] = darr;
        }
        hv[std::to_string(y)] = yv;
        hd[std::to_string(y)] = yd;
    }
    j["hourly_volume_gb_km2"] = hv;
    j["hourly_density_per_km2"] = hd;
    return j;
}

json resolved_params(const ScenarioConfig& cfg, const Resolved& resolved,
                     const engine::Scenario& scenario, const engine::ForecastResult& r) {
    json j;
    j["scenario"] = scenario.name;
    json devs = json::object();
    for (const auto& dev : resolved.registry) {
        EstimateKind est = scenario.penetration_estimate(dev.id);
        const auto& series = dev.series_for(est);
        json dj;
        dj["estimate"] = to_string(series.kind);
        json vals = json::object();
        for (int y = r.years.first; y <= r.years.last; ++y)
            vals[std::to_string(y)] = series.at(y);
        dj["penetration"] = vals;
        json apps = json::object();
        for (const auto& app : dev.applications) {
            EstimateKind ve = scenario.volume_estimate(app.id);
            json aj;
            aj["estimate"] = to_string(ve);
            json av = json::object();
            for (int y = r.years.first; y <= r.years.last; ++y)
                av[std::to_string(y)] = app.category == TrafficCategory::MachineLowActivity
                                            ? 0.0
                                            : app.growth.value(y, ve);
            aj["gb_per_day_per_device"] = av;
            apps[app.id] = aj;
        }
        dj["applications"] = apps;
        devs[dev.id] = dj;
    }
    j["devices"] = devs;
    EstimateKind kind = scenario.default_estimate;
    json tr = json::object(), l = json::object();
    for (int y = r.years.first; y <= r.years.last; ++y) {
        tr[std::to_string(y)] = cfg.control.inter_request_hours.at(y, kind);
        l[std::to_string(y)] = cfg.control.inter_site_km.at(y, kind);
    }
    j["control"] = {{"inter_request_hours", tr},
                    {"inter_site_km", l},
                    {"min_inter_request_hours", cfg.control.t_r_min_hours}};
    return j;
}

} // namespace

void emit_report(const ScenarioConfig& cfg, const Resolved& resolved,
                 const engine::Scenario& scenario, const RunOutputs& run,
                 const std::string& out_dir) {
    fs::create_directories(out_dir);
    auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };
    std::string tag = scenario.name;
    write_text_file(path("forecast_" + tag + ".csv"), forecast_csv(resolved, run.result));
    write_text_file(path("control_" + tag + ".csv"), control_csv(run.indicators));
    write_text_file(path("capacity_" + tag + ".csv"), capacity_csv(run.capacity));
    write_text_file(path("summary_" + tag + ".txt"), summary_table(cfg, run.result));
    write_text_file(path("plot_data_" + tag + ".json"), plot_data(run.result).dump(2) + "\n");
    write_text_file(path("resolved_params_" + tag + ".json"),
                    resolved_params(cfg, resolved, scenario, run.result).dump(2) + "\n");
}

// ---- golden regression ----

namespace {

struct AppLocator {
    size_t dev = 0, app = 0;
    bool found = false;
};

AppLocator find_app(const engine::ForecastResult& r, const std::string& app_id) {
    for (size_t d = 0; d < r.device_ids.size(); ++d)
        for (size_t a = 0; a < r.app_ids[d].size(); ++a)
            if (r.app_ids[d][a] == app_id) return {d, a, true};
    return {};
}

double app_daily(const engine::ForecastResult& r, int year, const std::string& app_id) {
    auto loc = find_app(r, app_id);
    if (!loc.found) throw ModelError("golden: unknown application '" + app_id + "'");
    double s = 0;
    for (int h = 0; h < 24; ++h) s += r.volume_at(year, loc.dev, loc.app, h);
    return s;
}

double row_value(const engine::ForecastResult& r, int year, const std::string& row,
                 const std::string& kind) {
    if (kind == "total") return r.daily_total(year);
    if (kind == "category") {
        auto roll = engine::category_rollup(r, year);
        for (const auto& [c, v] : roll.totals)
            if (row == to_string(c)) return v;
        throw ModelError("golden: unknown category '" + row + "'");
    }
    return app_daily(r, year, row);
}

} // namespace

std::vector<GoldenDiff> golden_check(const GoldenInputs& in, const std::string& golden_dir) {
    std::vector<GoldenDiff> diffs;
    auto gpath = [&](const std::string& name) { return (fs::path(golden_dir) / name).string(); };

    // penetration table at displayed precision
    {
        csv::Table t = csv::read_file(gpath("table5_penetration.csv"));
        int cd = t.column("device"), ce = t.column("estimate"), cy = t.column("year"),
            cv = t.column("value"), cp = t.column("display_precision"),
            ck = t.column("tolerance_kind"), ct = t.column("tolerance");
        for (const auto& row : t.rows) {
            const std::string& dev_id = row[static_cast<size_t>(cd)];
            auto est = row[static_cast<size_t>(ce)] == "low"    ? EstimateKind::Low
                       : row[static_cast<size_t>(ce)] == "high" ? EstimateKind::High
                                                                : EstimateKind::Medium;
            int year = static_cast<int>(csv::parse_number(row[static_cast<size_t>(cy)], "table5"));
            double expected = csv::parse_number(row[static_cast<size_t>(cv)], "table5");
            double prec = csv::parse_number(row[static_cast<size_t>(cp)], "table5");
            double tol = csv::parse_number(row[static_cast<size_t>(ct)], "table5");
            bool abs_rule = row[static_cast<size_t>(ck)] == "abs";
            const engine::DeviceSpec* dev = nullptr;
            for (const auto& d : in.resolved->registry)
                if (d.id == dev_id) dev = &d;
            if (!dev) {
                diffs.push_back({"table5_penetration", dev_id, expected, 0, "device missing"});
                continue;
            }
            double actual = dev->series_for(est).at(year);
            bool ok;
            if (abs_rule) {
                ok = std::abs(actual - expected) <= tol + 1e-12;
            } else {
                double rounded = std::round(actual / prec) * prec;
                ok = std::abs(rounded - expected) <= tol * (1 + 1e-9);
            }
            if (!ok)
                diffs.push_back({"table5_penetration",
                                 dev_id + "/" + row[static_cast<size_t>(ce)] + "/" +
                                     std::to_string(year),
                                 expected, actual,
                                 abs_rule ? "abs tolerance" : "displayed precision"});
        }
    }

    auto rel_check = [&](const std::string& table, const std::string& cell, double expected,
                         double actual, double tol) {
        if (expected == 0 ? std::abs(actual) > 1e-9
                          : std::abs(actual - expected) > tol * std::abs(expected))
            diffs.push_back({table, cell, expected, actual, "relative tolerance"});
    };

    // daily volumes
    {
        csv::Table t = csv::read_file(gpath("annex_b1_daily_volume.csv"));
        int cr = t.column("row"), ck = t.column("kind"), c19 = t.column("y2019"),
            c30s = t.column("y2030_slow"), c30r = t.column("y2030_rapid"),
            ctol = t.column("tolerance_rel");
        for (const auto& row : t.rows) {
            const std::string& name = row[static_cast<size_t>(cr)];
            const std::string& kind = row[static_cast<size_t>(ck)];
            double tol = csv::parse_number(row[static_cast<size_t>(ctol)], "b1");
            rel_check("annex_b1_daily_volume", name + "/2019",
                      csv::parse_number(row[static_cast<size_t>(c19)], "b1"),
                      row_value(*in.slow, 2019, name, kind), tol);
            rel_check("annex_b1_daily_volume", name + "/2030-slow",
                      csv::parse_number(row[static_cast<size_t>(c30s)], "b1"),
                      row_value(*in.slow, 2030, name, kind), tol);
            rel_check("annex_b1_daily_volume", name + "/2030-rapid",
                      csv::parse_number(row[static_cast<size_t>(c30r)], "b1"),
                      row_value(*in.rapid, 2030, name, kind), tol);
        }
    }

    // peak-hour volumes
    {
        csv::Table t = csv::read_file(gpath("annex_b2_peak_volume.csv"));
        int c19 = t.column("y2019"), c30s = t.column("y2030_slow"), c30r = t.column("y2030_rapid"),
            ctol = t.column("tolerance_rel");
        for (const auto& row : t.rows) {
            double tol = csv::parse_number(row[static_cast<size_t>(ctol)], "b2");
            rel_check("annex_b2_peak_volume", "total/2019",
                      csv::parse_number(row[static_cast<size_t>(c19)], "b2"),
                      engine::peak_hour(*in.slow, 2019).volume, tol);
            rel_check("annex_b2_peak_volume", "total/2030-slow",
                      csv::parse_number(row[static_cast<size_t>(c30s)], "b2"),
                      engine::peak_hour(*in.slow, 2030).volume, tol);
            rel_check("annex_b2_peak_volume", "total/2030-rapid",
                      csv::parse_number(row[static_cast<size_t>(c30r)], "b2"),
                      engine::peak_hour(*in.rapid, 2030).volume, tol);
        }
    }

    // static densities
    {
        csv::Table t = csv::read_file(gpath("static_density.csv"));
        int cd = t.column("device"), cy = t.column("year"), cs = t.column("scenario"),
            cv = t.column("density_per_km2"), ctol = t.column("tolerance_rel");
        for (const auto& row : t.rows) {
            const engine::ForecastResult& r =
                row[static_cast<size_t>(cs)] == "rapid" ? *in.rapid : *in.slow;
            int year = static_cast<int>(csv::parse_number(row[static_cast<size_t>(cy)], "static"));
            size_t d = r.device_index(row[static_cast<size_t>(cd)]);
            double actual = r.device_density_profile(year, d).median();
            rel_check("static_density",
                      row[static_cast<size_t>(cd)] + "/" + std::to_string(year) + "/" +
                          row[static_cast<size_t>(cs)],
                      csv::parse_number(row[static_cast<size_t>(cv)], "static"), actual,
                      csv::parse_number(row[static_cast<size_t>(ctol)], "static"));
        }
    }

    // per-camera daily volume
    {
        csv::Table t = csv::read_file(gpath("per_camera_volume.csv"));
        int cy = t.column("year"), cs = t.column("scenario"), cv = t.column("gb_per_day"),
            ctol = t.column("tolerance_rel");
        const volume::GrowthSpec* camera = nullptr;
        for (const auto& d : in.resolved->registry)
            for (const auto& a : d.applications)
                if (a.growth.kind == volume::GrowthKind::CameraHours) camera = &a.growth;
        for (const auto& row : t.rows) {
            if (!camera) {
                diffs.push_back({"per_camera_volume", "camera", 0, 0, "no camera application"});
                break;
            }
            int year = static_cast<int>(csv::parse_number(row[static_cast<size_t>(cy)], "camera"));
            EstimateKind est = row[static_cast<size_t>(cs)] == "rapid" ? EstimateKind::High
                                                                       : EstimateKind::Low;
            rel_check("per_camera_volume",
                      std::to_string(year) + "/" + row[static_cast<size_t>(cs)],
                      csv::parse_number(row[static_cast<size_t>(cv)], "camera"),
                      camera->value(year, est),
                      csv::parse_number(row[static_cast<size_t>(ctol)], "camera"));
        }
    }

    return diffs;
}

} // namespace traffic::io
