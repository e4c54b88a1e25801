#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "forecast/cli_io.hpp"
#include "forecast/csv.hpp"

namespace fs = std::filesystem;
using namespace traffic;

namespace {

constexpr int EXIT_VALIDATION = 1;
constexpr int EXIT_GOLDEN = 2;
constexpr int EXIT_IO = 3;

std::optional<YearRange> parse_years(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto sep = s.find(':');
    if (sep == std::string::npos) throw ValidationError("--years expects FIRST:LAST");
    YearRange r{std::stoi(s.substr(0, sep)), std::stoi(s.substr(sep + 1))};
    r.validate();
    return r;
}

int run_fit_bass(const std::string& history_path, const std::string& project) {
    auto history = csv::read_year_series(history_path);
    auto fit = diffusion::bass_fit(history);
    std::cout << "p " << csv::format_number(fit.params.p) << "\n"
              << "q " << csv::format_number(fit.params.q) << "\n"
              << "m " << csv::format_number(fit.params.m) << "\n"
              << "t0 " << csv::format_number(fit.params.t0) << "\n"
              << "residual_norm " << csv::format_number(fit.residual_norm) << "\n";
    if (auto years = parse_years(project)) {
        auto series = diffusion::bass_project(fit.params, *years);
        std::cout << "year,value\n";
        for (const auto& [y, v] : series.values)
            std::cout << y << ',' << csv::format_number(v) << "\n";
    }
    return 0;
}

int run_density(const io::ScenarioConfig& cfg, const std::string& out_dir) {
    io::Resolved resolved = io::resolve(cfg);
    using engine::Binding;
    HourlyProfile pattern = density::included_people_pattern(cfg.crossings);
    std::ostringstream os;
    os << "hour,included_people_pattern,active_population,working_population,"
          "non_working_population,moving_population,moving_cars,moving_buses,moving_bikes\n";
    auto pop = density::active_population(cfg.area, pattern);
    for (int h = 0; h < 24; ++h) {
        os << h << ',' << csv::format_number(pattern[h]) << ','
           << csv::format_number(pop.active[h]) << ',' << csv::format_number(pop.working[h]) << ','
           << csv::format_number(pop.non_working[h]) << ','
           << csv::format_number(resolved.profiles.binding(Binding::MovingPopulation)[h]) << ','
           << csv::format_number(resolved.profiles.binding(Binding::MovingCars)[h]) << ','
           << csv::format_number(resolved.profiles.binding(Binding::MovingBuses)[h]) << ','
           << csv::format_number(resolved.profiles.binding(Binding::MovingBikes)[h]) << '\n';
    }
    io::write_text_file((fs::path(out_dir) / "urban_density.csv").string(), os.str());
    std::cout << "wrote " << (fs::path(out_dir) / "urban_density.csv").string() << "\n";
    return 0;
}

int run_forecast_cmd(const io::ScenarioConfig& cfg, const std::string& scenario_name,
                     const std::vector<std::string>& policies, const std::string& years,
                     const std::string& out_dir) {
    io::Resolved resolved = io::resolve(cfg);
    auto scenario = io::make_scenario(cfg, scenario_name, policies);
    auto run = io::run_pipeline(cfg, resolved, scenario, parse_years(years));
    io::emit_report(cfg, resolved, scenario, run, out_dir);
    auto roll = engine::category_rollup(run.result, run.result.years.last);
    std::cout << "scenario " << scenario.name << ": " << run.result.years.last
              << " daily total " << csv::format_number(roll.grand_total) << " GB/km2\n"
              << "reports in " << out_dir << "\n";
    return 0;
}

int run_control(const io::ScenarioConfig& cfg, const std::string& scenario_name,
                const std::vector<std::string>& policies, const std::string& years,
                const std::string& out_dir) {
    io::Resolved resolved = io::resolve(cfg);
    auto scenario = io::make_scenario(cfg, scenario_name, policies);
    auto run = io::run_pipeline(cfg, resolved, scenario, parse_years(years));
    io::emit_report(cfg, resolved, scenario, run, out_dir);
    const auto& first = run.indicators.per_year.front();
    const auto& last = run.indicators.per_year.back();
    std::cout << "attachment rate " << first.year << " -> " << last.year << ": "
              << csv::format_number(first.attachment) << " -> "
              << csv::format_number(last.attachment) << " requests/h/km2\n"
              << "handover rate: " << csv::format_number(first.handover) << " -> "
              << csv::format_number(last.handover) << " handovers/h/km2\n";
    return 0;
}

int run_capacity(const io::ScenarioConfig& cfg, const std::string& years,
                 const std::string& out_dir) {
    io::Resolved resolved = io::resolve(cfg);
    std::map<std::string, std::map<int, double>> peaks;
    for (const char* name : {"slow", "rapid"}) {
        auto scenario = io::make_scenario(cfg, name);
        auto run = io::run_pipeline(cfg, resolved, scenario, parse_years(years));
        for (int y = run.result.years.first; y <= run.result.years.last; ++y)
            peaks[name][y] = engine::peak_hour(run.result, y).volume;
    }
    auto report =
        capacity::sweep(peaks, cfg.capacity_baseline_year, cfg.capacity_assumptions);
    std::ostringstream os;
    os << "scenario,assumption,multiplier,crossing_year\n";
    for (const auto& row : report.rows) {
        os << row.scenario << ',' << row.assumption << ',' << csv::format_number(row.multiplier)
           << ',' << (row.year ? std::to_string(*row.year) : std::string("none")) << '\n';
    }
    io::write_text_file((fs::path(out_dir) / "capacity_sweep.csv").string(), os.str());
    std::cout << os.str();
    return 0;
}

int run_check(const io::ScenarioConfig& cfg, const std::string& golden,
              const std::string& out_dir) {
    io::Resolved resolved = io::resolve(cfg);
    auto slow_run = io::run_pipeline(cfg, resolved, io::make_scenario(cfg, "slow"));
    auto rapid_run = io::run_pipeline(cfg, resolved, io::make_scenario(cfg, "rapid"));
    std::string golden_dir =
        golden.empty() ? (fs::path(cfg.base_dir) / "golden").string() : golden;
    io::GoldenInputs inputs{&cfg, &resolved, &slow_run.result, &rapid_run.result};
    auto diffs = io::golden_check(inputs, golden_dir);
    std::ostringstream os;
    os << "table,cell,expected,actual,note\n";
    for (const auto& d : diffs)
        os << d.table << ',' << d.cell << ',' << csv::format_number(d.expected) << ','
           << csv::format_number(d.actual) << ',' << d.note << '\n';
    if (!out_dir.empty())
        io::write_text_file((fs::path(out_dir) / "golden_diffs.csv").string(), os.str());
    if (diffs.empty()) {
        std::cout << "golden check: all cells match\n";
        return 0;
    }
    std::cout << "golden check: " << diffs.size() << " differing cell(s)\n" << os.str();
    return EXIT_GOLDEN;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"urban wireless traffic forecast"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", years, scenario = "slow", history_path,
                project_years, golden_dir;
    std::vector<std::string> policies;

    auto add_common = [&](CLI::App* cmd, bool with_scenario) {
        cmd->add_option("--config", config_path, "scenario configuration file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--years", years, "override horizon, FIRST:LAST");
        if (with_scenario) {
            cmd->add_option("--scenario", scenario, "slow or rapid");
            cmd->add_option("--policy", policies, "apply a named policy lever (repeatable)");
        }
    };

    auto* fit = app.add_subcommand("fit-bass", "fit a diffusion curve to an adoption history");
    fit->add_option("--history", history_path, "year,value csv")->required();
    fit->add_option("--project", project_years, "also project the fit, FIRST:LAST");

    auto* dens = app.add_subcommand("density", "synthesize hourly urban density profiles");
    add_common(dens, false);

    auto* fc = app.add_subcommand("forecast", "run the full traffic forecast");
    add_common(fc, true);

    auto* ctrl = app.add_subcommand("control", "peak-hour control-traffic indicators");
    add_common(ctrl, true);

    auto* cap = app.add_subcommand("capacity", "capacity-exhaustion timing sweep");
    add_common(cap, false);

    auto* rep = app.add_subcommand("report", "emit report files for one scenario");
    add_common(rep, true);

    auto* chk = app.add_subcommand("check", "golden regression against the bundled tables");
    add_common(chk, false);
    chk->add_option("--golden", golden_dir, "golden table directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return run_fit_bass(history_path, project_years);
        io::ScenarioConfig cfg = io::load_config(config_path);
        if (dens->parsed()) return run_density(cfg, out_dir);
        if (fc->parsed() || rep->parsed())
            return run_forecast_cmd(cfg, scenario, policies, years, out_dir);
        if (ctrl->parsed()) return run_control(cfg, scenario, policies, years, out_dir);
        if (cap->parsed()) return run_capacity(cfg, years, out_dir);
        if (chk->parsed()) return run_check(cfg, golden_dir, out_dir);
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return EXIT_IO;
    } catch (const ValidationError& e) {
        std::cerr << "validation failed:\n";
        for (const auto& issue : e.issues) std::cerr << "  - " << issue << "\n";
        return EXIT_VALIDATION;
    } catch (const ForecastError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_VALIDATION;
    }
    return 0;
}
