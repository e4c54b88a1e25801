#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "forecast/capacity_timing.hpp"
#include "forecast/control_needs.hpp"
#include "forecast/forecast_engine.hpp"
#include "forecast/urban_density.hpp"

namespace traffic::io {

using json = nlohmann::json;

struct PolicyEffect {
    std::optional<EstimateKind> penetration;
    std::optional<EstimateKind> volume;
};

/// Penetration model description for one device (pre-evaluation).
struct PenetrationConfig {
    enum class Model { Bass, Replacement, Coverage, Linear };
    Model model = Model::Bass;
    bool medium_only = false;

    diffusion::BassParams bass;
    std::string history_ref;

    struct ReplacementVariant {
        diffusion::YearSeries sales;
        diffusion::YearSeries share = diffusion::YearSeries::constant_of(1.0);
        int start_year = 0;
    };
    std::map<EstimateKind, ReplacementVariant> replacement;
    int lifetime_years = 0;
    int start_year = 0;
    diffusion::StockModel::BodyKind body_kind = diffusion::StockModel::BodyKind::Population;
    double body_size = 0, initial_stock = 0, annual_net_growth = 0, annual_growth_rate = 0;
    int body_base_year = 0;

    std::map<EstimateKind, diffusion::RolloutSchedule> coverage;

    struct LinearSpec {
        double base = 0, target = 0;
        int start_year = 0, duration_years = 1;
    };
    std::map<EstimateKind, LinearSpec> linear;
};

struct DeviceConfig {
    std::string id;
    std::string adopting_body;
    engine::Binding density_binding = engine::Binding::ActivePopulation;
    engine::ControlRole control_role = engine::ControlRole::None;
    std::optional<engine::Binding> handover_binding;
    PenetrationConfig penetration;
    std::vector<engine::ApplicationSpec> applications;
};

/// Machine form of the study assumptions: area facts, transport parameters,
/// device registry with low/high variants, control schedules, capacity
/// assumptions, and policy levers.
struct ScenarioConfig {
    std::string name;
    YearRange horizon;
    density::AreaProfile area;
    density::TransportParams transport;
    double balance_tolerance = 0.01;
    std::string crossing_counts_path;
    std::map<std::string, std::string> profile_paths;
    std::map<std::string, std::string> history_paths;
    control::ControlParams control;
    int capacity_baseline_year = 0;
    std::vector<capacity::CapacityAssumption> capacity_assumptions;
    std::map<std::string, std::map<std::string, PolicyEffect>> policies;
    std::vector<DeviceConfig> devices;

    std::string base_dir;

    // loaded data files
    density::CrossingCounts crossings;
    std::map<std::string, HourlyProfile> usage_profiles;
    std::map<std::string, std::map<int, double>> adoption_histories;
};

/// Parses, loads referenced data files, and validates everything; throws
/// ValidationError carrying the full issue list.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig load_config_json(const json& j, const std::string& base_dir);

/// Inverse of parsing; load(save(cfg)) is field-for-field equivalent.
json save_config(const ScenarioConfig& cfg);

struct Resolved {
    std::vector<engine::DeviceSpec> registry;
    engine::UrbanProfiles profiles;
};

/// Evaluates penetration models over the horizon and synthesizes the urban
/// density profiles.
Resolved resolve(const ScenarioConfig& cfg);

/// slow / rapid, optionally shifted by named policy levers.
engine::Scenario make_scenario(const ScenarioConfig& cfg, const std::string& name,
                               const std::vector<std::string>& active_policies = {});

struct RunOutputs {
    engine::ForecastResult result;
    control::ControlIndicators indicators;
    capacity::CrossingReport capacity;
};

RunOutputs run_pipeline(const ScenarioConfig& cfg, const Resolved& resolved,
                        const engine::Scenario& scenario, std::optional<YearRange> years = {});

/// Writes forecast CSV (long format, bit-stable ordering), control and
/// capacity CSVs, plot-ready stacked data, a readable summary table, and an
/// echo of the resolved parameter set.
void emit_report(const ScenarioConfig& cfg, const Resolved& resolved,
                 const engine::Scenario& scenario, const RunOutputs& run,
                 const std::string& out_dir);

struct GoldenDiff {
    std::string table;
    std::string cell;
    double expected = 0;
    double actual = 0;
    std::string note;
};

struct GoldenInputs {
    const ScenarioConfig* cfg = nullptr;
    const Resolved* resolved = nullptr;
    const engine::ForecastResult* slow = nullptr;
    const engine::ForecastResult* rapid = nullptr;
};

/// Compares a run against the golden transcriptions; per-cell tolerances come
/// from the golden files themselves.
std::vector<GoldenDiff> golden_check(const GoldenInputs& inputs, const std::string& golden_dir);

void write_text_file(const std::string& path, const std::string& content);

} // namespace traffic::io
