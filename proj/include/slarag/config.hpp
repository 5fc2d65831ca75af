#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slarag/accounting.hpp"
#include "slarag/agents.hpp"
#include "slarag/arbitration.hpp"
#include "slarag/evalsim.hpp"
#include "slarag/planning.hpp"
#include "slarag/sla.hpp"

namespace slarag {

struct StoreSpec {
    std::string label;
    std::filesystem::path path;
};

struct PlannerSpec {
    std::vector<std::size_t> ensemble_sizes;
    std::vector<double> thresholds;
    std::vector<ArbitrationKind> arbitration_kinds;
    Rounding rounding = Rounding::Floor;
    std::optional<std::filesystem::path> calibration;
    bool monte_carlo_fallback = true;
    std::size_t fallback_trials = 20000;
    ScorerModel scorer_model = ScorerModel::OracleFavorsCorrect;
};

struct SimulationSpec {
    std::size_t trials = 100000;
    ScorerModel scorer_model = ScorerModel::OracleFavorsCorrect;
    double p_global_context = 1.0;
};

struct ScorerSpec {
    enum class Kind { Jaccard, Http };
    Kind kind = Kind::Jaccard;
    std::optional<HttpEndpoint> endpoint;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::optional<std::filesystem::path> dataset;
    std::optional<std::filesystem::path> queries;
    std::vector<StoreSpec> stores;
    std::size_t embedding_dim = 64;
    std::optional<CompositeSla> sla;
    Environment environment;
    std::vector<AgentConfig> agents;
    ArbitrationStrategy arbitration;
    std::optional<PlannerSpec> planner;
    AccountingParams accounting;
    SimulationSpec simulation;
    IrrDenominator irr = IrrDenominator::AnswersProvided;
    ScorerSpec scorer;
    std::optional<IntentRulePack> intent_rules;
    std::string prompt_template{kDefaultPromptTemplate};
    std::string refusal_marker{kDefaultRefusalMarker};
    std::filesystem::path output_dir = "out";
    std::string output_format = "csv";

    // FNV-1a of the canonical config, excluding threads and output settings.
    std::string config_hash;
};

inline constexpr const char* kEnvOverridePrefix = "SLARAG_";

/// Applies SLARAG_<KEY>[__<SUBKEY>...] variables onto the raw config.
/// Values that parse as JSON are used as such, anything else as a string.
void apply_env_overrides(nlohmann::json& raw, const std::map<std::string, std::string>& env);
std::map<std::string, std::string> collect_env(char** environ_block);

/// Strict schema validation: unknown keys and bad values raise ConfigError
/// naming the field path. Relative paths resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::json& raw, const std::filesystem::path& base_dir = {});

// Reads the file, applies environment overrides, then parses.
ExperimentConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& env = {});

std::string config_hash(const nlohmann::json& raw);

} // namespace slarag
