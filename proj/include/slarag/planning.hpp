#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slarag/accounting.hpp"
#include "slarag/agents.hpp"
#include "slarag/arbitration.hpp"
#include "slarag/dataset.hpp"
#include "slarag/evalsim.hpp"
#include "slarag/sla.hpp"

namespace slarag {

// ---------------------------------------------------------------------------
// Intent detection
// ---------------------------------------------------------------------------

struct IntentRule {
    std::string pattern;  // ECMAScript regex, matched against the lowercased query
    IntentLabel label;
};

// First matching rule wins; `default_label` applies when none match.
class IntentRulePack {
public:
    IntentRulePack(std::vector<IntentRule> rules, IntentLabel default_label);

    static IntentRulePack defaults();

    IntentLabel classify(std::string_view query) const;

    const std::vector<IntentRule>& rules() const { return rules_; }
    IntentLabel default_label() const { return default_label_; }

private:
    std::vector<IntentRule> rules_;
    std::vector<std::regex> compiled_;
    IntentLabel default_label_;
};

IntentLabel classify_intent(std::string_view query, const IntentRulePack& rules);

// ---------------------------------------------------------------------------
// Configuration fingerprints and calibration
// ---------------------------------------------------------------------------

struct Environment {
    std::set<std::string> available_stores;
    bool external_api_up = true;
    bool local_model_available = true;
    double cost_multiplier = 1.0;
};

// Identifies an ensemble for calibration lookup. Single-agent fingerprints
// ignore threshold and arbitration kind, which cannot change the result.
struct ConfigFingerprint {
    std::vector<PreprocessKind> strategies;  // sorted multiset
    std::size_t ensemble_size = 1;
    double threshold = 0.5;
    ArbitrationKind arbitration = ArbitrationKind::RandomWithThreshold;
    Rounding rounding = Rounding::Floor;

    static ConfigFingerprint of(const std::vector<AgentConfig>& agents, const ArbitrationStrategy& arbitration);
    static ConfigFingerprint parse(std::string_view text);

    // e.g. "n=3|t=0.5|arb=vote_with_thresh|strategies=aggressive_threshold+threshold_control+vertical_threshold"
    std::string to_string() const;
};

struct CalibrationEntry {
    ConfigFingerprint fingerprint;
    Observations measured;
    double cost = 0.0;
};

class CalibrationTable {
public:
    CalibrationTable() = default;
    explicit CalibrationTable(std::vector<CalibrationEntry> entries);  // ValidationError on duplicate fingerprints

    const CalibrationEntry* find(const ConfigFingerprint& fp) const;
    const std::vector<CalibrationEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<CalibrationEntry> entries_;
    std::map<std::string, std::size_t> index_;
};

/// Reads the report CSV layout: experiment_version (a fingerprint), recall,
/// precision, f1, hallucination_rate, incongruent_response_rate, mean_cost,
/// and optionally p50_latency_ms, answered_fraction. '#' lines are skipped.
CalibrationTable read_calibration_csv(std::istream& in);
CalibrationTable load_calibration_csv(const std::filesystem::path& path);

// Monte Carlo fallback used when a fingerprint has no calibration row.
struct MonteCarloEstimator {
    std::size_t trials = 20000;
    std::uint64_t seed = 0;
    ScorerModel scorer_model = ScorerModel::OracleFavorsCorrect;
    double p_global_context = 1.0;
    const AccountingParams* accounting = nullptr;  // for cost/latency predictions
};

struct Estimate {
    Observations attributes;
    double cost = 0.0;
};

/// Calibration row when present (verbatim), otherwise the Monte Carlo
/// fallback over the agents' profiles. EstimationUnavailable when neither works.
Estimate estimate_config(const std::vector<AgentConfig>& agents, const ArbitrationStrategy& arbitration,
                         const CalibrationTable& calibration, const MonteCarloEstimator* fallback);

// ---------------------------------------------------------------------------
// Planner
// ---------------------------------------------------------------------------

struct SearchGrid {
    std::vector<AgentConfig> agent_pool;
    std::vector<std::size_t> ensemble_sizes;
    std::vector<double> thresholds;
    std::vector<ArbitrationKind> arbitration_kinds;
    Rounding rounding = Rounding::Floor;
};

struct EnsembleConfig {
    IntentLabel intent = IntentLabel::DirectlyAnswerable;
    std::vector<AgentConfig> agents;
    ArbitrationStrategy arbitration;
    Observations predicted;
    double predicted_cost = 0.0;
    ConfigFingerprint fingerprint;
};

// One enumerated point of the grid before estimation.
struct PlanCandidate {
    std::vector<AgentConfig> agents;
    ArbitrationStrategy arbitration;
    ConfigFingerprint fingerprint;
};

/// Every distinct fingerprint the grid can produce under `env`, in a
/// deterministic order. Agents whose policy needs an unavailable store, or
/// that need the external API while it is down, are dropped first.
std::vector<PlanCandidate> enumerate_candidates(const SearchGrid& grid, const Environment& env);

/// Exhaustive search: the cheapest candidate whose prediction satisfies every
/// SLO, ties to smaller N then the lexicographically smaller fingerprint.
/// Throws EmptySearchSpace or InfeasibleSla.
EnsembleConfig plan(IntentLabel intent, const CompositeSla& sla, const Environment& env,
                    const CalibrationTable& calibration, const SearchGrid& grid,
                    const MonteCarloEstimator* fallback = nullptr);

} // namespace slarag
