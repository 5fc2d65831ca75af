#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slarag/arbitration.hpp"
#include "slarag/dataset.hpp"
#include "slarag/profile.hpp"

namespace slarag {

struct MetricCounts {
    std::size_t answers_provided = 0;
    std::size_t correct = 0;
    std::size_t correct_with_context = 0;
    std::size_t hallucinations = 0;
    std::size_t incongruent = 0;
    std::size_t global_context_hits = 0;
    std::size_t total_queries = 0;

    MetricCounts& operator+=(const MetricCounts& o);
    bool operator==(const MetricCounts&) const = default;
};

struct MetricsReport {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    double hallucination_rate = 0.0;
    double incongruent_response_rate = 0.0;
    double answered_fraction = 0.0;
    // Absent for the analytic oracle, which works in expectations.
    std::optional<MetricCounts> counts;
};

enum class IrrDenominator { AnswersProvided, TotalQueries };

/// 2PR/(P+R); 0 when P+R = 0. OutOfRange unless both are in [0,1].
double f1_score(double precision, double recall);

struct QueryOutcome {
    std::string query_id;
    bool global_context_hit = false;
    Decision decision = Decision::NegativeResult;
    std::optional<AnswerQuality> quality;  // required when Answered
};

MetricsReport metrics_from_counts(const MetricCounts& counts, IrrDenominator irr = IrrDenominator::AnswersProvided);

/// Precision = correct/answered, recall = correct/global hits, HR and IRR over
/// answered (IRR over all queries when requested). Zero denominators give 0.
/// Throws DuplicateQueryId, and ValidationError for an answered outcome with
/// no quality label.
MetricsReport compute_metrics(std::span<const QueryOutcome> outcomes,
                              IrrDenominator irr = IrrDenominator::AnswersProvided);

// How relevance-based arbitration scores simulated answers.
enum class ScorerModel {
    Uniform,              // iid random scores: equivalent to a random pick
    OracleFavorsCorrect,  // a correct answer wins whenever one is present
};

std::string_view to_string(ScorerModel m);
std::optional<ScorerModel> scorer_model_from_string(std::string_view name);

struct SimulationOptions {
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
    double p_global_context = 1.0;
    IrrDenominator irr = IrrDenominator::AnswersProvided;
    unsigned threads = 1;
};

/// Simulates independent queries; every agent's outcome is drawn from its own
/// profile and the real arbitrate() picks the answer. Per-trial streams come
/// from (seed, trial index), so thread count does not change the result.
/// Throws ProfileMismatch when ensemble_size != profiles.size().
MetricsReport monte_carlo(std::span<const AgentProfile> profiles, std::size_t ensemble_size,
                          const ArbitrationStrategy& strategy, ScorerModel scorer_model,
                          const SimulationOptions& options);

inline constexpr std::size_t kMaxOracleAgents = 8;

/// Exact expectation over all 4^N joint agent outcomes. TooManyAgents above 8.
MetricsReport brute_force_ensemble_oracle(std::span<const AgentProfile> profiles, const ArbitrationStrategy& strategy,
                                          ScorerModel scorer_model, double p_global_context = 1.0,
                                          IrrDenominator irr = IrrDenominator::AnswersProvided);

} // namespace slarag
