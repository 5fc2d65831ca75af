#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slarag/agents.hpp"
#include "slarag/relevance.hpp"
#include "slarag/rng.hpp"

namespace slarag {

enum class ArbitrationKind {
    RandomWithThreshold,        // vote_with_thresh
    MostRelevant,               // vote_most_relevant
    MostRelevantWithThreshold,  // vote_most_relevant_with_thresh
    RandomNoThreshold,          // ablation: random pick, no gate
};

std::string_view to_string(ArbitrationKind kind);
std::optional<ArbitrationKind> arbitration_kind_from_string(std::string_view name);

bool uses_gate(ArbitrationKind kind);
bool uses_scorer(ArbitrationKind kind);

enum class Rounding { Floor, Ceil };

std::string_view to_string(Rounding r);
std::optional<Rounding> rounding_from_string(std::string_view name);

struct ArbitrationStrategy {
    ArbitrationKind kind = ArbitrationKind::RandomWithThreshold;
    double threshold = 0.5;
    Rounding rounding = Rounding::Floor;

    void validate() const;  // InvalidThreshold unless 0 < threshold < 1
};

enum class Decision { Answered, NegativeResult };

std::string_view to_string(Decision d);

struct ArbitrationOutcome {
    Decision decision = Decision::NegativeResult;
    std::optional<CandidateResponse> selected;
    std::size_t k = 0;
    std::size_t affirmative_count = 0;
    double arbitration_cost = 0.0;
    double arbitration_latency_ms = 0.0;
};

std::vector<CandidateResponse> affirmative_subset(std::span<const CandidateResponse> candidates);

struct GateResult {
    bool pass;
    std::size_t k;
};

/// k = floor(T*|C|) (or ceil), pass iff affirmative_count >= k.
GateResult threshold_gate(std::size_t c_size, std::size_t affirmative_count, double threshold,
                          Rounding rounding = Rounding::Floor);

// Scores one candidate for the relevance-based strategies.
using CandidateScorer = std::function<double(std::string_view query, const CandidateResponse&)>;

// Adapts a text scorer: scores the candidate's answer text.
CandidateScorer answer_scorer(const RelevanceScorer& scorer);

/// Applies the gate and the selection rule of `strategy` to the candidate set.
/// Random picks draw from `rng`; relevance picks take the argmax score with
/// ties going to the smaller agent_id. Throws EmptyCandidateSet for an empty
/// set and MissingScorer when a relevance strategy has no scorer.
ArbitrationOutcome arbitrate(std::string_view query, std::span<const CandidateResponse> candidates,
                             const ArbitrationStrategy& strategy, const CandidateScorer& scorer, RngStream& rng);

ArbitrationOutcome arbitrate(std::string_view query, std::span<const CandidateResponse> candidates,
                             const ArbitrationStrategy& strategy, const RelevanceScorer* scorer, RngStream& rng);

} // namespace slarag
