#include "slarag/arbitration.hpp"

#include <cmath>

#include "slarag/error.hpp"

namespace slarag {

std::string_view to_string(ArbitrationKind kind) {
    switch (kind) {
        case ArbitrationKind::RandomWithThreshold:       return "vote_with_thresh";
        case ArbitrationKind::MostRelevant:              return "vote_most_relevant";
        case ArbitrationKind::MostRelevantWithThreshold: return "vote_most_relevant_with_thresh";
        case ArbitrationKind::RandomNoThreshold:         return "random_no_thresh";
    }
    return "vote_with_thresh";
}

std::optional<ArbitrationKind> arbitration_kind_from_string(std::string_view name) {
    for (auto k : {ArbitrationKind::RandomWithThreshold, ArbitrationKind::MostRelevant,
                   ArbitrationKind::MostRelevantWithThreshold, ArbitrationKind::RandomNoThreshold})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

bool uses_gate(ArbitrationKind kind) {
    return kind == ArbitrationKind::RandomWithThreshold || kind == ArbitrationKind::MostRelevantWithThreshold;
}

bool uses_scorer(ArbitrationKind kind) {
    return kind == ArbitrationKind::MostRelevant || kind == ArbitrationKind::MostRelevantWithThreshold;
}

std::string_view to_string(Rounding r) { return r == Rounding::Floor ? "floor" : "ceil"; }

std::optional<Rounding> rounding_from_string(std::string_view name) {
    if (name == "floor") return Rounding::Floor;
    if (name == "ceil") return Rounding::Ceil;
    return std::nullopt;
}

std::string_view to_string(Decision d) { return d == Decision::Answered ? "answered" : "negative"; }

void ArbitrationStrategy::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw Error(ErrorCode::InvalidThreshold, "threshold must be in (0,1)");
}

std::vector<CandidateResponse> affirmative_subset(std::span<const CandidateResponse> candidates) {
    std::vector<CandidateResponse> out;
    for (const auto& c : candidates)
        if (c.affirmative) out.push_back(c);
    return out;
}

GateResult threshold_gate(std::size_t c_size, std::size_t affirmative_count, double threshold, Rounding rounding) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw Error(ErrorCode::InvalidThreshold, "threshold must be in (0,1)");
    if (affirmative_count > c_size)
        throw Error(ErrorCode::OutOfRange, "affirmative count exceeds candidate count");
    double x = threshold * static_cast<double>(c_size);
    // 0.7 * 10 is 7.000000000000001 in binary; snap so ceil gives 7.
    double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) x = nearest;
    auto k = static_cast<std::size_t>(rounding == Rounding::Floor ? std::floor(x) : std::ceil(x));
    return {affirmative_count >= k, k};
}

CandidateScorer answer_scorer(const RelevanceScorer& scorer) {
    return [&scorer](std::string_view query, const CandidateResponse& c) {
        return scorer.score(query, c.answer_text.value_or(std::string{}));
    };
}

ArbitrationOutcome arbitrate(std::string_view query, std::span<const CandidateResponse> candidates,
                             const ArbitrationStrategy& strategy, const CandidateScorer& scorer, RngStream& rng) {
    if (candidates.empty()) throw Error(ErrorCode::EmptyCandidateSet, "no candidate responses");
    strategy.validate();
    if (uses_scorer(strategy.kind) && !scorer)
        throw Error(ErrorCode::MissingScorer, std::string(to_string(strategy.kind)) + " needs a scorer");

    ArbitrationOutcome out;
    auto affirmative = affirmative_subset(candidates);
    out.affirmative_count = affirmative.size();
    auto gate = threshold_gate(candidates.size(), affirmative.size(), strategy.threshold, strategy.rounding);
    out.k = gate.k;

    if (affirmative.empty()) return out;
    if (uses_gate(strategy.kind) && !gate.pass) return out;

    std::size_t pick = 0;
    if (uses_scorer(strategy.kind)) {
        double best = 0.0;
        for (std::size_t i = 0; i < affirmative.size(); ++i) {
            double s = scorer(query, affirmative[i]);
            affirmative[i].relevance = s;
            if (i == 0 || s > best || (s == best && affirmative[i].agent_id < affirmative[pick].agent_id)) {
                best = s;
                pick = i;
            }
        }
    } else {
        pick = rng.index(affirmative.size());
    }
    out.decision = Decision::Answered;
    out.selected = std::move(affirmative[pick]);
    return out;
}

ArbitrationOutcome arbitrate(std::string_view query, std::span<const CandidateResponse> candidates,
                             const ArbitrationStrategy& strategy, const RelevanceScorer* scorer, RngStream& rng) {
    return arbitrate(query, candidates, strategy, scorer ? answer_scorer(*scorer) : CandidateScorer{}, rng);
}

} // namespace slarag
