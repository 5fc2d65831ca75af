#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slarag/dataset.hpp"
#include "slarag/preprocess.hpp"
#include "slarag/profile.hpp"
#include "slarag/retrieval.hpp"

namespace slarag {

struct SyntheticAgentSpec {
    std::string agent_id;
    PreprocessKind strategy = PreprocessKind::ThresholdControl;
    AgentProfile profile;
    double p_context_exists = 0.95;
};

// Five agents, one per preprocessing strategy, profiled from measured
// single-agent rows: p_correct = precision, p_hallucination = HR, the
// remainder incongruent, p_affirmative = recall / precision (capped at 1).
std::vector<SyntheticAgentSpec> reference_single_agent_specs();

struct SyntheticCorpus {
    AnnotatedDataset dataset;
    std::vector<Document> documents;  // three verticals per query
};

/// Seeded, deterministic corpus: directly answerable queries, one record per
/// (query, agent), outcomes drawn from each agent's profile.
SyntheticCorpus generate_synthetic(std::size_t n_queries, std::span<const SyntheticAgentSpec> agents,
                                   std::uint64_t seed);

} // namespace slarag
