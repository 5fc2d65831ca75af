#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slarag/dataset.hpp"
#include "slarag/http_client.hpp"
#include "slarag/preprocess.hpp"
#include "slarag/profile.hpp"
#include "slarag/retrieval.hpp"
#include "slarag/rng.hpp"

namespace slarag {

// Per-call latency distribution in milliseconds.
struct LatencyModel {
    enum class Kind { Constant, Uniform, Empirical };

    Kind kind = Kind::Constant;
    double lo = 0.0;  // Constant value, or Uniform lower bound
    double hi = 0.0;  // Uniform upper bound
    std::vector<double> samples;  // Empirical draws, chosen uniformly

    static LatencyModel constant(double ms) { return {Kind::Constant, ms, ms, {}}; }
    static LatencyModel uniform(double lo, double hi) { return {Kind::Uniform, lo, hi, {}}; }
    static LatencyModel empirical(std::vector<double> values) { return {Kind::Empirical, 0, 0, std::move(values)}; }

    double sample(RngStream& rng) const;
    void validate() const;
};

enum class ReasonerKind { OracleReplay, CalibratedStochastic, ExternalHttp };

std::string_view to_string(ReasonerKind kind);
std::optional<ReasonerKind> reasoner_kind_from_string(std::string_view name);

struct AgentConfig {
    std::string agent_id;
    PreprocessStrategy strategy;
    ReasonerKind reasoner = ReasonerKind::OracleReplay;
    // Store labels this agent may read.
    std::set<std::string> data_source_policy;
    // Store labels it actually queries; empty means every permitted store.
    std::vector<std::string> stores;
    double cost_per_call = 0.0;
    LatencyModel latency;
    std::size_t top_k_per_vertical = 10;
    std::optional<AgentProfile> profile;    // CalibratedStochastic
    std::optional<HttpEndpoint> endpoint;   // ExternalHttp
};

void validate_agent_config(const AgentConfig& config);

struct CandidateResponse {
    std::string agent_id;
    bool affirmative = false;
    std::optional<std::string> answer_text;
    std::optional<std::vector<std::int64_t>> uid_list;
    std::optional<double> relevance;
    double cost = 0.0;
    double latency_ms = 0.0;
    std::optional<AnswerAnnotation> truth;
    // Set when the agent failed (transport, parse, policy); the response then
    // counts as negative.
    std::optional<std::string> error;
};

using StoreSet = std::map<std::string, DocumentStore, std::less<>>;

extern const std::string_view kDefaultPromptTemplate;
inline constexpr std::string_view kDefaultRefusalMarker = "NO_ANSWER";

// Shared, read-only inputs for every agent execution.
struct AgentRuntime {
    const StoreSet* stores = nullptr;
    const AnnotatedDataset* dataset = nullptr;
    const RelevanceScorer* rerank_scorer = nullptr;
    std::string prompt_template{kDefaultPromptTemplate};
    std::string refusal_marker{kDefaultRefusalMarker};
    std::uint64_t master_seed = 0;
};

/// Substitutes `{context_entities}` (a JSON array of uid/vertical/text
/// objects) and `{query}` into the template in one pass.
std::string build_prompt(std::string_view query, const ContextWindow& context,
                         std::string_view prompt_template = kDefaultPromptTemplate);

struct ParsedAnswer {
    std::string answer;
    std::vector<std::int64_t> uid_list;
};
struct NegativeAnswer {};

using ReasonerOutput = std::variant<ParsedAnswer, NegativeAnswer>;

/// Reads the `{"answer": ..., "uid_list": [...]}` object. A null, blank or
/// refusal-marker answer is NegativeAnswer; anything malformed is ParseError.
ReasonerOutput parse_reasoner_output(std::string_view raw,
                                     std::string_view refusal_marker = kDefaultRefusalMarker);

/// Runs retrieve -> preprocess -> reason -> parse for one agent.
/// Throws PolicyViolation, MissingRecord or TransportError; a reasoner reply
/// that does not parse comes back as a negative response with `error` set.
CandidateResponse run_agent(const std::string& query_id, std::string_view query, const AgentConfig& config,
                            const AgentRuntime& runtime, RngStream& rng);

// Same, with the stream derived from (master_seed, agent_id, query_id).
CandidateResponse run_agent(const std::string& query_id, std::string_view query, const AgentConfig& config,
                            const AgentRuntime& runtime);

struct SampledOutcome {
    bool affirmative;
    std::optional<AnswerQuality> quality;
};

// One draw from a profile: affirmative first, then the quality split.
SampledOutcome sample_outcome(const AgentProfile& profile, RngStream& rng);

} // namespace slarag
