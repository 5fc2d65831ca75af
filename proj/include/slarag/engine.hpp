#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slarag/accounting.hpp"
#include "slarag/agents.hpp"
#include "slarag/arbitration.hpp"
#include "slarag/error.hpp"
#include "slarag/planning.hpp"
#include "slarag/sla.hpp"

namespace slarag {

struct TraceError {
    ErrorCode code;
    std::string message;
};

struct ExecutionTrace {
    std::string query_id;
    std::string query;
    IntentLabel intent = IntentLabel::DirectlyAnswerable;
    std::string fingerprint;
    std::vector<CandidateResponse> candidates;  // sorted by agent_id
    ArbitrationOutcome outcome;
    double c_sys = 0.0;
    double l_sys_ms = 0.0;
    bool global_context_hit = false;
    std::optional<TraceError> error;  // planning or arbitration failure
};

// Queries that are not directly answerable skip the QA ensemble.
struct UnsupportedIntentResult {
    std::string query_id;
    std::string query;
    IntentLabel intent;
};

using QueryResult = std::variant<ExecutionTrace, UnsupportedIntentResult>;

struct QueryInput {
    std::string query_id;
    std::string query;
};

struct EngineDeps {
    IntentRulePack rules = IntentRulePack::defaults();
    CalibrationTable calibration;
    SearchGrid grid;
    std::optional<MonteCarloEstimator> fallback;
    AccountingParams accounting;
    AgentRuntime runtime;
    const RelevanceScorer* arbitration_scorer = nullptr;
    bool parallel_agents = true;
    // Skips planning entirely when set; every query runs this ensemble.
    std::optional<EnsembleConfig> fixed_ensemble;
};

// The intent handler: classify, plan, fan out to agents, arbitrate, account.
// All randomness comes from streams keyed by (seed, agent_id, query_id), so
// traces do not depend on thread scheduling.
class Engine {
public:
    explicit Engine(EngineDeps deps);

    /// Planning, policy and transport failures are recorded in the trace
    /// rather than thrown.
    QueryResult handle_query(const std::string& query_id, std::string_view query, const CompositeSla& sla,
                             const Environment& env);

    /// Results come back in input order whatever the thread count.
    std::vector<QueryResult> run_batch(std::span<const QueryInput> queries, const CompositeSla& sla,
                                       const Environment& env, unsigned threads = 1);

    /// Cached per (intent, sla, environment). Throws like plan().
    EnsembleConfig plan_for(IntentLabel intent, const CompositeSla& sla, const Environment& env);

    const EngineDeps& deps() const { return deps_; }

private:
    std::vector<CandidateResponse> fan_out(const std::string& query_id, std::string_view query,
                                           const std::vector<AgentConfig>& agents) const;

    EngineDeps deps_;
    std::mutex plan_mutex_;
    std::map<std::string, EnsembleConfig> plan_cache_;
};

} // namespace slarag
