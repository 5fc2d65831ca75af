#include "slarag/engine.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <thread>

#include "slarag/error.hpp"
#include "slarag/text.hpp"

namespace slarag {

namespace {

std::string plan_key(IntentLabel intent, const CompositeSla& sla, const Environment& env) {
    std::string key(to_string(intent));
    key += '|' + sla.name;
    for (const auto& s : sla.slos)
        key += '|' + std::string(to_string(s.attribute)) + std::string(to_string(s.direction)) +
               text::format_double(s.target);
    key += "|env";
    for (const auto& s : env.available_stores) key += ',' + s;
    key += env.external_api_up ? "|api" : "|noapi";
    key += env.local_model_available ? "|local" : "|nolocal";
    key += '|' + text::format_double(env.cost_multiplier);
    return key;
}

CandidateResponse failed_candidate(const std::string& query_id, const AgentConfig& agent, std::uint64_t seed,
                                   const Error& e) {
    CandidateResponse c;
    c.agent_id = agent.agent_id;
    c.cost = agent.cost_per_call;
    // run_agent samples latency first from the same stream.
    auto rng = RngStream::derive(seed, agent.agent_id, query_id);
    c.latency_ms = agent.latency.sample(rng);
    c.error = e.what();
    return c;
}

} // namespace

Engine::Engine(EngineDeps deps) : deps_(std::move(deps)) { deps_.accounting.validate(); }

EnsembleConfig Engine::plan_for(IntentLabel intent, const CompositeSla& sla, const Environment& env) {
    if (deps_.fixed_ensemble) {
        auto config = *deps_.fixed_ensemble;
        config.intent = intent;
        return config;
    }
    auto key = plan_key(intent, sla, env);
    {
        std::lock_guard lock(plan_mutex_);
        if (auto it = plan_cache_.find(key); it != plan_cache_.end()) return it->second;
    }
    auto fallback = deps_.fallback;
    if (fallback) fallback->accounting = &deps_.accounting;
    auto config = plan(intent, sla, env, deps_.calibration, deps_.grid, fallback ? &*fallback : nullptr);
    std::lock_guard lock(plan_mutex_);
    return plan_cache_.emplace(key, std::move(config)).first->second;
}

std::vector<CandidateResponse> Engine::fan_out(const std::string& query_id, std::string_view query,
                                               const std::vector<AgentConfig>& agents) const {
    auto run_one = [&](const AgentConfig& agent) {
        try {
            return run_agent(query_id, query, agent, deps_.runtime);
        } catch (const Error& e) {
            return failed_candidate(query_id, agent, deps_.runtime.master_seed, e);
        }
    };

    std::vector<CandidateResponse> out;
    out.reserve(agents.size());
    if (deps_.parallel_agents && agents.size() > 1) {
        std::vector<std::future<CandidateResponse>> pending;
        for (const auto& agent : agents) pending.push_back(std::async(std::launch::async, run_one, std::cref(agent)));
        for (auto& f : pending) out.push_back(f.get());
    } else {
        for (const auto& agent : agents) out.push_back(run_one(agent));
    }
    std::sort(out.begin(), out.end(),
              [](const CandidateResponse& a, const CandidateResponse& b) { return a.agent_id < b.agent_id; });
    return out;
}

QueryResult Engine::handle_query(const std::string& query_id, std::string_view query, const CompositeSla& sla,
                                 const Environment& env) {
    auto intent = deps_.rules.classify(query);
    if (intent != IntentLabel::DirectlyAnswerable) return UnsupportedIntentResult{query_id, std::string(query), intent};

    ExecutionTrace trace;
    trace.query_id = query_id;
    trace.query = std::string(query);
    trace.intent = intent;
    trace.c_sys = deps_.accounting.overhead_cost;
    trace.l_sys_ms = deps_.accounting.overhead_latency_ms;
    if (deps_.runtime.dataset) trace.global_context_hit = deps_.runtime.dataset->global_context_hit(query_id);

    EnsembleConfig config;
    try {
        config = plan_for(intent, sla, env);
    } catch (const Error& e) {
        trace.error = TraceError{e.code(), e.message()};
        return trace;
    }
    trace.fingerprint = config.fingerprint.to_string();
    trace.candidates = fan_out(query_id, query, config.agents);

    if (!deps_.runtime.dataset || deps_.runtime.dataset->global_context_index().count(query_id) == 0) {
        trace.global_context_hit = std::any_of(trace.candidates.begin(), trace.candidates.end(), [](const auto& c) {
            return c.truth && c.truth->context_availability == ContextAvailability::AnswerExistsInContext;
        });
    }

    auto rng = RngStream::derive(deps_.runtime.master_seed, "arbitration", query_id);
    try {
        trace.outcome = arbitrate(query, trace.candidates, config.arbitration, deps_.arbitration_scorer, rng);
    } catch (const Error& e) {
        trace.error = TraceError{e.code(), e.message()};
        trace.outcome = ArbitrationOutcome{};
        trace.outcome.affirmative_count = affirmative_subset(trace.candidates).size();
    }
    std::size_t n = trace.candidates.size();
    trace.outcome.arbitration_cost = deps_.accounting.arbitration_cost(n);
    trace.outcome.arbitration_latency_ms = deps_.accounting.arbitration_latency_ms(n);
    trace.c_sys = cost_of(trace.candidates, deps_.accounting);
    trace.l_sys_ms = latency_of(trace.candidates, deps_.accounting);
    return trace;
}

std::vector<QueryResult> Engine::run_batch(std::span<const QueryInput> queries, const CompositeSla& sla,
                                           const Environment& env, unsigned threads) {
    std::vector<std::optional<QueryResult>> slots(queries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < queries.size(); i = next++)
            slots[i] = handle_query(queries[i].query_id, queries[i].query, sla, env);
    };
    unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(queries.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    std::vector<QueryResult> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

} // namespace slarag
