#include "slarag/agents.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "slarag/error.hpp"
#include "slarag/text.hpp"

namespace slarag {

using nlohmann::json;

const std::string_view kDefaultPromptTemplate =
    "Context: {context_entities}.\n"
    "Use only the provided context to answer the\n"
    "question: '{query}' to the best of your\n"
    "ability and in a few sentences or less.\n"
    "\n"
    "If there is more than one answer, summarize\n"
    "the options. Provide the 'uid' values of the\n"
    "object you used to inform the answer (do NOT\n"
    "use the 'id' value). Return the answer in a\n"
    "json dictionary format\n"
    " [Example:\n"
    "    {\n"
    "        'answer': 'This is the answer',\n"
    "        'uid_list': [12345, 98342]\n"
    "    }]\n"
    "Do not refer to the context in your answer.";

void validate_profile(const AgentProfile& p) {
    for (double v : {p.p_affirmative, p.p_correct, p.p_hallucination, p.p_incongruent})
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::ValidationError, "profile probabilities must be in [0,1]");
    double sum = p.p_correct + p.p_hallucination + p.p_incongruent;
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorCode::ValidationError, "profile quality split sums to " + text::format_double(sum));
}

double LatencyModel::sample(RngStream& rng) const {
    switch (kind) {
        case Kind::Constant:  return lo;
        case Kind::Uniform:   return rng.uniform(lo, hi);
        case Kind::Empirical: return samples.empty() ? 0.0 : samples[rng.index(samples.size())];
    }
    return 0.0;
}

void LatencyModel::validate() const {
    switch (kind) {
        case Kind::Constant:
            if (!(lo >= 0.0)) throw Error(ErrorCode::ValidationError, "latency must be >= 0");
            break;
        case Kind::Uniform:
            if (!(lo >= 0.0 && hi >= lo)) throw Error(ErrorCode::ValidationError, "uniform latency needs 0 <= lo <= hi");
            break;
        case Kind::Empirical:
            if (samples.empty()) throw Error(ErrorCode::ValidationError, "empirical latency needs samples");
            for (double s : samples)
                if (!(s >= 0.0)) throw Error(ErrorCode::ValidationError, "latency samples must be >= 0");
            break;
    }
}

std::string_view to_string(ReasonerKind kind) {
    switch (kind) {
        case ReasonerKind::OracleReplay:         return "oracle_replay";
        case ReasonerKind::CalibratedStochastic: return "calibrated_stochastic";
        case ReasonerKind::ExternalHttp:         return "external_http";
    }
    return "oracle_replay";
}

std::optional<ReasonerKind> reasoner_kind_from_string(std::string_view name) {
    if (name == "oracle_replay") return ReasonerKind::OracleReplay;
    if (name == "calibrated_stochastic") return ReasonerKind::CalibratedStochastic;
    if (name == "external_http") return ReasonerKind::ExternalHttp;
    return std::nullopt;
}

void validate_agent_config(const AgentConfig& c) {
    if (c.agent_id.empty()) throw Error(ErrorCode::ValidationError, "agent_id must be non-empty");
    if (!(c.cost_per_call >= 0.0))
        throw Error(ErrorCode::ValidationError, c.agent_id + ": cost_per_call must be >= 0");
    if (c.strategy.token_budget == 0)
        throw Error(ErrorCode::ValidationError, c.agent_id + ": token_budget must be positive");
    if (c.strategy.vertical_limit && *c.strategy.vertical_limit == 0)
        throw Error(ErrorCode::ValidationError, c.agent_id + ": vertical_limit must be positive");
    if (c.top_k_per_vertical == 0)
        throw Error(ErrorCode::ValidationError, c.agent_id + ": top_k_per_vertical must be positive");
    c.latency.validate();
    if (c.reasoner == ReasonerKind::CalibratedStochastic && !c.profile)
        throw Error(ErrorCode::ValidationError, c.agent_id + ": calibrated_stochastic needs a profile");
    if (c.profile) validate_profile(*c.profile);
    if (c.reasoner == ReasonerKind::ExternalHttp && !c.endpoint)
        throw Error(ErrorCode::ValidationError, c.agent_id + ": external_http needs an endpoint");
}

std::string build_prompt(std::string_view query, const ContextWindow& context, std::string_view tmpl) {
    json entities = json::array();
    for (const auto& e : context.entries)
        entities.push_back(json{{"uid", e.uid}, {"vertical", e.vertical}, {"text", e.text()}});
    const std::string context_text = entities.dump();

    static constexpr std::string_view kContextKey = "{context_entities}";
    static constexpr std::string_view kQueryKey = "{query}";
    std::string out;
    out.reserve(tmpl.size() + context_text.size() + query.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        auto rest = tmpl.substr(i);
        if (rest.starts_with(kContextKey)) {
            out += context_text;
            i += kContextKey.size();
        } else if (rest.starts_with(kQueryKey)) {
            out += query;
            i += kQueryKey.size();
        } else {
            out.push_back(tmpl[i++]);
        }
    }
    return out;
}

ReasonerOutput parse_reasoner_output(std::string_view raw, std::string_view refusal_marker) {
    auto body = text::trim(raw);
    json j = json::parse(body.begin(), body.end(), nullptr, false);
    if (j.is_discarded()) {
        // Models often wrap the object in prose or code fences.
        auto open = body.find('{');
        auto close = body.rfind('}');
        if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
            auto inner = body.substr(open, close - open + 1);
            j = json::parse(inner.begin(), inner.end(), nullptr, false);
        }
    }
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::ParseError, "reasoner output is not a JSON object");
    auto answer = j.find("answer");
    auto uids = j.find("uid_list");
    if (answer == j.end() || uids == j.end())
        throw Error(ErrorCode::ParseError, "reasoner output needs 'answer' and 'uid_list'");
    if (!answer->is_null() && !answer->is_string())
        throw Error(ErrorCode::ParseError, "'answer' must be a string or null");
    if (!uids->is_array() && !uids->is_null()) throw Error(ErrorCode::ParseError, "'uid_list' must be an array");

    if (answer->is_null()) return NegativeAnswer{};
    auto text_value = answer->get<std::string>();
    auto trimmed = text::trim(text_value);
    if (trimmed.empty() || (!refusal_marker.empty() && trimmed == refusal_marker)) return NegativeAnswer{};

    ParsedAnswer parsed{text_value, {}};
    if (uids->is_array()) {
        for (const auto& u : *uids) {
            if (!u.is_number_integer()) throw Error(ErrorCode::ParseError, "'uid_list' entries must be integers");
            parsed.uid_list.push_back(u.get<std::int64_t>());
        }
    }
    return parsed;
}

SampledOutcome sample_outcome(const AgentProfile& p, RngStream& rng) {
    double u_answer = rng.uniform();
    double u_quality = rng.uniform();
    if (!(u_answer < p.p_affirmative)) return {false, std::nullopt};
    if (u_quality < p.p_correct) return {true, AnswerQuality::Correct};
    if (u_quality < p.p_correct + p.p_hallucination) return {true, AnswerQuality::Hallucination};
    // Guard against the quality split summing to slightly under 1.
    if (p.p_incongruent == 0.0) return {true, p.p_hallucination > 0.0 ? AnswerQuality::Hallucination : AnswerQuality::Correct};
    return {true, AnswerQuality::Incongruent};
}

namespace {

std::vector<const DocumentStore*> resolve_stores(const AgentConfig& config, const AgentRuntime& runtime) {
    std::vector<std::string> wanted = config.stores;
    if (wanted.empty()) wanted.assign(config.data_source_policy.begin(), config.data_source_policy.end());
    std::vector<const DocumentStore*> out;
    for (const auto& label : wanted) {
        if (!config.data_source_policy.contains(label))
            throw Error(ErrorCode::PolicyViolation, config.agent_id + " may not read store '" + label + "'");
        if (runtime.stores == nullptr) continue;
        auto it = runtime.stores->find(label);
        if (it == runtime.stores->end())
            throw Error(ErrorCode::ValidationError, config.agent_id + ": store '" + label + "' is not loaded");
        out.push_back(&it->second);
    }
    return out;
}

std::string synthetic_answer(std::string_view query, AnswerQuality quality) {
    switch (quality) {
        case AnswerQuality::Correct:
            return std::string(query) + " - answered from the retrieved sources.";
        case AnswerQuality::Hallucination:
            return "This is offered at every location nationwide with no restrictions.";
        case AnswerQuality::Incongruent:
            return "According to the provided context documents, see the listed entries.";
    }
    return {};
}

} // namespace

CandidateResponse run_agent(const std::string& query_id, std::string_view query, const AgentConfig& config,
                            const AgentRuntime& runtime, RngStream& rng) {
    CandidateResponse out;
    out.agent_id = config.agent_id;
    out.cost = config.cost_per_call;
    out.latency_ms = config.latency.sample(rng);

    auto stores = resolve_stores(config, runtime);
    std::optional<ContextWindow> window;
    if (!stores.empty()) {
        auto results = search(query, stores, config.top_k_per_vertical);
        window = apply_strategy(query, results, config.strategy, runtime.rerank_scorer);
    }

    std::string raw;
    switch (config.reasoner) {
        case ReasonerKind::OracleReplay: {
            const AnnotatedRecord* rec =
                runtime.dataset ? runtime.dataset->find(query_id, config.agent_id) : nullptr;
            if (rec == nullptr)
                throw Error(ErrorCode::MissingRecord, "no record for " + query_id + "/" + config.agent_id);
            out.truth = rec->annotation;
            json reply{{"answer", rec->answer_text ? json(*rec->answer_text) : json(nullptr)},
                       {"uid_list", rec->context_uids}};
            raw = reply.dump();
            break;
        }
        case ReasonerKind::CalibratedStochastic: {
            if (!config.profile)
                throw Error(ErrorCode::ValidationError, config.agent_id + ": calibrated_stochastic needs a profile");
            auto drawn = sample_outcome(*config.profile, rng);
            AnswerAnnotation truth;
            truth.context_availability = ContextAvailability::AnswerExistsInContext;
            truth.answer_provision = drawn.affirmative ? AnswerProvision::AnswerProvided
                                                       : AnswerProvision::NoAnswerProvided;
            truth.answer_quality = drawn.quality;
            out.truth = truth;
            json reply{{"answer", drawn.quality ? json(synthetic_answer(query, *drawn.quality)) : json(nullptr)},
                       {"uid_list", window ? window->uids() : std::vector<std::int64_t>{}}};
            raw = reply.dump();
            break;
        }
        case ReasonerKind::ExternalHttp: {
            if (!config.endpoint)
                throw Error(ErrorCode::ValidationError, config.agent_id + ": external_http needs an endpoint");
            raw = HttpReasoner(*config.endpoint)
                      .generate(build_prompt(query, window.value_or(ContextWindow{}), runtime.prompt_template));
            break;
        }
    }

    ReasonerOutput parsed;
    try {
        parsed = parse_reasoner_output(raw, runtime.refusal_marker);
    } catch (const Error& e) {
        out.error = e.what();
        return out;
    }
    if (auto* answer = std::get_if<ParsedAnswer>(&parsed)) {
        out.affirmative = true;
        out.answer_text = answer->answer;
        std::vector<std::int64_t> uids = std::move(answer->uid_list);
        if (window) {
            auto allowed = window->uids();
            std::unordered_set<std::int64_t> keep(allowed.begin(), allowed.end());
            std::erase_if(uids, [&](std::int64_t u) { return !keep.contains(u); });
        }
        out.uid_list = std::move(uids);
    }
    return out;
}

CandidateResponse run_agent(const std::string& query_id, std::string_view query, const AgentConfig& config,
                            const AgentRuntime& runtime) {
    auto rng = RngStream::derive(runtime.master_seed, config.agent_id, query_id);
    return run_agent(query_id, query, config, runtime, rng);
}

} // namespace slarag
