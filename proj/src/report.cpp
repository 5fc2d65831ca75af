#include "slarag/report.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "slarag/error.hpp"
#include "slarag/text.hpp"

namespace slarag {

using nlohmann::json;

namespace {

json annotation_to_json(const AnswerAnnotation& a) {
    return json{{"context_availability", to_string(a.context_availability)},
                {"answer_provision", to_string(a.answer_provision)},
                {"answer_quality", a.answer_quality ? json(to_string(*a.answer_quality)) : json(nullptr)}};
}

AnswerAnnotation annotation_from_json(const json& j) {
    AnswerAnnotation a;
    a.context_availability = j.at("context_availability").get<std::string>() == "exists"
                                 ? ContextAvailability::AnswerExistsInContext
                                 : ContextAvailability::AnswerDoesNotExist;
    a.answer_provision = j.at("answer_provision").get<std::string>() == "provided" ? AnswerProvision::AnswerProvided
                                                                                   : AnswerProvision::NoAnswerProvided;
    if (const auto& q = j.at("answer_quality"); !q.is_null()) a.answer_quality = answer_quality_from_string(q.get<std::string>());
    return a;
}

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

} // namespace

json candidate_to_json(const CandidateResponse& c) {
    return json{{"agent_id", c.agent_id},
                {"affirmative", c.affirmative},
                {"answer_text", opt(c.answer_text)},
                {"uid_list", opt(c.uid_list)},
                {"relevance", opt(c.relevance)},
                {"cost", c.cost},
                {"latency_ms", c.latency_ms},
                {"truth", c.truth ? annotation_to_json(*c.truth) : json(nullptr)},
                {"error", opt(c.error)}};
}

CandidateResponse candidate_from_json(const json& j) {
    CandidateResponse c;
    c.agent_id = j.at("agent_id").get<std::string>();
    c.affirmative = j.at("affirmative").get<bool>();
    c.answer_text = opt_get<std::string>(j, "answer_text");
    c.uid_list = opt_get<std::vector<std::int64_t>>(j, "uid_list");
    c.relevance = opt_get<double>(j, "relevance");
    c.cost = j.at("cost").get<double>();
    c.latency_ms = j.at("latency_ms").get<double>();
    if (auto it = j.find("truth"); it != j.end() && !it->is_null()) c.truth = annotation_from_json(*it);
    c.error = opt_get<std::string>(j, "error");
    return c;
}

json result_to_json(const QueryResult& result) {
    if (const auto* u = std::get_if<UnsupportedIntentResult>(&result))
        return json{{"type", "unsupported_intent"}, {"query_id", u->query_id}, {"query", u->query},
                    {"intent", to_string(u->intent)}};
    const auto& t = std::get<ExecutionTrace>(result);
    json candidates = json::array();
    for (const auto& c : t.candidates) candidates.push_back(candidate_to_json(c));
    const auto& o = t.outcome;
    json outcome{{"decision", to_string(o.decision)},
                 {"selected_agent", o.selected ? json(o.selected->agent_id) : json(nullptr)},
                 {"answer_text", o.selected ? opt(o.selected->answer_text) : json(nullptr)},
                 {"answer_quality", o.selected && o.selected->truth && o.selected->truth->answer_quality
                                        ? json(to_string(*o.selected->truth->answer_quality))
                                        : json(nullptr)},
                 {"k", o.k},
                 {"affirmative_count", o.affirmative_count},
                 {"arbitration_cost", o.arbitration_cost},
                 {"arbitration_latency_ms", o.arbitration_latency_ms}};
    return json{{"type", "trace"},
                {"query_id", t.query_id},
                {"query", t.query},
                {"intent", to_string(t.intent)},
                {"fingerprint", t.fingerprint},
                {"global_context_hit", t.global_context_hit},
                {"candidates", candidates},
                {"outcome", outcome},
                {"c_sys", t.c_sys},
                {"l_sys_ms", t.l_sys_ms},
                {"error", t.error ? json{{"code", to_string(t.error->code)}, {"message", t.error->message}}
                                  : json(nullptr)}};
}

QueryResult result_from_json(const json& j) {
    try {
        auto type = j.at("type").get<std::string>();
        auto intent_name = j.at("intent").get<std::string>();
        auto intent = intent_from_string(intent_name).value_or(IntentLabel::Other);
        if (type == "unsupported_intent")
            return UnsupportedIntentResult{j.at("query_id").get<std::string>(), j.at("query").get<std::string>(), intent};
        if (type != "trace") throw Error(ErrorCode::ParseError, "unknown result type '" + type + "'");

        ExecutionTrace t;
        t.query_id = j.at("query_id").get<std::string>();
        t.query = j.at("query").get<std::string>();
        t.intent = intent;
        t.fingerprint = j.at("fingerprint").get<std::string>();
        t.global_context_hit = j.at("global_context_hit").get<bool>();
        for (const auto& c : j.at("candidates")) t.candidates.push_back(candidate_from_json(c));
        const auto& o = j.at("outcome");
        t.outcome.decision = o.at("decision").get<std::string>() == "answered" ? Decision::Answered
                                                                               : Decision::NegativeResult;
        if (auto selected = opt_get<std::string>(o, "selected_agent")) {
            auto it = std::find_if(t.candidates.begin(), t.candidates.end(),
                                   [&](const CandidateResponse& c) { return c.agent_id == *selected; });
            if (it == t.candidates.end()) throw Error(ErrorCode::ParseError, "selected agent not among candidates");
            t.outcome.selected = *it;
        }
        t.outcome.k = o.at("k").get<std::size_t>();
        t.outcome.affirmative_count = o.at("affirmative_count").get<std::size_t>();
        t.outcome.arbitration_cost = o.at("arbitration_cost").get<double>();
        t.outcome.arbitration_latency_ms = o.at("arbitration_latency_ms").get<double>();
        t.c_sys = j.at("c_sys").get<double>();
        t.l_sys_ms = j.at("l_sys_ms").get<double>();
        if (const auto& e = j.at("error"); !e.is_null()) {
            TraceError err{ErrorCode::ValidationError, e.at("message").get<std::string>()};
            auto code = e.at("code").get<std::string>();
            for (int c = 0; c <= static_cast<int>(ErrorCode::ConfigError); ++c)
                if (to_string(static_cast<ErrorCode>(c)) == code) err.code = static_cast<ErrorCode>(c);
            t.error = err;
        }
        return t;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

void write_traces(std::ostream& out, const std::vector<QueryResult>& results, const Provenance& provenance) {
    out << json{{"type", "provenance"}, {"config_hash", provenance.config_hash}, {"seed", provenance.seed}}.dump()
        << '\n';
    for (const auto& r : results) out << result_to_json(r).dump() << '\n';
}

std::vector<QueryResult> read_traces(std::istream& in, std::optional<Provenance>* provenance) {
    std::vector<QueryResult> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            auto j = json::parse(line);
            if (j.value("type", "") == "provenance") {
                if (provenance)
                    *provenance = Provenance{j.at("config_hash").get<std::string>(), j.at("seed").get<std::uint64_t>()};
                continue;
            }
            out.push_back(result_from_json(j));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.message());
        }
    }
    return out;
}

std::vector<QueryOutcome> outcomes_from_results(const std::vector<QueryResult>& results) {
    std::vector<QueryOutcome> out;
    for (const auto& r : results) {
        const auto* t = std::get_if<ExecutionTrace>(&r);
        if (!t) continue;
        QueryOutcome o{t->query_id, t->global_context_hit, t->outcome.decision, std::nullopt};
        if (t->outcome.decision == Decision::Answered && t->outcome.selected && t->outcome.selected->truth)
            o.quality = t->outcome.selected->truth->answer_quality;
        out.push_back(std::move(o));
    }
    return out;
}

double p50(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    return values[(values.size() + 1) / 2 - 1];
}

ReportRow summarize(std::string experiment_version, const std::vector<QueryResult>& results, IrrDenominator irr) {
    ReportRow row;
    row.experiment_version = std::move(experiment_version);
    auto outcomes = outcomes_from_results(results);
    row.metrics = compute_metrics(outcomes, irr);
    std::vector<double> latencies;
    double cost = 0.0;
    for (const auto& r : results) {
        if (const auto* t = std::get_if<ExecutionTrace>(&r)) {
            cost += t->c_sys;
            latencies.push_back(t->l_sys_ms);
        }
    }
    row.mean_cost = latencies.empty() ? 0.0 : cost / static_cast<double>(latencies.size());
    row.p50_latency_ms = p50(std::move(latencies));
    return row;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows, const Provenance& provenance) {
    out << "# config_hash=" << provenance.config_hash << " seed=" << provenance.seed << '\n';
    out << kReportHeader << '\n';
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        out << r.experiment_version << ',' << text::format_fixed(m.recall, 6) << ','
            << text::format_fixed(m.precision, 6) << ',' << text::format_fixed(m.f1, 6) << ','
            << text::format_fixed(m.hallucination_rate, 6) << ',' << text::format_fixed(m.incongruent_response_rate, 6)
            << ',' << text::format_fixed(r.mean_cost, 6) << ',' << text::format_fixed(r.p50_latency_ms, 3) << ','
            << text::format_fixed(m.answered_fraction, 6) << '\n';
    }
}

json report_to_json(const std::vector<ReportRow>& rows, const Provenance& provenance) {
    json arr = json::array();
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        json row{{"experiment_version", r.experiment_version},
                 {"recall", m.recall},
                 {"precision", m.precision},
                 {"f1", m.f1},
                 {"hallucination_rate", m.hallucination_rate},
                 {"incongruent_response_rate", m.incongruent_response_rate},
                 {"mean_cost", r.mean_cost},
                 {"p50_latency_ms", r.p50_latency_ms},
                 {"answered_fraction", m.answered_fraction}};
        if (m.counts)
            row["counts"] = json{{"answers_provided", m.counts->answers_provided},
                                 {"correct", m.counts->correct},
                                 {"hallucinations", m.counts->hallucinations},
                                 {"incongruent", m.counts->incongruent},
                                 {"global_context_hits", m.counts->global_context_hits},
                                 {"total_queries", m.counts->total_queries}};
        arr.push_back(std::move(row));
    }
    return json{{"config_hash", provenance.config_hash}, {"seed", provenance.seed}, {"rows", arr}};
}

} // namespace slarag
