#include "slarag/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "slarag/error.hpp"
#include "slarag/text.hpp"

namespace slarag {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& why) {
    throw Error(ErrorCode::ConfigError, path + ": " + why);
}

// Reads one JSON object, remembering which keys were consumed so that
// finish() can reject anything unknown.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) config_error(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* get(const std::string& key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    const json& require(const std::string& key) {
        const json* v = get(key);
        if (!v) config_error(field(key), "is required");
        return *v;
    }

    template <typename T>
    T as(const std::string& key, const json& v) const {
        try {
            return v.get<T>();
        } catch (const json::exception&) {
            config_error(field(key), "has the wrong type");
        }
    }

    template <typename T>
    T required(const std::string& key) {
        return as<T>(key, require(key));
    }

    template <typename T>
    T optional(const std::string& key, T fallback) {
        const json* v = get(key);
        return v ? as<T>(key, *v) : fallback;
    }

    double non_negative(const std::string& key, double fallback) {
        double v = optional<double>(key, fallback);
        if (!(v >= 0.0)) config_error(field(key), "must be >= 0");
        return v;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.contains(it.key())) config_error(field(it.key()), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : (base / path).lexically_normal();
}

template <typename T, typename Fn>
T enum_field(ObjectReader& r, const std::string& key, T fallback, Fn&& from_string) {
    const json* v = r.get(key);
    if (!v) return fallback;
    auto name = r.as<std::string>(key, *v);
    auto parsed = from_string(name);
    if (!parsed) config_error(r.field(key), "unknown value '" + name + "'");
    return *parsed;
}

HttpEndpoint parse_endpoint(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    HttpEndpoint e;
    e.base_url = r.required<std::string>("base_url");
    e.timeout_ms = r.optional<int>("timeout_ms", 30000);
    e.retries = r.optional<int>("retries", 0);
    if (e.timeout_ms <= 0) config_error(r.field("timeout_ms"), "must be positive");
    if (e.retries < 0) config_error(r.field("retries"), "must be >= 0");
    r.finish();
    return e;
}

LatencyModel parse_latency(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    auto kind = r.required<std::string>("kind");
    LatencyModel m;
    if (kind == "constant") {
        m = LatencyModel::constant(r.non_negative("ms", 0.0));
    } else if (kind == "uniform") {
        double lo = r.non_negative("lo", 0.0);
        double hi = r.non_negative("hi", lo);
        if (hi < lo) config_error(r.field("hi"), "must be >= lo");
        m = LatencyModel::uniform(lo, hi);
    } else if (kind == "empirical") {
        auto samples = r.required<std::vector<double>>("samples");
        if (samples.empty()) config_error(r.field("samples"), "must be non-empty");
        for (double s : samples)
            if (!(s >= 0.0)) config_error(r.field("samples"), "values must be >= 0");
        m = LatencyModel::empirical(std::move(samples));
    } else {
        config_error(r.field("kind"), "unknown latency kind '" + kind + "'");
    }
    r.finish();
    return m;
}

AgentProfile parse_profile(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    AgentProfile p;
    p.p_affirmative = r.required<double>("p_affirmative");
    p.p_correct = r.required<double>("p_correct");
    p.p_hallucination = r.required<double>("p_hallucination");
    p.p_incongruent = r.required<double>("p_incongruent");
    r.finish();
    try {
        validate_profile(p);
    } catch (const Error& e) {
        config_error(path, e.message());
    }
    return p;
}

PreprocessStrategy parse_strategy(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    auto kind = enum_field(r, "kind", PreprocessKind::ThresholdControl, preprocess_kind_from_string);
    auto s = PreprocessStrategy::defaults(kind);
    auto budget = r.optional<long long>("token_budget", static_cast<long long>(s.token_budget));
    if (budget <= 0) config_error(r.field("token_budget"), "must be positive");
    s.token_budget = static_cast<std::size_t>(budget);
    if (const json* v = r.get("vertical_limit")) {
        auto limit = r.as<long long>("vertical_limit", *v);
        if (limit <= 0) config_error(r.field("vertical_limit"), "must be positive");
        s.vertical_limit = static_cast<std::size_t>(limit);
    }
    r.finish();
    return s;
}

AgentConfig parse_agent(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    AgentConfig a;
    a.agent_id = r.required<std::string>("id");
    if (a.agent_id.empty()) config_error(r.field("id"), "must be non-empty");
    if (const json* s = r.get("strategy")) a.strategy = parse_strategy(*s, r.field("strategy"));
    a.reasoner = enum_field(r, "reasoner", ReasonerKind::OracleReplay, reasoner_kind_from_string);
    auto policy = r.optional<std::vector<std::string>>("data_source_policy", {});
    a.data_source_policy = {policy.begin(), policy.end()};
    a.stores = r.optional<std::vector<std::string>>("stores", {});
    a.cost_per_call = r.non_negative("cost_per_call", 0.0);
    if (const json* l = r.get("latency")) a.latency = parse_latency(*l, r.field("latency"));
    auto top_k = r.optional<long long>("top_k_per_vertical", 10);
    if (top_k <= 0) config_error(r.field("top_k_per_vertical"), "must be positive");
    a.top_k_per_vertical = static_cast<std::size_t>(top_k);
    if (const json* p = r.get("profile")) a.profile = parse_profile(*p, r.field("profile"));
    if (const json* e = r.get("endpoint")) a.endpoint = parse_endpoint(*e, r.field("endpoint"));
    r.finish();
    try {
        validate_agent_config(a);
    } catch (const Error& e) {
        config_error(path, e.message());
    }
    return a;
}

CompositeSla parse_sla(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    auto name = r.optional<std::string>("name", "sla");
    const json& list = r.require("slos");
    if (!list.is_array()) config_error(r.field("slos"), "expected an array");
    std::vector<Slo> slos;
    for (std::size_t i = 0; i < list.size(); ++i) {
        ObjectReader s(list[i], r.field("slos") + "[" + std::to_string(i) + "]");
        Slo slo{};
        slo.attribute = enum_field(s, "attribute", QosKind::Precision, qos_kind_from_string);
        if (!s.get("attribute")) config_error(s.field("attribute"), "is required");
        slo.direction = enum_field(s, "direction", SloDirection::AtLeast, slo_direction_from_string);
        if (!s.get("direction")) config_error(s.field("direction"), "is required");
        slo.target = s.required<double>("target");
        s.finish();
        slos.push_back(slo);
    }
    r.finish();
    try {
        return compose_sla(std::move(slos), name);
    } catch (const Error& e) {
        config_error(path, e.message());
    }
}

ArbitrationStrategy parse_arbitration(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    ArbitrationStrategy a;
    a.kind = enum_field(r, "kind", ArbitrationKind::RandomWithThreshold, arbitration_kind_from_string);
    a.threshold = r.optional<double>("threshold", 0.5);
    a.rounding = enum_field(r, "rounding", Rounding::Floor, rounding_from_string);
    if (!(a.threshold > 0.0 && a.threshold < 1.0)) config_error(r.field("threshold"), "must be in (0,1)");
    r.finish();
    return a;
}

LinearInN parse_linear(const json& j, const std::string& path) {
    if (j.is_number()) {
        double v = j.get<double>();
        if (!(v >= 0.0)) config_error(path, "must be >= 0");
        return {v, 0.0};
    }
    ObjectReader r(j, path);
    LinearInN f{r.non_negative("fixed", 0.0), r.non_negative("per_agent", 0.0)};
    r.finish();
    return f;
}

AccountingParams parse_accounting(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    AccountingParams a;
    a.overhead_cost = r.non_negative("overhead_cost", 0.0);
    a.overhead_latency_ms = r.non_negative("overhead_latency_ms", 0.0);
    if (const json* v = r.get("arbitration_cost")) a.arbitration_cost = parse_linear(*v, r.field("arbitration_cost"));
    if (const json* v = r.get("arbitration_latency_ms"))
        a.arbitration_latency_ms = parse_linear(*v, r.field("arbitration_latency_ms"));
    r.finish();
    return a;
}

PlannerSpec parse_planner(const json& j, const std::string& path, const std::filesystem::path& base) {
    ObjectReader r(j, path);
    PlannerSpec p;
    auto sizes = r.required<std::vector<long long>>("ensemble_sizes");
    for (auto n : sizes) {
        if (n <= 0) config_error(r.field("ensemble_sizes"), "values must be positive");
        p.ensemble_sizes.push_back(static_cast<std::size_t>(n));
    }
    p.thresholds = r.optional<std::vector<double>>("thresholds", {0.5});
    for (double t : p.thresholds)
        if (!(t > 0.0 && t < 1.0)) config_error(r.field("thresholds"), "values must be in (0,1)");
    auto kinds = r.optional<std::vector<std::string>>("arbitration_kinds", {"vote_with_thresh"});
    for (const auto& k : kinds) {
        auto kind = arbitration_kind_from_string(k);
        if (!kind) config_error(r.field("arbitration_kinds"), "unknown kind '" + k + "'");
        p.arbitration_kinds.push_back(*kind);
    }
    p.rounding = enum_field(r, "rounding", Rounding::Floor, rounding_from_string);
    if (const json* c = r.get("calibration")) p.calibration = resolve(base, r.as<std::string>("calibration", *c));
    p.monte_carlo_fallback = r.optional<bool>("monte_carlo_fallback", true);
    auto trials = r.optional<long long>("fallback_trials", 20000);
    if (trials <= 0) config_error(r.field("fallback_trials"), "must be positive");
    p.fallback_trials = static_cast<std::size_t>(trials);
    p.scorer_model = enum_field(r, "scorer_model", ScorerModel::OracleFavorsCorrect, scorer_model_from_string);
    if (p.ensemble_sizes.empty() || p.thresholds.empty() || p.arbitration_kinds.empty())
        config_error(path, "grid dimensions must be non-empty");
    r.finish();
    return p;
}

IntentRulePack parse_intent_rules(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    const json& list = r.require("rules");
    if (!list.is_array()) config_error(r.field("rules"), "expected an array");
    std::vector<IntentRule> rules;
    for (std::size_t i = 0; i < list.size(); ++i) {
        ObjectReader rr(list[i], r.field("rules") + "[" + std::to_string(i) + "]");
        IntentRule rule{rr.required<std::string>("pattern"), IntentLabel::Other};
        rule.label = enum_field(rr, "label", IntentLabel::Other, intent_from_string);
        rr.finish();
        rules.push_back(std::move(rule));
    }
    auto fallback = enum_field(r, "default_label", IntentLabel::Other, intent_from_string);
    r.finish();
    try {
        return IntentRulePack(std::move(rules), fallback);
    } catch (const Error& e) {
        config_error(path, e.message());
    }
}

} // namespace

std::string config_hash(const json& raw) {
    json canonical = raw;
    if (canonical.is_object()) {
        canonical.erase("threads");
        canonical.erase("output");
    }
    return text::hex64(text::fnv1a64(canonical.dump()));
}

std::map<std::string, std::string> collect_env(char** environ_block) {
    std::map<std::string, std::string> out;
    for (char** e = environ_block; e && *e; ++e) {
        std::string_view entry(*e);
        auto eq = entry.find('=');
        if (eq == std::string_view::npos) continue;
        auto key = entry.substr(0, eq);
        if (key.starts_with(kEnvOverridePrefix)) out.emplace(std::string(key), std::string(entry.substr(eq + 1)));
    }
    return out;
}

void apply_env_overrides(json& raw, const std::map<std::string, std::string>& env) {
    std::string_view prefix(kEnvOverridePrefix);
    for (const auto& [key, value] : env) {
        if (!std::string_view(key).starts_with(prefix)) continue;
        std::string rest = text::to_lower(std::string_view(key).substr(prefix.size()));
        if (rest.empty()) continue;
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            auto pos = rest.find("__", start);
            parts.push_back(rest.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 2;
        }
        json* node = &raw;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            if (!node->is_object()) config_error(key, "cannot descend into a non-object");
            node = &(*node)[parts[i]];
            if (node->is_null()) *node = json::object();
        }
        if (!node->is_object()) config_error(key, "cannot descend into a non-object");
        json parsed = json::parse(value, nullptr, false);
        (*node)[parts.back()] = parsed.is_discarded() ? json(value) : parsed;
    }
}

ExperimentConfig parse_config(const json& raw, const std::filesystem::path& base) {
    ObjectReader r(raw, "");
    ExperimentConfig c;
    auto seed = r.optional<long long>("seed", 0);
    if (seed < 0) config_error("seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    auto threads = r.optional<long long>("threads", 1);
    if (threads <= 0) config_error("threads", "must be positive");
    c.threads = static_cast<unsigned>(threads);
    if (const json* d = r.get("dataset")) c.dataset = resolve(base, r.as<std::string>("dataset", *d));
    if (const json* q = r.get("queries")) c.queries = resolve(base, r.as<std::string>("queries", *q));

    if (const json* stores = r.get("stores")) {
        if (!stores->is_array()) config_error("stores", "expected an array");
        std::set<std::string> labels;
        for (std::size_t i = 0; i < stores->size(); ++i) {
            ObjectReader s((*stores)[i], "stores[" + std::to_string(i) + "]");
            StoreSpec spec{s.required<std::string>("label"), resolve(base, s.required<std::string>("path"))};
            if (!labels.insert(spec.label).second) config_error(s.field("label"), "duplicate store label");
            s.finish();
            c.stores.push_back(std::move(spec));
        }
    }
    auto dim = r.optional<long long>("embedding_dim", 64);
    if (dim < 8) config_error("embedding_dim", "must be >= 8");
    c.embedding_dim = static_cast<std::size_t>(dim);

    if (const json* s = r.get("sla")) c.sla = parse_sla(*s, "sla");

    if (const json* e = r.get("environment")) {
        ObjectReader er(*e, "environment");
        auto stores = er.optional<std::vector<std::string>>("available_stores", {});
        c.environment.available_stores = {stores.begin(), stores.end()};
        c.environment.external_api_up = er.optional<bool>("external_api_up", true);
        c.environment.local_model_available = er.optional<bool>("local_model_available", true);
        c.environment.cost_multiplier = er.optional<double>("cost_multiplier", 1.0);
        if (!(c.environment.cost_multiplier > 0.0)) config_error("environment.cost_multiplier", "must be > 0");
        er.finish();
    } else {
        for (const auto& s : c.stores) c.environment.available_stores.insert(s.label);
    }

    const json& agents = r.require("agents");
    if (!agents.is_array() || agents.empty()) config_error("agents", "expected a non-empty array");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        auto path = "agents[" + std::to_string(i) + "]";
        c.agents.push_back(parse_agent(agents[i], path));
        if (!ids.insert(c.agents.back().agent_id).second) config_error(path + ".id", "duplicate agent id");
    }

    if (const json* a = r.get("arbitration")) c.arbitration = parse_arbitration(*a, "arbitration");
    if (const json* p = r.get("planner")) c.planner = parse_planner(*p, "planner", base);
    if (const json* a = r.get("accounting")) c.accounting = parse_accounting(*a, "accounting");

    if (const json* s = r.get("simulation")) {
        ObjectReader sr(*s, "simulation");
        auto trials = sr.optional<long long>("trials", 100000);
        if (trials <= 0) config_error("simulation.trials", "must be positive");
        c.simulation.trials = static_cast<std::size_t>(trials);
        c.simulation.scorer_model =
            enum_field(sr, "scorer_model", ScorerModel::OracleFavorsCorrect, scorer_model_from_string);
        c.simulation.p_global_context = sr.optional<double>("p_global_context", 1.0);
        if (!(c.simulation.p_global_context >= 0.0 && c.simulation.p_global_context <= 1.0))
            config_error("simulation.p_global_context", "must be in [0,1]");
        sr.finish();
    }

    if (const json* m = r.get("metrics")) {
        ObjectReader mr(*m, "metrics");
        auto denom = mr.optional<std::string>("irr_denominator", "answers_provided");
        if (denom == "answers_provided") c.irr = IrrDenominator::AnswersProvided;
        else if (denom == "total_queries") c.irr = IrrDenominator::TotalQueries;
        else config_error("metrics.irr_denominator", "unknown value '" + denom + "'");
        mr.finish();
    }

    if (const json* s = r.get("scorer")) {
        ObjectReader sr(*s, "scorer");
        auto kind = sr.required<std::string>("kind");
        if (kind == "jaccard") {
            c.scorer.kind = ScorerSpec::Kind::Jaccard;
        } else if (kind == "http") {
            c.scorer.kind = ScorerSpec::Kind::Http;
            c.scorer.endpoint = parse_endpoint(sr.require("endpoint"), "scorer.endpoint");
        } else {
            config_error("scorer.kind", "unknown value '" + kind + "'");
        }
        sr.finish();
    }

    if (const json* i = r.get("intent_rules")) c.intent_rules = parse_intent_rules(*i, "intent_rules");
    c.prompt_template = r.optional<std::string>("prompt_template", c.prompt_template);
    c.refusal_marker = r.optional<std::string>("refusal_marker", c.refusal_marker);

    if (const json* o = r.get("output")) {
        ObjectReader orr(*o, "output");
        c.output_dir = resolve(base, orr.optional<std::string>("dir", "out"));
        c.output_format = orr.optional<std::string>("format", "csv");
        if (c.output_format != "csv" && c.output_format != "json") config_error("output.format", "must be csv or json");
        orr.finish();
    }
    r.finish();
    c.config_hash = config_hash(raw);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& env) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
    json raw;
    try {
        raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    apply_env_overrides(raw, env);
    return parse_config(raw, path.parent_path());
}

} // namespace slarag
