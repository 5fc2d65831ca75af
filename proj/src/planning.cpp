#include "slarag/planning.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "slarag/error.hpp"
#include "slarag/text.hpp"

namespace slarag {

// ---------------------------------------------------------------------------
// Intent detection

IntentRulePack::IntentRulePack(std::vector<IntentRule> rules, IntentLabel default_label)
    : rules_(std::move(rules)), default_label_(default_label) {
    compiled_.reserve(rules_.size());
    for (const auto& r : rules_) {
        try {
            compiled_.emplace_back(r.pattern, std::regex::ECMAScript | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw Error(ErrorCode::ValidationError, "bad intent pattern '" + r.pattern + "': " + e.what());
        }
    }
}

IntentRulePack IntentRulePack::defaults() {
    return IntentRulePack(
        {
            {R"(\bnear me\b)", IntentLabel::RequestForList},
            {R"(^\s*(list|show me (all|a list)|what are (all|some) )|\b(a list of|top \d+)\b)", IntentLabel::RequestForList},
            {R"(\b(summarize|summarise|summary|tl;?dr|overview of)\b)", IntentLabel::RequestForSummarization},
            {R"(\b(price|pricing|buy|purchase|quote|discount|how much (is|does|do))\b)", IntentLabel::SalesInquiry},
            {R"(^\s*(how do i|how to|how can i|how does|how long|how many|what|when|where|who|which|why|is|are|can|do|does|did|will|should|could|would)\b)",
             IntentLabel::DirectlyAnswerable},
            {R"(\?\s*$)", IntentLabel::DirectlyAnswerable},
            {R"(^\s*(i|i'm|im|my|please|we|our)\b)", IntentLabel::NonQuestionStatement},
        },
        IntentLabel::Other);
}

IntentLabel IntentRulePack::classify(std::string_view query) const {
    auto lowered = text::to_lower(query);
    for (std::size_t i = 0; i < compiled_.size(); ++i)
        if (std::regex_search(lowered, compiled_[i])) return rules_[i].label;
    return default_label_;
}

IntentLabel classify_intent(std::string_view query, const IntentRulePack& rules) { return rules.classify(query); }

// ---------------------------------------------------------------------------
// Fingerprints

ConfigFingerprint ConfigFingerprint::of(const std::vector<AgentConfig>& agents, const ArbitrationStrategy& arbitration) {
    ConfigFingerprint fp;
    for (const auto& a : agents) fp.strategies.push_back(a.strategy.kind);
    std::sort(fp.strategies.begin(), fp.strategies.end(),
              [](PreprocessKind a, PreprocessKind b) { return slarag::to_string(a) < slarag::to_string(b); });
    fp.ensemble_size = agents.size();
    fp.threshold = arbitration.threshold;
    fp.arbitration = arbitration.kind;
    fp.rounding = arbitration.rounding;
    return fp;
}

std::string ConfigFingerprint::to_string() const {
    std::string out = "n=" + std::to_string(ensemble_size);
    if (ensemble_size > 1) {
        out += "|t=" + text::format_double(threshold);
        out += "|arb=";
        out += slarag::to_string(arbitration);
        if (rounding == Rounding::Ceil) out += "|round=ceil";
    }
    out += "|strategies=";
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        if (i) out += '+';
        out += slarag::to_string(strategies[i]);
    }
    return out;
}

ConfigFingerprint ConfigFingerprint::parse(std::string_view s) {
    ConfigFingerprint fp;
    bool has_n = false;
    auto fail = [&](const std::string& why) {
        return Error(ErrorCode::ParseError, "fingerprint '" + std::string(s) + "': " + why);
    };
    for (const auto& part : text::split(text::trim(s), '|')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw fail("expected key=value");
        auto key = part.substr(0, eq);
        auto value = std::string_view(part).substr(eq + 1);
        if (key == "n") {
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), fp.ensemble_size);
            if (ec != std::errc{} || p != value.data() + value.size() || fp.ensemble_size == 0) throw fail("bad n");
            has_n = true;
        } else if (key == "t") {
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), fp.threshold);
            if (ec != std::errc{} || p != value.data() + value.size()) throw fail("bad t");
        } else if (key == "arb") {
            auto k = arbitration_kind_from_string(value);
            if (!k) throw fail("bad arb");
            fp.arbitration = *k;
        } else if (key == "round") {
            auto r = rounding_from_string(value);
            if (!r) throw fail("bad round");
            fp.rounding = *r;
        } else if (key == "strategies") {
            for (const auto& name : text::split(value, '+')) {
                auto k = preprocess_kind_from_string(name);
                if (!k) throw fail("unknown strategy '" + name + "'");
                fp.strategies.push_back(*k);
            }
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    if (!has_n) throw fail("missing n");
    if (fp.strategies.size() != fp.ensemble_size) throw fail("strategy count does not match n");
    std::sort(fp.strategies.begin(), fp.strategies.end(),
              [](PreprocessKind a, PreprocessKind b) { return slarag::to_string(a) < slarag::to_string(b); });
    return fp;
}

// ---------------------------------------------------------------------------
// Calibration

CalibrationTable::CalibrationTable(std::vector<CalibrationEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!index_.emplace(entries_[i].fingerprint.to_string(), i).second)
            throw Error(ErrorCode::ValidationError, "duplicate calibration fingerprint " + entries_[i].fingerprint.to_string());
}

const CalibrationEntry* CalibrationTable::find(const ConfigFingerprint& fp) const {
    auto it = index_.find(fp.to_string());
    return it == index_.end() ? nullptr : &entries_[it->second];
}

CalibrationTable read_calibration_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    std::vector<CalibrationEntry> entries;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto cells = text::split(trimmed, ',');
        for (auto& c : cells) c = std::string(text::trim(c));
        if (header.empty()) {
            header = cells;
            if (header.empty() || header.front() != "experiment_version")
                throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected experiment_version header");
            continue;
        }
        if (cells.size() != header.size())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": column count mismatch");
        CalibrationEntry e;
        bool has_cost = false;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == 0) {
                e.fingerprint = ConfigFingerprint::parse(cells[0]);
                continue;
            }
            if (cells[i].empty()) continue;
            double v = 0.0;
            auto [p, ec] = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
            if (ec != std::errc{} || p != cells[i].data() + cells[i].size())
                throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + cells[i] + "'");
            const auto& col = header[i];
            if (col == "mean_cost") {
                e.cost = v;
                has_cost = true;
            } else if (col == "hallucination_rate") e.measured[QosKind::HallucinationRate] = v;
            else if (col == "incongruent_response_rate") e.measured[QosKind::IncongruentResponseRate] = v;
            else if (col == "p50_latency_ms") e.measured[QosKind::LatencyP50] = v;
            else if (col == "max_latency_ms") e.measured[QosKind::LatencyMax] = v;
            else if (auto kind = qos_kind_from_string(col)) e.measured[*kind] = v;
            // other columns (answered_fraction, ...) are informational
        }
        if (!has_cost) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": mean_cost is required");
        e.measured.try_emplace(QosKind::CostPerQuery, e.cost);
        entries.push_back(std::move(e));
    }
    return CalibrationTable(std::move(entries));
}

CalibrationTable load_calibration_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_calibration_csv(in);
}

Estimate estimate_config(const std::vector<AgentConfig>& agents, const ArbitrationStrategy& arbitration,
                         const CalibrationTable& calibration, const MonteCarloEstimator* fallback) {
    auto fp = ConfigFingerprint::of(agents, arbitration);
    if (const auto* entry = calibration.find(fp)) {
        Estimate est{entry->measured, entry->cost};
        est.attributes.try_emplace(QosKind::CostPerQuery, entry->cost);
        return est;
    }
    if (fallback == nullptr)
        throw Error(ErrorCode::EstimationUnavailable, "no calibration row for " + fp.to_string());
    std::vector<AgentProfile> profiles;
    for (const auto& a : agents) {
        if (!a.profile) throw Error(ErrorCode::EstimationUnavailable, a.agent_id + " has no profile");
        profiles.push_back(*a.profile);
    }

    SimulationOptions options;
    options.trials = fallback->trials;
    options.seed = fallback->seed;
    options.p_global_context = fallback->p_global_context;
    auto report = monte_carlo(profiles, profiles.size(), arbitration, fallback->scorer_model, options);

    Estimate est;
    est.attributes[QosKind::Precision] = report.precision;
    est.attributes[QosKind::Recall] = report.recall;
    est.attributes[QosKind::F1] = report.f1;
    est.attributes[QosKind::HallucinationRate] = report.hallucination_rate;
    est.attributes[QosKind::IncongruentResponseRate] = report.incongruent_response_rate;

    AccountingParams accounting = fallback->accounting ? *fallback->accounting : AccountingParams{};
    std::vector<CandidateResponse> priced(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) priced[i].cost = agents[i].cost_per_call;
    est.cost = cost_of(priced, accounting);
    est.attributes[QosKind::CostPerQuery] = est.cost;

    // Latency distribution of L_sys from the agents' latency models.
    std::size_t samples = std::max<std::size_t>(1, std::min<std::size_t>(fallback->trials, 10000));
    std::vector<double> l_sys(samples);
    for (std::size_t t = 0; t < samples; ++t) {
        auto rng = RngStream::derive(fallback->seed, "latency_estimate", t);
        for (std::size_t i = 0; i < agents.size(); ++i) priced[i].latency_ms = agents[i].latency.sample(rng);
        l_sys[t] = latency_of(priced, accounting);
    }
    std::sort(l_sys.begin(), l_sys.end());
    est.attributes[QosKind::LatencyP50] = l_sys[(samples + 1) / 2 - 1];
    est.attributes[QosKind::LatencyMax] = l_sys.back();
    return est;
}

// ---------------------------------------------------------------------------
// Planner

namespace {

bool agent_allowed(const AgentConfig& a, const Environment& env) {
    if (a.reasoner == ReasonerKind::ExternalHttp && !env.external_api_up) return false;
    return std::all_of(a.data_source_policy.begin(), a.data_source_policy.end(),
                       [&](const std::string& s) { return env.available_stores.contains(s); });
}

// Calls fn(indices) for every size-k subset of [0, n) in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
    if (k == 0 || k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

std::vector<PlanCandidate> enumerate_candidates(const SearchGrid& grid, const Environment& env) {
    std::vector<AgentConfig> pool;
    for (const auto& a : grid.agent_pool)
        if (agent_allowed(a, env)) pool.push_back(a);
    std::sort(pool.begin(), pool.end(), [](const AgentConfig& a, const AgentConfig& b) { return a.agent_id < b.agent_id; });

    auto sizes = grid.ensemble_sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    std::vector<PlanCandidate> out;
    std::set<std::string> seen;
    for (std::size_t n : sizes) {
        for_each_combination(pool.size(), n, [&](const std::vector<std::size_t>& idx) {
            std::vector<AgentConfig> agents;
            for (auto i : idx) agents.push_back(pool[i]);
            for (double t : grid.thresholds) {
                for (auto kind : grid.arbitration_kinds) {
                    ArbitrationStrategy arb{kind, t, grid.rounding};
                    arb.validate();
                    auto fp = ConfigFingerprint::of(agents, arb);
                    if (!seen.insert(fp.to_string()).second) continue;
                    out.push_back({agents, arb, fp});
                }
            }
        });
    }
    return out;
}

EnsembleConfig plan(IntentLabel intent, const CompositeSla& sla, const Environment& env,
                    const CalibrationTable& calibration, const SearchGrid& grid, const MonteCarloEstimator* fallback) {
    if (grid.agent_pool.empty() || grid.ensemble_sizes.empty() || grid.thresholds.empty() ||
        grid.arbitration_kinds.empty())
        throw Error(ErrorCode::EmptySearchSpace, "planner grid has an empty dimension");
    if (!(env.cost_multiplier > 0.0)) throw Error(ErrorCode::ValidationError, "cost_multiplier must be > 0");

    auto candidates = enumerate_candidates(grid, env);
    if (candidates.empty()) throw Error(ErrorCode::EmptySearchSpace, "no ensemble fits the environment");

    std::optional<EnsembleConfig> best;
    std::string best_key;
    for (auto& cand : candidates) {
        Estimate est;
        try {
            est = estimate_config(cand.agents, cand.arbitration, calibration, fallback);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::EstimationUnavailable) continue;
            throw;
        }
        double cost = est.cost * env.cost_multiplier;
        est.attributes[QosKind::CostPerQuery] = cost;

        bool feasible = true;
        try {
            feasible = evaluate_slo(est.attributes, sla).overall;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MissingObservation) throw;
            feasible = false;
        }
        if (!feasible) continue;

        auto key = cand.fingerprint.to_string();
        bool better = !best || cost < best->predicted_cost ||
                      (cost == best->predicted_cost && (cand.agents.size() < best->agents.size() ||
                                                        (cand.agents.size() == best->agents.size() && key < best_key)));
        if (!better) continue;
        best = EnsembleConfig{intent, cand.agents, cand.arbitration, est.attributes, cost, cand.fingerprint};
        best_key = key;
    }
    if (!best) throw Error(ErrorCode::InfeasibleSla, "no configuration in the grid satisfies SLA '" + sla.name + "'");
    return *best;
}

} // namespace slarag
