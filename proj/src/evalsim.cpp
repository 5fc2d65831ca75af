#include "slarag/evalsim.hpp"

#include <array>
#include <cstdio>
#include <set>
#include <thread>

#include "slarag/error.hpp"

namespace slarag {

MetricCounts& MetricCounts::operator+=(const MetricCounts& o) {
    answers_provided += o.answers_provided;
    correct += o.correct;
    correct_with_context += o.correct_with_context;
    hallucinations += o.hallucinations;
    incongruent += o.incongruent;
    global_context_hits += o.global_context_hits;
    total_queries += o.total_queries;
    return *this;
}

double f1_score(double precision, double recall) {
    if (!(precision >= 0.0 && precision <= 1.0) || !(recall >= 0.0 && recall <= 1.0))
        throw Error(ErrorCode::OutOfRange, "precision and recall must be in [0,1]");
    double sum = precision + recall;
    return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

void count_outcome(MetricCounts& c, bool global_hit, Decision decision, std::optional<AnswerQuality> quality) {
    ++c.total_queries;
    if (global_hit) ++c.global_context_hits;
    if (decision != Decision::Answered) return;
    ++c.answers_provided;
    switch (*quality) {
        case AnswerQuality::Correct:
            ++c.correct;
            if (global_hit) ++c.correct_with_context;
            break;
        case AnswerQuality::Hallucination: ++c.hallucinations; break;
        case AnswerQuality::Incongruent:   ++c.incongruent; break;
    }
}

} // namespace

MetricsReport metrics_from_counts(const MetricCounts& c, IrrDenominator irr) {
    MetricsReport r;
    auto answered = static_cast<double>(c.answers_provided);
    r.precision = ratio(static_cast<double>(c.correct), answered);
    r.recall = ratio(static_cast<double>(c.correct_with_context), static_cast<double>(c.global_context_hits));
    r.f1 = f1_score(r.precision, r.recall);
    r.hallucination_rate = ratio(static_cast<double>(c.hallucinations), answered);
    r.incongruent_response_rate =
        ratio(static_cast<double>(c.incongruent),
              irr == IrrDenominator::AnswersProvided ? answered : static_cast<double>(c.total_queries));
    r.answered_fraction = ratio(answered, static_cast<double>(c.total_queries));
    r.counts = c;
    return r;
}

MetricsReport compute_metrics(std::span<const QueryOutcome> outcomes, IrrDenominator irr) {
    std::set<std::string_view> seen;
    MetricCounts c;
    for (const auto& o : outcomes) {
        if (!seen.insert(o.query_id).second) throw Error(ErrorCode::DuplicateQueryId, o.query_id);
        if (o.decision == Decision::Answered && !o.quality)
            throw Error(ErrorCode::ValidationError, o.query_id + ": answered outcome has no quality label");
        count_outcome(c, o.global_context_hit, o.decision, o.quality);
    }
    return metrics_from_counts(c, irr);
}

std::string_view to_string(ScorerModel m) {
    return m == ScorerModel::Uniform ? "uniform" : "oracle_favors_correct";
}

std::optional<ScorerModel> scorer_model_from_string(std::string_view name) {
    if (name == "uniform") return ScorerModel::Uniform;
    if (name == "oracle_favors_correct") return ScorerModel::OracleFavorsCorrect;
    return std::nullopt;
}

namespace {

MetricCounts simulate_range(std::span<const AgentProfile> profiles, const ArbitrationStrategy& strategy,
                            ScorerModel scorer_model, const SimulationOptions& options, std::size_t begin,
                            std::size_t end) {
    // Candidate scores are drawn before arbitration and carried in `relevance`.
    const CandidateScorer scorer = [](std::string_view, const CandidateResponse& c) { return *c.relevance; };
    std::vector<CandidateResponse> candidates(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "a%02zu", i);
        candidates[i].agent_id = id;
    }

    MetricCounts counts;
    for (std::size_t t = begin; t < end; ++t) {
        auto rng = RngStream::derive(options.seed, "monte_carlo_trial", t);
        bool global_hit = rng.bernoulli(options.p_global_context);
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            auto& c = candidates[i];
            auto drawn = sample_outcome(profiles[i], rng);
            double noise = rng.uniform();
            c.affirmative = drawn.affirmative;
            c.answer_text = drawn.affirmative ? std::optional<std::string>("answer") : std::nullopt;
            c.truth = AnswerAnnotation{ContextAvailability::AnswerExistsInContext,
                                       drawn.affirmative ? AnswerProvision::AnswerProvided
                                                         : AnswerProvision::NoAnswerProvided,
                                       drawn.quality};
            if (scorer_model == ScorerModel::OracleFavorsCorrect)
                c.relevance = drawn.quality == AnswerQuality::Correct ? 1.0 : 0.5 * noise;
            else
                c.relevance = noise;
        }
        auto outcome = arbitrate("", candidates, strategy, scorer, rng);
        std::optional<AnswerQuality> quality;
        if (outcome.decision == Decision::Answered) quality = outcome.selected->truth->answer_quality;
        count_outcome(counts, global_hit, outcome.decision, quality);
    }
    return counts;
}

} // namespace

MetricsReport monte_carlo(std::span<const AgentProfile> profiles, std::size_t ensemble_size,
                          const ArbitrationStrategy& strategy, ScorerModel scorer_model,
                          const SimulationOptions& options) {
    if (ensemble_size != profiles.size() || profiles.empty())
        throw Error(ErrorCode::ProfileMismatch, "ensemble size " + std::to_string(ensemble_size) + " but " +
                                                    std::to_string(profiles.size()) + " profiles");
    if (options.trials == 0) throw Error(ErrorCode::OutOfRange, "trials must be >= 1");
    for (const auto& p : profiles) validate_profile(p);
    strategy.validate();

    unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(options.trials)));
    std::vector<MetricCounts> partial(workers);
    {
        std::vector<std::jthread> pool;
        std::size_t chunk = (options.trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t begin = std::min(options.trials, w * chunk);
            std::size_t end = std::min(options.trials, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                partial[w] = simulate_range(profiles, strategy, scorer_model, options, begin, end);
            });
        }
    }
    MetricCounts total;
    for (const auto& p : partial) total += p;
    return metrics_from_counts(total, options.irr);
}

MetricsReport brute_force_ensemble_oracle(std::span<const AgentProfile> profiles, const ArbitrationStrategy& strategy,
                                          ScorerModel scorer_model, double p_global_context, IrrDenominator irr) {
    const std::size_t n = profiles.size();
    if (n == 0) throw Error(ErrorCode::ProfileMismatch, "no profiles");
    if (n > kMaxOracleAgents)
        throw Error(ErrorCode::TooManyAgents, std::to_string(n) + " agents exceeds " + std::to_string(kMaxOracleAgents));
    for (const auto& p : profiles) validate_profile(p);
    strategy.validate();

    // Per-agent state probabilities: negative, correct, hallucination, incongruent.
    std::vector<std::array<double, 4>> state_p;
    for (const auto& p : profiles)
        state_p.push_back({1.0 - p.p_affirmative, p.p_affirmative * p.p_correct,
                           p.p_affirmative * p.p_hallucination, p.p_affirmative * p.p_incongruent});

    double e_answered = 0.0, e_correct = 0.0, e_hall = 0.0, e_inc = 0.0;
    std::size_t joint = std::size_t{1} << (2 * n);
    for (std::size_t code = 0; code < joint; ++code) {
        double prob = 1.0;
        std::array<std::size_t, 4> tally{};
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t s = (code >> (2 * i)) & 3u;
            prob *= state_p[i][s];
            ++tally[s];
        }
        if (prob == 0.0) continue;
        std::size_t aff = tally[1] + tally[2] + tally[3];
        if (aff == 0) continue;
        if (uses_gate(strategy.kind) && !threshold_gate(n, aff, strategy.threshold, strategy.rounding).pass) continue;

        double pc, ph, pi;
        bool favors_correct = uses_scorer(strategy.kind) && scorer_model == ScorerModel::OracleFavorsCorrect;
        if (favors_correct && tally[1] > 0) {
            pc = 1.0;
            ph = pi = 0.0;
        } else {
            double denom = static_cast<double>(aff);
            pc = static_cast<double>(tally[1]) / denom;
            ph = static_cast<double>(tally[2]) / denom;
            pi = static_cast<double>(tally[3]) / denom;
        }
        e_answered += prob;
        e_correct += prob * pc;
        e_hall += prob * ph;
        e_inc += prob * pi;
    }

    MetricsReport r;
    r.precision = ratio(e_correct, e_answered);
    // Context availability is independent of agent outcomes, so
    // P(correct | global hit) = P(correct).
    r.recall = p_global_context > 0.0 ? e_correct : 0.0;
    r.f1 = f1_score(r.precision, r.recall);
    r.hallucination_rate = ratio(e_hall, e_answered);
    r.incongruent_response_rate = irr == IrrDenominator::AnswersProvided ? ratio(e_inc, e_answered) : e_inc;
    r.answered_fraction = e_answered;
    return r;
}

} // namespace slarag
