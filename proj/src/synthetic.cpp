#include "slarag/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "slarag/agents.hpp"
#include "slarag/rng.hpp"

namespace slarag {

namespace {

constexpr std::array<std::string_view, 12> kObjects{
    "phone", "router", "account", "order", "subscription", "membership",
    "printer", "password", "gift card", "warranty", "appointment", "reservation"};

constexpr std::array<std::string_view, 6> kActions{"reset", "cancel", "update", "transfer", "renew", "activate"};

constexpr std::array<std::string_view, 3> kVerticals{"faq", "help_articles", "locations"};

AgentProfile from_measured(double precision, double recall, double hallucination) {
    // recall can exceed precision (vertical row), which would push the rate past 1
    return AgentProfile{std::min(1.0, recall / precision), precision, hallucination, 1.0 - precision - hallucination};
}

} // namespace

std::vector<SyntheticAgentSpec> reference_single_agent_specs() {
    return {
        {"agent_aggressive", PreprocessKind::AggressiveThreshold, from_measured(0.670, 0.656, 0.235)},
        {"agent_control", PreprocessKind::ThresholdControl, from_measured(0.656, 0.640, 0.239)},
        {"agent_rerank", PreprocessKind::RerankThenThreshold, from_measured(0.652, 0.529, 0.187)},
        {"agent_rerank_vertical", PreprocessKind::RerankThenVerticalThreshold, from_measured(0.619, 0.571, 0.249)},
        {"agent_vertical", PreprocessKind::VerticalThreshold, from_measured(0.654, 0.656, 0.249)},
    };
}

SyntheticCorpus generate_synthetic(std::size_t n_queries, std::span<const SyntheticAgentSpec> agents,
                                   std::uint64_t seed) {
    for (const auto& a : agents) validate_profile(a.profile);
    std::vector<AnnotatedRecord> records;
    std::vector<Document> documents;
    for (std::size_t i = 0; i < n_queries; ++i) {
        char qid[32];
        std::snprintf(qid, sizeof qid, "q%05zu", i);
        auto object = std::string(kObjects[i % kObjects.size()]);
        auto action = std::string(kActions[(i / kObjects.size()) % kActions.size()]);
        std::string query = "How do I " + action + " my " + object + "?";

        std::vector<std::int64_t> uids;
        for (std::size_t v = 0; v < kVerticals.size(); ++v) {
            auto uid = static_cast<std::int64_t>(10000 + i * kVerticals.size() + v);
            uids.push_back(uid);
            std::string body;
            switch (v) {
                case 0: body = "To " + action + " your " + object + " open settings and choose " + action + " " + object + "."; break;
                case 1: body = "Help article: steps to " + action + " a " + object + " online or by phone support."; break;
                default: body = "Visit a store location to " + action + " your " + object + " in person with staff."; break;
            }
            documents.push_back({uid, std::string(kVerticals[v]), body, std::nullopt});
        }

        for (const auto& agent : agents) {
            auto rng = RngStream::derive(seed, agent.agent_id, qid);
            AnnotatedRecord r;
            r.query_id = qid;
            r.agent_id = agent.agent_id;
            r.query = query;
            r.intent = IntentLabel::DirectlyAnswerable;
            r.context_uids = uids;
            r.annotation.context_availability = rng.bernoulli(agent.p_context_exists)
                                                    ? ContextAvailability::AnswerExistsInContext
                                                    : ContextAvailability::AnswerDoesNotExist;
            auto drawn = sample_outcome(agent.profile, rng);
            if (drawn.affirmative) {
                r.annotation.answer_provision = AnswerProvision::AnswerProvided;
                r.annotation.answer_quality = drawn.quality;
                switch (*drawn.quality) {
                    case AnswerQuality::Correct:
                        r.answer_text = "Open settings and choose " + action + " " + object + ".";
                        break;
                    case AnswerQuality::Hallucination:
                        r.answer_text = "Call the national hotline; every " + object + " is handled there.";
                        break;
                    case AnswerQuality::Incongruent:
                        r.answer_text = "According to the context provided, you can " + action + " it.";
                        break;
                }
            }
            records.push_back(std::move(r));
        }
    }
    return {AnnotatedDataset(std::move(records)), std::move(documents)};
}

} // namespace slarag
