#pragma once

#include <string>
#include <vector>

#include <doctest.h>

#include "slarag/agents.hpp"
#include "slarag/dataset.hpp"
#include "slarag/error.hpp"

namespace testutil {

// Runs fn and checks it throws slarag::Error with the given code.
template <typename Fn>
void check_code(Fn&& fn, slarag::ErrorCode code) {
    try {
        fn();
        FAIL("expected an error");
    } catch (const slarag::Error& e) {
        CHECK(e.code() == code);
    }
}

inline slarag::AnnotatedRecord record(std::string qid, std::string agent, bool exists,
                                      std::optional<slarag::AnswerQuality> quality,
                                      std::string query = "How do I reset my phone?") {
    using namespace slarag;
    AnnotatedRecord r;
    r.query_id = std::move(qid);
    r.agent_id = std::move(agent);
    r.query = std::move(query);
    r.context_uids = {1, 2};
    r.annotation.context_availability =
        exists ? ContextAvailability::AnswerExistsInContext : ContextAvailability::AnswerDoesNotExist;
    if (quality) {
        r.annotation.answer_provision = AnswerProvision::AnswerProvided;
        r.annotation.answer_quality = quality;
        r.answer_text = "Hold the power button.";
    }
    return r;
}

inline slarag::CandidateResponse candidate(std::string id, bool affirmative, double cost = 0.0,
                                           double latency = 0.0) {
    slarag::CandidateResponse c;
    c.agent_id = std::move(id);
    c.affirmative = affirmative;
    if (affirmative) c.answer_text = "answer from " + c.agent_id;
    c.cost = cost;
    c.latency_ms = latency;
    return c;
}

} // namespace testutil
