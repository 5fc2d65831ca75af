#include "helpers.hpp"

#include <map>

#include "slarag/arbitration.hpp"

using namespace slarag;
using testutil::candidate;
using testutil::check_code;

TEST_CASE("affirmative subset") {
    std::vector<CandidateResponse> c{candidate("a", true), candidate("b", false), candidate("c", true)};
    auto s = affirmative_subset(c);
    REQUIRE(s.size() == 2);
    CHECK(s[0].agent_id == "a");
    CHECK(s[1].agent_id == "c");
    std::vector<CandidateResponse> none{candidate("a", false)};
    CHECK(affirmative_subset(none).empty());
    CHECK(affirmative_subset({}).empty());
}

TEST_CASE("threshold gate") {
    CHECK(threshold_gate(5, 0, 0.5).k == 2);
    auto g = threshold_gate(3, 1, 0.5);
    CHECK(g.k == 1);
    CHECK(g.pass);
    g = threshold_gate(5, 1, 0.5);
    CHECK(g.k == 2);
    CHECK_FALSE(g.pass);
    CHECK(threshold_gate(10, 7, 0.7, Rounding::Ceil).k == 7);
    CHECK(threshold_gate(5, 3, 0.5, Rounding::Ceil).k == 3);
    check_code([] { threshold_gate(3, 1, 1.0); }, ErrorCode::InvalidThreshold);
    check_code([] { threshold_gate(3, 1, 0.0); }, ErrorCode::InvalidThreshold);
    check_code([] { threshold_gate(3, 4, 0.5); }, ErrorCode::OutOfRange);
}

TEST_CASE("gate failure gives a negative result") {
    std::vector<CandidateResponse> c{candidate("a1", true), candidate("a2", false), candidate("a3", false),
                                     candidate("a4", false), candidate("a5", false)};
    RngStream rng(1);
    auto out = arbitrate("q", c, {ArbitrationKind::RandomWithThreshold, 0.5, Rounding::Floor}, nullptr, rng);
    CHECK(out.decision == Decision::NegativeResult);
    CHECK(out.k == 2);
    CHECK(out.affirmative_count == 1);
    CHECK_FALSE(out.selected);
}

TEST_CASE("all negative gives a negative result even for ungated kinds") {
    std::vector<CandidateResponse> c{candidate("a", false), candidate("b", false)};
    RngStream rng(1);
    CandidateScorer scorer = [](std::string_view, const CandidateResponse&) { return 1.0; };
    for (auto kind : {ArbitrationKind::MostRelevant, ArbitrationKind::RandomNoThreshold})
        CHECK(arbitrate("q", c, {kind, 0.5, Rounding::Floor}, scorer, rng).decision == Decision::NegativeResult);
}

TEST_CASE("most relevant breaks ties by agent id") {
    std::vector<CandidateResponse> c{candidate("a3", true), candidate("a1", true), candidate("a2", true)};
    std::map<std::string, double> scores{{"a1", 0.2}, {"a2", 0.9}, {"a3", 0.9}};
    CandidateScorer scorer = [&](std::string_view, const CandidateResponse& r) { return scores.at(r.agent_id); };
    RngStream rng(1);
    for (auto kind : {ArbitrationKind::MostRelevant, ArbitrationKind::MostRelevantWithThreshold}) {
        auto out = arbitrate("q", c, {kind, 0.5, Rounding::Floor}, scorer, rng);
        REQUIRE(out.selected);
        CHECK(out.selected->agent_id == "a2");
        CHECK(out.selected->relevance == 0.9);
    }
}

TEST_CASE("singleton passes under every strategy") {
    std::vector<CandidateResponse> c{candidate("only", true)};
    CandidateScorer scorer = [](std::string_view, const CandidateResponse&) { return 0.1; };
    for (auto kind : {ArbitrationKind::RandomWithThreshold, ArbitrationKind::MostRelevant,
                      ArbitrationKind::MostRelevantWithThreshold, ArbitrationKind::RandomNoThreshold}) {
        RngStream rng(3);
        auto out = arbitrate("q", c, {kind, 0.5, Rounding::Floor}, scorer, rng);
        REQUIRE(out.selected);
        CHECK(out.selected->agent_id == "only");
    }
}

TEST_CASE("arbitration errors") {
    RngStream rng(1);
    check_code([&] { arbitrate("q", {}, {}, nullptr, rng); }, ErrorCode::EmptyCandidateSet);
    std::vector<CandidateResponse> c{candidate("a", true)};
    check_code([&] { arbitrate("q", c, {ArbitrationKind::MostRelevant, 0.5, Rounding::Floor}, nullptr, rng); },
               ErrorCode::MissingScorer);
}

TEST_CASE("random pick is uniform over affirmatives") {
    std::vector<CandidateResponse> c{candidate("a", true), candidate("b", true), candidate("c", false)};
    RngStream rng(9);
    std::map<std::string, int> hits;
    for (int i = 0; i < 20000; ++i)
        ++hits[arbitrate("q", c, {}, nullptr, rng).selected->agent_id];
    CHECK(hits.count("c") == 0);
    CHECK(hits["a"] / 20000.0 == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("arbitration names round trip") {
    CHECK(to_string(ArbitrationKind::RandomWithThreshold) == "vote_with_thresh");
    CHECK(to_string(ArbitrationKind::MostRelevantWithThreshold) == "vote_most_relevant_with_thresh");
    for (auto k : {ArbitrationKind::RandomWithThreshold, ArbitrationKind::MostRelevant,
                   ArbitrationKind::MostRelevantWithThreshold, ArbitrationKind::RandomNoThreshold})
        CHECK(arbitration_kind_from_string(to_string(k)) == k);
}
