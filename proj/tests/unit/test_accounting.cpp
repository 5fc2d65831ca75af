#include "helpers.hpp"

#include "slarag/accounting.hpp"

using namespace slarag;
using testutil::candidate;
using testutil::check_code;

TEST_CASE("system cost is a plain sum") {
    std::vector<CandidateResponse> five;
    for (int i = 0; i < 5; ++i) five.push_back(candidate("a" + std::to_string(i), true, 0.02));
    AccountingParams p;
    p.overhead_cost = 0.01;
    p.arbitration_cost = {0.005, 0.0};
    CHECK(cost_of(five, p) == doctest::Approx(0.115).epsilon(1e-12));

    std::vector<CandidateResponse> one{candidate("a", true, 0.0)};
    CHECK(cost_of(one, AccountingParams{}) == 0.0);

    std::vector<CandidateResponse> three{candidate("a", true, 0.5), candidate("b", true, 0.5),
                                         candidate("c", false, 0.5)};
    AccountingParams q;
    q.overhead_cost = 1;
    q.arbitration_cost = {0.2, 0.0};
    CHECK(cost_of(three, q) == doctest::Approx(2.7));
}

TEST_CASE("system latency takes the slowest agent") {
    std::vector<CandidateResponse> c{candidate("a", true, 0, 220), candidate("b", true, 0, 540),
                                     candidate("c", true, 0, 310)};
    AccountingParams p;
    p.overhead_latency_ms = 100;
    p.arbitration_latency_ms = {40, 0};
    CHECK(latency_of(c, p) == 680);

    std::vector<CandidateResponse> one{candidate("a", true, 0, 200)};
    CHECK(latency_of(one, AccountingParams{}) == 200);

    std::vector<CandidateResponse> eq{candidate("a", true, 0, 300), candidate("b", true, 0, 300)};
    AccountingParams r;
    r.overhead_latency_ms = 50;
    r.arbitration_latency_ms = {10, 0};
    CHECK(latency_of(eq, r) == 360);
}

TEST_CASE("arbitration terms scale with N") {
    LinearInN f{1.0, 0.25};
    CHECK(f(4) == 2.0);
    AccountingParams p;
    p.arbitration_cost = {-1, 0};
    check_code([&] { p.validate(); }, ErrorCode::ValidationError);
}
