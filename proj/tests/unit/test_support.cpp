#include "helpers.hpp"

#include <set>

#include "slarag/rng.hpp"
#include "slarag/synthetic.hpp"
#include "slarag/text.hpp"

using namespace slarag;

TEST_CASE("derived streams are stable and distinct") {
    auto a = RngStream::derive(1, "agent", "q1");
    auto b = RngStream::derive(1, "agent", "q1");
    auto c = RngStream::derive(1, "agent", "q2");
    auto d = RngStream::derive(1, "agen", "tq1");
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
    CHECK(RngStream::derive(5, "t", std::uint64_t{3}).next_u64() == RngStream::derive(5, "t", std::uint64_t{3}).next_u64());
}

TEST_CASE("uniform and index ranges") {
    RngStream r(11);
    for (int i = 0; i < 10000; ++i) {
        double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r.index(3) < 3);
    }
}

TEST_CASE("text helpers") {
    CHECK(text::word_tokens("Reset, my PHONE!") == std::vector<std::string>{"reset", "my", "phone"});
    CHECK(text::split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
    CHECK(text::trim("  x \t") == "x");
    CHECK(text::format_double(0.1) == "0.1");
    CHECK(text::format_double(3.0) == "3");
    CHECK(text::format_fixed(0.6625, 3) == "0.662");
    CHECK(text::hex64(255) == "00000000000000ff");
    CHECK(text::fnv1a64("") == 14695981039346656037ULL);
    CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("synthetic corpus") {
    auto specs = reference_single_agent_specs();
    REQUIRE(specs.size() == 5);
    for (const auto& s : specs) validate_profile(s.profile);
    auto a = generate_synthetic(20, specs, 9);
    auto b = generate_synthetic(20, specs, 9);
    CHECK(a.dataset.records() == b.dataset.records());
    CHECK(a.dataset.records().size() == 100);
    CHECK(a.documents.size() == 60);
    std::set<std::int64_t> uids;
    for (const auto& d : a.documents) uids.insert(d.uid);
    CHECK(uids.size() == 60);
    CHECK(generate_synthetic(20, specs, 10).dataset.records() != a.dataset.records());
}
