#include "helpers.hpp"

#include <cmath>
#include <sstream>

#include "slarag/relevance.hpp"
#include "slarag/retrieval.hpp"

using namespace slarag;
using testutil::check_code;

TEST_CASE("embed is deterministic and normalised") {
    auto a = embed("reset phone", 64);
    auto b = embed("reset phone", 64);
    CHECK(a == b);
    double norm = 0;
    for (double x : a) norm += x * x;
    CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-9);

    auto zero = embed("", 64);
    CHECK(zero.size() == 64);
    for (double x : zero) CHECK(x == 0.0);
    check_code([] { embed("x", 4); }, ErrorCode::ValidationError);
}

TEST_CASE("cosine similarity") {
    std::vector<double> x{1, 0}, y{0, 1}, d{1, 1};
    CHECK(cosine_similarity(x, x) == doctest::Approx(1.0));
    CHECK(cosine_similarity(x, y) == doctest::Approx(0.0));
    CHECK(std::abs(cosine_similarity(d, x) - 0.70710678) < 1e-8);
    std::vector<double> z{0, 0};
    CHECK(cosine_similarity(z, x) == 0.0);
    std::vector<double> three{1, 0, 0};
    check_code([&] { cosine_similarity(x, three); }, ErrorCode::DimensionMismatch);
}

TEST_CASE("identical document ranks first with score 1") {
    DocumentStore store("public", {{1, "faq", "visit a store near you", {}}, {2, "faq", "reset phone", {}}}, 64);
    auto res = search("reset phone", store, 10);
    REQUIRE(res.verticals.size() == 1);
    CHECK(res.verticals[0].docs[0].doc->uid == 2);
    CHECK(std::abs(res.verticals[0].docs[0].score - 1.0) < 1e-9);
}

TEST_CASE("verticals ordered by best score and truncated to top_k") {
    DocumentStore store("public",
                        {{1, "a", "opening hours for the store", {}},
                         {2, "a", "parking information", {}},
                         {3, "a", "gift cards", {}},
                         {4, "b", "reset phone settings", {}}},
                        64);
    auto res = search("reset phone", store, 1);
    REQUIRE(res.verticals.size() == 2);
    CHECK(res.verticals[0].label == "b");
    CHECK(res.verticals[1].label == "a");
    CHECK(res.verticals[1].docs.size() == 1);
    CHECK(res.doc_count() == 2);
}

TEST_CASE("store validation") {
    check_code([] { DocumentStore("s", {{1, "a", "x", {}}, {1, "a", "y", {}}}, 16); }, ErrorCode::ValidationError);
    check_code([] { DocumentStore("s", {{1, "a", "x", Embedding(8, 0.0)}}, 16); }, ErrorCode::DimensionMismatch);
    DocumentStore empty("s", {}, 16);
    check_code([&] { search("q", empty, 3); }, ErrorCode::EmptyStore);
}

TEST_CASE("store round trip") {
    DocumentStore store("public", {{7, "faq", "reset phone", {}}}, 32);
    std::stringstream buf;
    write_store(buf, store);
    auto back = read_store(buf, "public", 32);
    REQUIRE(back.documents().size() == 1);
    CHECK(back.documents()[0].uid == 7);
    CHECK(*back.documents()[0].embedding == *store.documents()[0].embedding);
}

TEST_CASE("surrogate relevance is token jaccard") {
    CHECK(surrogate_relevance("reset phone", "reset the phone now") == doctest::Approx(0.5));
    CHECK(surrogate_relevance("Reset phone", "reset PHONE") == 1.0);
    CHECK(surrogate_relevance("alpha", "beta") == 0.0);
    CHECK(surrogate_relevance("", "") == 0.0);
}
