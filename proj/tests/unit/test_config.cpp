#include "helpers.hpp"

#include <json.hpp>

#include "slarag/config.hpp"

using namespace slarag;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
        "seed": 5,
        "stores": [{"label": "public", "path": "store.jsonl"}],
        "agents": [{"id": "a1", "strategy": {"kind": "aggressive_threshold"}, "cost_per_call": 0.5,
                    "data_source_policy": ["public"], "latency": {"kind": "constant", "ms": 200}}]
    })");
}

std::string config_error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        return e.what();
    }
    FAIL("expected ConfigError");
    return {};
}

} // namespace

TEST_CASE("minimal config with defaults") {
    auto c = parse_config(minimal(), "/data");
    CHECK(c.seed == 5);
    CHECK(c.agents.size() == 1);
    CHECK(c.agents[0].strategy.token_budget == 6000);
    CHECK(c.agents[0].latency.lo == 200);
    CHECK(c.stores[0].path == "/data/store.jsonl");
    CHECK(c.environment.available_stores == std::set<std::string>{"public"});
    CHECK(c.arbitration.kind == ArbitrationKind::RandomWithThreshold);
    CHECK(c.simulation.trials == 100000);
    CHECK(c.config_hash.size() == 16);
}

TEST_CASE("schema errors name the field") {
    auto j = minimal();
    j["agents"][0]["cost_per_call"] = -1;
    CHECK(config_error_of(j).find("agents[0].cost_per_call") != std::string::npos);

    j = minimal();
    j["agents"][0]["colour"] = "blue";
    CHECK(config_error_of(j).find("agents[0].colour") != std::string::npos);

    j = minimal();
    j["bogus"] = 1;
    CHECK(config_error_of(j).find("bogus") != std::string::npos);

    j = minimal();
    j["arbitration"] = {{"kind", "vote_with_thresh"}, {"threshold", 1.5}};
    CHECK(config_error_of(j).find("arbitration.threshold") != std::string::npos);

    j = minimal();
    j["agents"][0]["strategy"]["kind"] = "nope";
    CHECK(config_error_of(j).find("agents[0].strategy.kind") != std::string::npos);

    j = minimal();
    j["agents"].push_back(j["agents"][0]);
    CHECK(config_error_of(j).find("duplicate agent id") != std::string::npos);

    j = minimal();
    j["sla"] = {{"slos", {{{"attribute", "precision"}, {"direction", "at_most"}, {"target", 0.5}}}}};
    CHECK(config_error_of(j).find("sla") != std::string::npos);

    j = minimal();
    j.erase("agents");
    CHECK(config_error_of(j).find("agents") != std::string::npos);
}

TEST_CASE("environment overrides") {
    auto j = minimal();
    apply_env_overrides(j, {{"SLARAG_SEED", "9"},
                            {"SLARAG_SIMULATION__TRIALS", "500"},
                            {"SLARAG_OUTPUT__FORMAT", "json"},
                            {"OTHER", "x"}});
    auto c = parse_config(j);
    CHECK(c.seed == 9);
    CHECK(c.simulation.trials == 500);
    CHECK(c.output_format == "json");
}

TEST_CASE("config hash ignores threads and output") {
    auto a = minimal();
    auto b = minimal();
    b["threads"] = 8;
    b["output"] = {{"dir", "elsewhere"}};
    CHECK(config_hash(a) == config_hash(b));
    b["seed"] = 6;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("planner and accounting sections") {
    auto j = minimal();
    j["planner"] = json::parse(R"({"ensemble_sizes": [1, 3], "thresholds": [0.5, 0.7],
        "arbitration_kinds": ["vote_most_relevant"], "rounding": "ceil", "calibration": "cal.csv",
        "monte_carlo_fallback": false})");
    j["accounting"] = json::parse(R"({"overhead_cost": 0.01, "arbitration_cost": 0.005,
        "arbitration_latency_ms": {"fixed": 40, "per_agent": 2}})");
    auto c = parse_config(j, "/cfg");
    REQUIRE(c.planner);
    CHECK(c.planner->ensemble_sizes == std::vector<std::size_t>{1, 3});
    CHECK(c.planner->rounding == Rounding::Ceil);
    CHECK(*c.planner->calibration == "/cfg/cal.csv");
    CHECK_FALSE(c.planner->monte_carlo_fallback);
    CHECK(c.accounting.arbitration_cost(5) == 0.005);
    CHECK(c.accounting.arbitration_latency_ms(5) == 50);
}
