#include "helpers.hpp"

#include <sstream>

#include "slarag/planning.hpp"

using namespace slarag;
using testutil::check_code;

namespace {

AgentConfig agent(std::string id, PreprocessKind kind, double cost = 1.0) {
    AgentConfig a;
    a.agent_id = std::move(id);
    a.strategy = PreprocessStrategy::defaults(kind);
    a.cost_per_call = cost;
    return a;
}

SearchGrid five_agent_grid() {
    SearchGrid g;
    g.agent_pool = {agent("agent_aggressive", PreprocessKind::AggressiveThreshold),
                    agent("agent_control", PreprocessKind::ThresholdControl),
                    agent("agent_rerank", PreprocessKind::RerankThenThreshold),
                    agent("agent_rerank_vertical", PreprocessKind::RerankThenVerticalThreshold),
                    agent("agent_vertical", PreprocessKind::VerticalThreshold)};
    g.ensemble_sizes = {1, 3, 5};
    g.thresholds = {0.5};
    g.arbitration_kinds = {ArbitrationKind::RandomWithThreshold};
    return g;
}

const char* kCalibration =
    "# comment\n"
    "experiment_version,recall,precision,f1,hallucination_rate,incongruent_response_rate,mean_cost\n"
    "n=1|strategies=threshold_control,0.640,0.656,0.648,0.239,0.015,1\n"
    "n=3|t=0.5|arb=vote_with_thresh|strategies=aggressive_threshold+threshold_control+vertical_threshold,"
    "0.655,0.672,0.663,0.230,0.011,3\n"
    "n=5|t=0.5|arb=vote_with_thresh|strategies=aggressive_threshold+rerank_threshold+rerank_vertical_threshold+"
    "threshold_control+vertical_threshold,0.684,0.691,0.688,0.220,0.012,5\n";

CalibrationTable table() {
    std::istringstream in(kCalibration);
    return read_calibration_csv(in);
}

Environment open_env() { return Environment{{}, true, true, 1.0}; }

CompositeSla hr_at_most(double t) { return compose_sla({{QosKind::HallucinationRate, SloDirection::AtMost, t}}); }

} // namespace

TEST_CASE("default intent rules") {
    auto rules = IntentRulePack::defaults();
    CHECK(classify_intent("How do I reset my phone?", rules) == IntentLabel::DirectlyAnswerable);
    CHECK(classify_intent("Burger joints near me", rules) == IntentLabel::RequestForList);
    CHECK(classify_intent("", rules) == rules.default_label());
    CHECK(classify_intent("Summarize my bill", rules) == IntentLabel::RequestForSummarization);
}

TEST_CASE("custom rules: first match wins") {
    IntentRulePack rules({{"^refund", IntentLabel::SalesInquiry}, {"refund", IntentLabel::Other}},
                         IntentLabel::NonQuestionStatement);
    CHECK(rules.classify("Refund please") == IntentLabel::SalesInquiry);
    CHECK(rules.classify("a refund") == IntentLabel::Other);
    CHECK(rules.classify("hello") == IntentLabel::NonQuestionStatement);
    check_code([] { IntentRulePack({{"(", IntentLabel::Other}}, IntentLabel::Other); }, ErrorCode::ValidationError);
}

TEST_CASE("fingerprints") {
    std::vector<AgentConfig> agents{agent("b", PreprocessKind::VerticalThreshold),
                                    agent("a", PreprocessKind::AggressiveThreshold)};
    auto fp = ConfigFingerprint::of(agents, {ArbitrationKind::MostRelevant, 0.5, Rounding::Ceil});
    CHECK(fp.to_string() == "n=2|t=0.5|arb=vote_most_relevant|round=ceil|strategies=aggressive_threshold+vertical_threshold");
    CHECK(ConfigFingerprint::parse(fp.to_string()).to_string() == fp.to_string());

    std::vector<AgentConfig> one{agent("x", PreprocessKind::ThresholdControl)};
    CHECK(ConfigFingerprint::of(one, {ArbitrationKind::MostRelevant, 0.7, Rounding::Floor}).to_string() ==
          "n=1|strategies=threshold_control");
    check_code([] { ConfigFingerprint::parse("n=2|strategies=bogus"); }, ErrorCode::ParseError);
}

TEST_CASE("calibration csv") {
    auto t = table();
    CHECK(t.entries().size() == 3);
    auto* row = t.find(ConfigFingerprint::parse("n=1|strategies=threshold_control"));
    REQUIRE(row);
    CHECK(row->measured.at(QosKind::HallucinationRate) == 0.239);
    CHECK(row->cost == 1.0);
    std::istringstream dup(std::string(kCalibration) + "n=1|strategies=threshold_control,0,0,0,0,0,1\n");
    check_code([&] { read_calibration_csv(dup); }, ErrorCode::ValidationError);
    std::istringstream bad("foo,bar\n");
    check_code([&] { read_calibration_csv(bad); }, ErrorCode::ParseError);
}

TEST_CASE("estimate_config dispatch") {
    auto t = table();
    std::vector<AgentConfig> control{agent("c", PreprocessKind::ThresholdControl)};
    auto est = estimate_config(control, {}, t, nullptr);
    CHECK(est.attributes.at(QosKind::Precision) == 0.656);
    CHECK(est.cost == 1.0);

    std::vector<AgentConfig> rerank{agent("r", PreprocessKind::RerankThenThreshold, 2.0)};
    check_code([&] { estimate_config(rerank, {}, t, nullptr); }, ErrorCode::EstimationUnavailable);
    MonteCarloEstimator mc;
    mc.trials = 5000;
    check_code([&] { estimate_config(rerank, {}, t, &mc); }, ErrorCode::EstimationUnavailable);

    rerank[0].profile = AgentProfile{1.0, 0.7, 0.2, 0.1};
    rerank[0].latency = LatencyModel::constant(300);
    auto sim = estimate_config(rerank, {}, t, &mc);
    CHECK(std::abs(sim.attributes.at(QosKind::Precision) - 0.7) < 0.02);
    CHECK(sim.cost == 2.0);
    CHECK(sim.attributes.at(QosKind::LatencyP50) == 300);
}

TEST_CASE("planner examples") {
    auto t = table();
    auto g = five_agent_grid();
    auto n3 = plan(IntentLabel::DirectlyAnswerable, hr_at_most(0.23), open_env(), t, g);
    CHECK(n3.agents.size() == 3);
    CHECK(n3.predicted_cost == 3.0);
    CHECK(n3.fingerprint.to_string() ==
          "n=3|t=0.5|arb=vote_with_thresh|strategies=aggressive_threshold+threshold_control+vertical_threshold");

    auto n1 = plan(IntentLabel::DirectlyAnswerable, hr_at_most(0.30), open_env(), t, g);
    CHECK(n1.agents.size() == 1);
    CHECK(n1.agents[0].agent_id == "agent_control");

    check_code([&] { plan(IntentLabel::DirectlyAnswerable, hr_at_most(0.10), open_env(), t, g); },
               ErrorCode::InfeasibleSla);
}

TEST_CASE("environment filters the pool") {
    auto t = table();
    auto g = five_agent_grid();
    g.agent_pool[1].data_source_policy = {"public"};
    Environment env = open_env();
    // every calibrated row includes control, which now needs a missing store
    check_code([&] { plan(IntentLabel::DirectlyAnswerable, hr_at_most(0.30), env, t, g); }, ErrorCode::InfeasibleSla);
    env.available_stores = {"public"};
    CHECK(plan(IntentLabel::DirectlyAnswerable, hr_at_most(0.30), env, t, g).agents.size() == 1);

    g.agent_pool = {agent("x", PreprocessKind::ThresholdControl)};
    g.agent_pool[0].reasoner = ReasonerKind::ExternalHttp;
    g.agent_pool[0].endpoint = HttpEndpoint{"http://127.0.0.1:1"};
    env.external_api_up = false;
    check_code([&] { plan(IntentLabel::DirectlyAnswerable, hr_at_most(0.30), env, t, g); },
               ErrorCode::EmptySearchSpace);
}

TEST_CASE("cost multiplier scales predictions and ties go to smaller N") {
    std::istringstream in(
        "experiment_version,recall,precision,f1,hallucination_rate,incongruent_response_rate,mean_cost\n"
        "n=1|strategies=threshold_control,0.6,0.6,0.6,0.2,0.0,2\n"
        "n=2|t=0.5|arb=vote_with_thresh|strategies=aggressive_threshold+threshold_control,0.6,0.6,0.6,0.2,0.0,2\n");
    auto t = read_calibration_csv(in);
    SearchGrid g;
    g.agent_pool = {agent("a", PreprocessKind::AggressiveThreshold), agent("c", PreprocessKind::ThresholdControl)};
    g.ensemble_sizes = {1, 2};
    g.thresholds = {0.5};
    g.arbitration_kinds = {ArbitrationKind::RandomWithThreshold};
    Environment env = open_env();
    env.cost_multiplier = 1.5;
    auto best = plan(IntentLabel::DirectlyAnswerable, hr_at_most(0.3), env, t, g);
    CHECK(best.agents.size() == 1);
    CHECK(best.predicted_cost == 3.0);
    CHECK(best.predicted.at(QosKind::CostPerQuery) == 3.0);

    auto cost_cap = compose_sla({{QosKind::CostPerQuery, SloDirection::AtMost, 2.5}});
    check_code([&] { plan(IntentLabel::DirectlyAnswerable, cost_cap, env, t, g); }, ErrorCode::InfeasibleSla);
}

TEST_CASE("empty grid") {
    SearchGrid g;
    check_code([&] { plan(IntentLabel::DirectlyAnswerable, hr_at_most(0.3), open_env(), {}, g); },
               ErrorCode::EmptySearchSpace);
}
