#include "slarag/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "slarag/config.hpp"
#include "slarag/engine.hpp"
#include "slarag/error.hpp"
#include "slarag/evalsim.hpp"
#include "slarag/http_client.hpp"
#include "slarag/report.hpp"
#include "slarag/synthetic.hpp"
#include "slarag/text.hpp"

extern char** environ;

namespace slarag {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format;
    std::optional<unsigned> threads;
};

ExperimentConfig load_with_flags(const GlobalFlags& g) {
    if (g.config.empty()) throw Error(ErrorCode::ConfigError, "--config is required");
    auto cfg = load_config(g.config, collect_env(environ));
    if (g.seed) cfg.seed = *g.seed;
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    if (!g.format.empty()) cfg.output_format = g.format;
    if (g.threads) cfg.threads = *g.threads;
    return cfg;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
    return out;
}

std::unique_ptr<RelevanceScorer> make_scorer(const ScorerSpec& spec) {
    if (spec.kind == ScorerSpec::Kind::Http) return std::make_unique<HttpScorer>(*spec.endpoint);
    return std::make_unique<JaccardScorer>();
}

std::vector<QueryInput> read_queries(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open queries " + path.string());
    std::vector<QueryInput> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            auto j = json::parse(line);
            out.push_back({j.at("query_id").get<std::string>(), j.at("query").get<std::string>()});
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

SearchGrid grid_from(const ExperimentConfig& cfg) {
    SearchGrid grid;
    grid.agent_pool = cfg.agents;
    if (cfg.planner) {
        grid.ensemble_sizes = cfg.planner->ensemble_sizes;
        grid.thresholds = cfg.planner->thresholds;
        grid.arbitration_kinds = cfg.planner->arbitration_kinds;
        grid.rounding = cfg.planner->rounding;
    } else {
        grid.ensemble_sizes = {cfg.agents.size()};
        grid.thresholds = {cfg.arbitration.threshold};
        grid.arbitration_kinds = {cfg.arbitration.kind};
        grid.rounding = cfg.arbitration.rounding;
    }
    return grid;
}

CalibrationTable calibration_from(const ExperimentConfig& cfg) {
    if (cfg.planner && cfg.planner->calibration) return load_calibration_csv(*cfg.planner->calibration);
    return {};
}

std::optional<MonteCarloEstimator> fallback_from(const ExperimentConfig& cfg) {
    if (!cfg.planner || !cfg.planner->monte_carlo_fallback) return std::nullopt;
    MonteCarloEstimator est;
    est.trials = cfg.planner->fallback_trials;
    est.seed = cfg.seed;
    est.scorer_model = cfg.planner->scorer_model;
    est.p_global_context = cfg.simulation.p_global_context;
    return est;
}

Provenance provenance_of(const ExperimentConfig& cfg) { return {cfg.config_hash, cfg.seed}; }

void write_report(const ExperimentConfig& cfg, const std::vector<ReportRow>& rows) {
    if (cfg.output_format == "json") {
        auto out = open_output(cfg.output_dir, "report.json");
        out << report_to_json(rows, provenance_of(cfg)).dump(2) << '\n';
    } else {
        auto out = open_output(cfg.output_dir, "report.csv");
        write_report_csv(out, rows, provenance_of(cfg));
    }
}

int cmd_run(const GlobalFlags& g, const std::string& sla_expr, std::ostream& out, std::ostream& err) {
    auto cfg = load_with_flags(g);

    std::optional<AnnotatedDataset> dataset;
    if (cfg.dataset) dataset = load_dataset(*cfg.dataset);
    StoreSet stores;
    for (const auto& s : cfg.stores) stores.emplace(s.label, load_store(s.path, s.label, cfg.embedding_dim));

    std::vector<QueryInput> queries;
    if (cfg.queries) {
        queries = read_queries(*cfg.queries);
    } else if (dataset) {
        for (const auto& id : dataset->query_ids()) queries.push_back({id, dataset->representative(id).query});
    } else {
        throw Error(ErrorCode::ConfigError, "queries: needs a queries file or a dataset");
    }

    auto scorer = make_scorer(cfg.scorer);
    EngineDeps deps;
    if (cfg.intent_rules) deps.rules = *cfg.intent_rules;
    deps.calibration = calibration_from(cfg);
    deps.grid = grid_from(cfg);
    deps.fallback = fallback_from(cfg);
    deps.accounting = cfg.accounting;
    deps.runtime.stores = &stores;
    deps.runtime.dataset = dataset ? &*dataset : nullptr;
    deps.runtime.rerank_scorer = scorer.get();
    deps.runtime.prompt_template = cfg.prompt_template;
    deps.runtime.refusal_marker = cfg.refusal_marker;
    deps.runtime.master_seed = cfg.seed;
    deps.arbitration_scorer = scorer.get();

    CompositeSla sla;
    if (!sla_expr.empty()) sla = parse_sla_expression(sla_expr);
    else if (cfg.sla) sla = *cfg.sla;

    if (!cfg.planner) {
        EnsembleConfig fixed;
        fixed.agents = cfg.agents;
        fixed.arbitration = cfg.arbitration;
        fixed.fingerprint = ConfigFingerprint::of(fixed.agents, fixed.arbitration);
        deps.fixed_ensemble = fixed;
    } else if (sla.slos.empty()) {
        throw Error(ErrorCode::ConfigError, "sla: required when a planner is configured");
    }

    Engine engine(std::move(deps));
    // Planning once up front turns an infeasible SLA into an exit code
    // instead of an error in every trace.
    auto chosen = engine.plan_for(IntentLabel::DirectlyAnswerable, sla, cfg.environment);
    auto results = engine.run_batch(queries, sla, cfg.environment, cfg.threads);

    {
        auto traces = open_output(cfg.output_dir, "traces.jsonl");
        write_traces(traces, results, provenance_of(cfg));
    }
    try {
        auto row = summarize(chosen.fingerprint.to_string(), results, cfg.irr);
        write_report(cfg, {row});
        out << "ensemble " << row.experiment_version << '\n';
        out << "precision=" << text::format_fixed(row.metrics.precision, 3)
            << " recall=" << text::format_fixed(row.metrics.recall, 3) << " f1=" << text::format_fixed(row.metrics.f1, 3)
            << " hallucination_rate=" << text::format_fixed(row.metrics.hallucination_rate, 3)
            << " mean_cost=" << text::format_fixed(row.mean_cost, 3) << '\n';
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ValidationError) throw;
        err << "warning: metrics skipped, answers are not labelled (" << e.what() << ")\n";
    }
    out << "wrote " << results.size() << " traces to " << (cfg.output_dir / "traces.jsonl").string() << '\n';
    return 0;
}

int cmd_simulate(const GlobalFlags& g, std::ostream& out, std::ostream& err) {
    auto cfg = load_with_flags(g);
    std::vector<AgentProfile> profiles;
    for (const auto& a : cfg.agents) {
        if (!a.profile) throw Error(ErrorCode::ConfigError, "agents: " + a.agent_id + " has no profile to simulate");
        profiles.push_back(*a.profile);
    }
    SimulationOptions opts;
    opts.trials = cfg.simulation.trials;
    opts.seed = cfg.seed;
    opts.p_global_context = cfg.simulation.p_global_context;
    opts.irr = cfg.irr;
    opts.threads = cfg.threads;
    auto mc = monte_carlo(profiles, profiles.size(), cfg.arbitration, cfg.simulation.scorer_model, opts);
    std::optional<MetricsReport> oracle;
    if (profiles.size() <= kMaxOracleAgents) {
        oracle = brute_force_ensemble_oracle(profiles, cfg.arbitration, cfg.simulation.scorer_model,
                                             cfg.simulation.p_global_context, cfg.irr);
    } else {
        err << "warning: exact oracle skipped for N=" << profiles.size() << " (limit " << kMaxOracleAgents << ")\n";
    }

    auto fingerprint = ConfigFingerprint::of(cfg.agents, cfg.arbitration).to_string();
    std::vector<std::pair<std::string, double MetricsReport::*>> metrics = {
        {"recall", &MetricsReport::recall},
        {"precision", &MetricsReport::precision},
        {"f1", &MetricsReport::f1},
        {"hallucination_rate", &MetricsReport::hallucination_rate},
        {"incongruent_response_rate", &MetricsReport::incongruent_response_rate},
        {"answered_fraction", &MetricsReport::answered_fraction},
    };
    if (cfg.output_format == "json") {
        json j = {{"config_hash", cfg.config_hash}, {"seed", cfg.seed}, {"fingerprint", fingerprint},
                  {"trials", cfg.simulation.trials}};
        for (const auto& [name, field] : metrics) {
            json row = {{"monte_carlo", mc.*field}};
            if (oracle) {
                row["oracle"] = (*oracle).*field;
                row["delta"] = mc.*field - (*oracle).*field;
            }
            j["metrics"][name] = row;
        }
        auto f = open_output(cfg.output_dir, "simulation.json");
        f << j.dump(2) << '\n';
    } else {
        auto f = open_output(cfg.output_dir, "simulation.csv");
        f << "# config_hash=" << cfg.config_hash << " seed=" << cfg.seed << '\n';
        f << "# fingerprint=" << fingerprint << " trials=" << cfg.simulation.trials << '\n';
        f << "metric,monte_carlo,oracle,delta\n";
        for (const auto& [name, field] : metrics) {
            f << name << ',' << text::format_fixed(mc.*field, 6) << ',';
            if (oracle) f << text::format_fixed((*oracle).*field, 6) << ',' << text::format_fixed(mc.*field - (*oracle).*field, 6);
            else f << ',';
            f << '\n';
        }
    }
    out << "simulated " << fingerprint << ": precision=" << text::format_fixed(mc.precision, 4)
        << " recall=" << text::format_fixed(mc.recall, 4) << " f1=" << text::format_fixed(mc.f1, 4) << '\n';
    return 0;
}

json observations_to_json(const Observations& obs) {
    json j = json::object();
    for (const auto& [k, v] : obs) j[std::string(to_string(k))] = v;
    return j;
}

int cmd_plan(const GlobalFlags& g, const std::string& intent_name, const std::string& sla_expr, std::ostream& out) {
    auto cfg = load_with_flags(g);
    if (!cfg.planner) throw Error(ErrorCode::ConfigError, "planner: section is required for plan");
    auto intent = intent_from_string(intent_name);
    if (!intent) throw Error(ErrorCode::ConfigError, "--intent: unknown intent '" + intent_name + "'");
    CompositeSla sla;
    if (!sla_expr.empty()) sla = parse_sla_expression(sla_expr);
    else if (cfg.sla) sla = *cfg.sla;
    else throw Error(ErrorCode::ConfigError, "sla: required for plan");

    auto calibration = calibration_from(cfg);
    auto fallback = fallback_from(cfg);
    if (fallback) fallback->accounting = &cfg.accounting;
    auto chosen = plan(*intent, sla, cfg.environment, calibration, grid_from(cfg), fallback ? &*fallback : nullptr);

    json agents = json::array();
    for (const auto& a : chosen.agents) agents.push_back(a.agent_id);
    json j = {{"intent", std::string(to_string(chosen.intent))},
              {"fingerprint", chosen.fingerprint.to_string()},
              {"agents", agents},
              {"arbitration",
               {{"kind", std::string(to_string(chosen.arbitration.kind))},
                {"threshold", chosen.arbitration.threshold},
                {"rounding", std::string(to_string(chosen.arbitration.rounding))}}},
              {"predicted", observations_to_json(chosen.predicted)},
              {"predicted_cost", chosen.predicted_cost}};
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_eval(const GlobalFlags& g, const std::string& traces_path, std::ostream& out) {
    IrrDenominator irr = IrrDenominator::AnswersProvided;
    fs::path out_dir = g.out_dir.empty() ? fs::path("out") : fs::path(g.out_dir);
    std::string format = g.format.empty() ? "csv" : g.format;
    if (!g.config.empty()) {
        auto cfg = load_with_flags(g);
        irr = cfg.irr;
        out_dir = cfg.output_dir;
        format = cfg.output_format;
    }
    std::ifstream in(traces_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open traces " + traces_path);
    std::optional<Provenance> provenance;
    auto results = read_traces(in, &provenance);
    Provenance prov = provenance.value_or(Provenance{});

    std::string version;
    for (const auto& r : results)
        if (const auto* t = std::get_if<ExecutionTrace>(&r); t && !t->fingerprint.empty()) {
            version = t->fingerprint;
            break;
        }
    auto row = summarize(version, results, irr);
    if (format == "json") {
        auto f = open_output(out_dir, "report.json");
        f << report_to_json({row}, prov).dump(2) << '\n';
    } else {
        auto f = open_output(out_dir, "report.csv");
        write_report_csv(f, {row}, prov);
    }
    write_report_csv(out, {row}, prov);
    return 0;
}

int cmd_synth(const GlobalFlags& g, std::size_t n_queries, std::ostream& out) {
    std::uint64_t seed = g.seed.value_or(0);
    fs::path dir = g.out_dir.empty() ? fs::path("out") : fs::path(g.out_dir);
    auto specs = reference_single_agent_specs();
    auto corpus = generate_synthetic(n_queries, specs, seed);
    {
        auto f = open_output(dir, "dataset.jsonl");
        write_dataset(f, corpus.dataset);
    }
    {
        auto f = open_output(dir, "store.jsonl");
        write_store(f, DocumentStore("public", corpus.documents, 64));
    }
    out << "wrote " << corpus.dataset.records().size() << " records and " << corpus.documents.size()
        << " documents to " << dir.string() << '\n';
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"SLA-driven multi-agent RAG ensembles"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--config", g.config, "experiment config (JSON)");
    app.add_option("--seed", g.seed, "master seed, overrides the config");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

    std::string sla_expr;
    auto* run = app.add_subcommand("run", "execute the queries and write traces and a report");
    run->add_option("--sla", sla_expr, "e.g. hallucination_rate<=0.23,precision>=0.65");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble estimate next to the exact oracle");

    std::string intent_name = "directly_answerable";
    auto* plan_cmd = app.add_subcommand("plan", "pick the cheapest ensemble meeting the SLA");
    plan_cmd->add_option("--intent", intent_name);
    plan_cmd->add_option("--sla", sla_expr);

    std::string traces_path;
    auto* eval = app.add_subcommand("eval", "recompute the report from a traces file");
    eval->add_option("--traces", traces_path)->required();

    std::size_t n_queries = 200;
    auto* synth = app.add_subcommand("synth", "write a synthetic annotated dataset and store");
    synth->add_option("--queries", n_queries)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(g, sla_expr, out, err);
        if (simulate->parsed()) return cmd_simulate(g, out, err);
        if (plan_cmd->parsed()) return cmd_plan(g, intent_name, sla_expr, out);
        if (eval->parsed()) return cmd_eval(g, traces_path, out);
        if (synth->parsed()) return cmd_synth(g, n_queries, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.code()) {
        case ErrorCode::ConfigError:
        case ErrorCode::InvalidThreshold:
        case ErrorCode::EmptySloList:
            return 2;
        case ErrorCode::InfeasibleSla:
            return 3;
        default:
            return 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace slarag
