#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slarag/engine.hpp"
#include "slarag/evalsim.hpp"

namespace slarag {

struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
};

nlohmann::json candidate_to_json(const CandidateResponse& c);
CandidateResponse candidate_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const QueryResult& result);
QueryResult result_from_json(const nlohmann::json& j);

// First line is {"type":"provenance",...}; one result per following line.
void write_traces(std::ostream& out, const std::vector<QueryResult>& results, const Provenance& provenance);
std::vector<QueryResult> read_traces(std::istream& in, std::optional<Provenance>* provenance = nullptr);

// Metric inputs for every executed (directly answerable) query.
std::vector<QueryOutcome> outcomes_from_results(const std::vector<QueryResult>& results);

struct ReportRow {
    std::string experiment_version;
    MetricsReport metrics;
    double mean_cost = 0.0;
    double p50_latency_ms = 0.0;
};

/// Nearest-rank median; 0 for an empty input.
double p50(std::vector<double> values);

// mean c_sys and p50 l_sys over executed traces
ReportRow summarize(std::string experiment_version, const std::vector<QueryResult>& results,
                    IrrDenominator irr = IrrDenominator::AnswersProvided);

inline constexpr const char* kReportHeader =
    "experiment_version,recall,precision,f1,hallucination_rate,incongruent_response_rate,mean_cost,p50_latency_ms,"
    "answered_fraction";

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows, const Provenance& provenance);
nlohmann::json report_to_json(const std::vector<ReportRow>& rows, const Provenance& provenance);

} // namespace slarag
