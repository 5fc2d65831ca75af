#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slarag {

enum class QosKind {
    Precision,
    Recall,
    F1,
    HallucinationRate,
    IncongruentResponseRate,
    CostPerQuery,
    LatencyP50,
    LatencyMax,
};

std::string_view to_string(QosKind kind);
std::optional<QosKind> qos_kind_from_string(std::string_view name);

// Rates and scores live in [0,1]; cost is in currency units, latency in ms.
bool is_rate(QosKind kind);
// Precision, recall and F1 are "higher is better".
bool higher_is_better(QosKind kind);

struct QosAttribute {
    QosKind kind;
    double value;
};

/// Throws ValidationError when a rate is outside [0,1] or a cost/latency is negative.
void validate_attribute(const QosAttribute& attr);

enum class SloDirection { AtLeast, AtMost };

std::string_view to_string(SloDirection d);
std::optional<SloDirection> slo_direction_from_string(std::string_view name);

struct Slo {
    QosKind attribute;
    SloDirection direction;
    double target;

    bool operator==(const Slo&) const = default;
};

enum class SlaCombination { Conjunction };

struct CompositeSla {
    std::string name;
    std::vector<Slo> slos;
    SlaCombination combination = SlaCombination::Conjunction;
};

using Observations = std::map<QosKind, double>;

struct SloCompliance {
    Slo slo;
    double observed;
    bool compliant;
};

struct ComplianceReport {
    std::vector<SloCompliance> per_slo;
    bool overall = true;
};

/// Builds a conjunctive SLA. Rejects an empty list (EmptySloList), a repeated
/// attribute (DuplicateAttribute) and a direction that contradicts the
/// attribute's sense (InvalidDirection).
CompositeSla compose_sla(std::vector<Slo> slos, std::string name = "sla");

/// Boundary-inclusive check of every SLO; throws MissingObservation when an
/// attribute named by the SLA has no observed value.
ComplianceReport evaluate_slo(const Observations& observed, const CompositeSla& sla);

// Parses "hallucination_rate<=0.23,precision>=0.65".
CompositeSla parse_sla_expression(std::string_view expr, std::string name = "cli");

} // namespace slarag
