#include "slarag/sla.hpp"

#include <array>
#include <charconv>
#include <set>

#include "slarag/error.hpp"
#include "slarag/text.hpp"

namespace slarag {

namespace {

constexpr std::array<std::pair<QosKind, std::string_view>, 8> kQosNames{{
    {QosKind::Precision, "precision"},
    {QosKind::Recall, "recall"},
    {QosKind::F1, "f1"},
    {QosKind::HallucinationRate, "hallucination_rate"},
    {QosKind::IncongruentResponseRate, "incongruent_response_rate"},
    {QosKind::CostPerQuery, "cost_per_query"},
    {QosKind::LatencyP50, "latency_p50_ms"},
    {QosKind::LatencyMax, "latency_max_ms"},
}};

} // namespace

std::string_view to_string(QosKind kind) {
    for (const auto& [k, name] : kQosNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<QosKind> qos_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kQosNames)
        if (n == name) return k;
    return std::nullopt;
}

bool is_rate(QosKind kind) {
    switch (kind) {
        case QosKind::CostPerQuery:
        case QosKind::LatencyP50:
        case QosKind::LatencyMax:
            return false;
        default:
            return true;
    }
}

bool higher_is_better(QosKind kind) {
    return kind == QosKind::Precision || kind == QosKind::Recall || kind == QosKind::F1;
}

void validate_attribute(const QosAttribute& attr) {
    if (is_rate(attr.kind)) {
        if (!(attr.value >= 0.0 && attr.value <= 1.0))
            throw Error(ErrorCode::ValidationError,
                        std::string(to_string(attr.kind)) + " must lie in [0,1]");
    } else if (!(attr.value >= 0.0)) {
        throw Error(ErrorCode::ValidationError,
                    std::string(to_string(attr.kind)) + " must be non-negative");
    }
}

std::string_view to_string(SloDirection d) {
    return d == SloDirection::AtLeast ? "at_least" : "at_most";
}

std::optional<SloDirection> slo_direction_from_string(std::string_view name) {
    if (name == "at_least" || name == ">=") return SloDirection::AtLeast;
    if (name == "at_most" || name == "<=") return SloDirection::AtMost;
    return std::nullopt;
}

CompositeSla compose_sla(std::vector<Slo> slos, std::string name) {
    if (slos.empty()) throw Error(ErrorCode::EmptySloList, "an SLA needs at least one SLO");
    std::set<QosKind> seen;
    for (const auto& slo : slos) {
        if (!seen.insert(slo.attribute).second)
            throw Error(ErrorCode::DuplicateAttribute, std::string(to_string(slo.attribute)));
        auto expected = higher_is_better(slo.attribute) ? SloDirection::AtLeast : SloDirection::AtMost;
        if (slo.direction != expected)
            throw Error(ErrorCode::InvalidDirection,
                        std::string(to_string(slo.attribute)) + " requires " +
                            std::string(to_string(expected)));
        validate_attribute({slo.attribute, slo.target});
    }
    return CompositeSla{std::move(name), std::move(slos), SlaCombination::Conjunction};
}

ComplianceReport evaluate_slo(const Observations& observed, const CompositeSla& sla) {
    ComplianceReport report;
    report.per_slo.reserve(sla.slos.size());
    for (const auto& slo : sla.slos) {
        auto it = observed.find(slo.attribute);
        if (it == observed.end())
            throw Error(ErrorCode::MissingObservation, std::string(to_string(slo.attribute)));
        double v = it->second;
        bool ok = slo.direction == SloDirection::AtLeast ? v >= slo.target : v <= slo.target;
        report.per_slo.push_back({slo, v, ok});
        report.overall = report.overall && ok;
    }
    return report;
}

CompositeSla parse_sla_expression(std::string_view expr, std::string name) {
    std::vector<Slo> slos;
    for (const auto& raw : text::split(expr, ',')) {
        auto part = text::trim(raw);
        if (part.empty()) continue;
        auto pos = part.find("<=");
        auto dir = SloDirection::AtMost;
        if (pos == std::string_view::npos) {
            pos = part.find(">=");
            dir = SloDirection::AtLeast;
        }
        if (pos == std::string_view::npos)
            throw Error(ErrorCode::ParseError, "expected <= or >= in '" + std::string(part) + "'");
        auto attr_name = text::trim(part.substr(0, pos));
        auto value_text = text::trim(part.substr(pos + 2));
        auto kind = qos_kind_from_string(attr_name);
        if (!kind) throw Error(ErrorCode::ParseError, "unknown attribute '" + std::string(attr_name) + "'");
        double target = 0.0;
        auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), target);
        if (ec != std::errc{} || ptr != value_text.data() + value_text.size())
            throw Error(ErrorCode::ParseError, "bad target '" + std::string(value_text) + "'");
        slos.push_back({*kind, dir, target});
    }
    return compose_sla(std::move(slos), std::move(name));
}

} // namespace slarag
